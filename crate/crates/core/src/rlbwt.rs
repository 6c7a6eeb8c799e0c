//! Run-length encoded BWT: the counting core shared by the r-index family.

use crate::error::{format_err, Result};
use crate::persist::{ByteSink, ByteSource, Persist};
use crate::section::{Role, Section, SectionMap};
use crate::succinct::{RankSelect, SparseBitvector, SymbolSequence};
use crate::SaRange;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Tables {
    n: usize,
    sigma: usize,
    /// Occurrences of symbols smaller than `c`, for `c` in `0..=sigma`.
    c_table: Vec<u64>,
    /// Runs headed by symbols smaller than `c`, for `c` in `0..=sigma`.
    run_offsets: Vec<u64>,
}

impl Persist for Tables {
    fn write_to(&self, out: &mut ByteSink) {
        out.put_usize(self.n);
        out.put_usize(self.sigma);
        out.put_words(&self.c_table);
        out.put_words(&self.run_offsets);
    }

    fn read_from(src: &mut ByteSource<'_>) -> Result<Self> {
        let n = src.get_usize()?;
        let sigma = src.get_usize()?;
        let c_table = src.get_words()?;
        let run_offsets = src.get_words()?;
        if c_table.len() != sigma + 1 || run_offsets.len() != sigma + 1 {
            return format_err("symbol tables have the wrong length");
        }
        if c_table.windows(2).any(|w| w[0] > w[1]) || c_table[sigma] as usize != n {
            return format_err("C table is not a cumulative count of n symbols");
        }
        if run_offsets.windows(2).any(|w| w[0] > w[1]) {
            return format_err("run offsets are not cumulative");
        }
        Ok(Self {
            n,
            sigma,
            c_table,
            run_offsets,
        })
    }
}

/// The BWT as `r` runs: run starts, run letters, and run lengths in
/// lexicographic (F-column) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLengthBwt {
    tables: Tables,
    start: SparseBitvector,
    letters: SymbolSequence,
    /// Starts of the F-column runs, plus a final one at `n`.
    lex_runs: SparseBitvector,
}

impl RunLengthBwt {
    pub fn build(bwt: &[u8], sigma: usize) -> Self {
        assert!(!bwt.is_empty(), "BWT must be nonempty");
        let n = bwt.len();
        let mut starts = Vec::new();
        let mut heads = Vec::new();
        let mut lens: Vec<usize> = Vec::new();
        for (j, &c) in bwt.iter().enumerate() {
            if j == 0 || bwt[j - 1] != c {
                starts.push(j);
                heads.push(c);
                lens.push(0);
            }
            *lens.last_mut().unwrap() += 1;
        }
        let mut counts = vec![0u64; sigma];
        let mut run_counts = vec![0u64; sigma];
        for (&c, &l) in heads.iter().zip(&lens) {
            counts[c as usize] += l as u64;
            run_counts[c as usize] += 1;
        }
        let prefix = |v: &[u64]| {
            let mut acc = vec![0u64; sigma + 1];
            for c in 0..sigma {
                acc[c + 1] = acc[c] + v[c];
            }
            acc
        };
        let c_table = prefix(&counts);
        let run_offsets = prefix(&run_counts);

        // Runs of a symbol keep their BWT order in the F column, so the
        // F-run of the k-th c-run starts at C[c] plus the lengths before it.
        let mut lex_starts = Vec::with_capacity(heads.len() + 1);
        let mut next = c_table.clone();
        let mut by_symbol: Vec<Vec<usize>> = vec![Vec::new(); sigma];
        for (&c, &l) in heads.iter().zip(&lens) {
            by_symbol[c as usize].push(l);
        }
        for (c, lens_c) in by_symbol.iter().enumerate() {
            for &l in lens_c {
                lex_starts.push(next[c] as usize);
                next[c] += l as u64;
            }
        }
        lex_starts.push(n);

        Self {
            tables: Tables {
                n,
                sigma,
                c_table,
                run_offsets,
            },
            start: SparseBitvector::from_positions(n, &starts),
            letters: SymbolSequence::new(&heads, sigma),
            lex_runs: SparseBitvector::from_positions(n + 1, &lex_starts),
        }
    }

    pub fn len(&self) -> usize {
        self.tables.n
    }

    pub fn is_empty(&self) -> bool {
        self.tables.n == 0
    }

    pub fn sigma(&self) -> usize {
        self.tables.sigma
    }

    pub fn runs(&self) -> usize {
        self.letters.len()
    }

    pub fn c(&self, c: u8) -> usize {
        self.tables.c_table[c as usize] as usize
    }

    pub fn letters(&self) -> &SymbolSequence {
        &self.letters
    }

    pub fn start_bits(&self) -> &SparseBitvector {
        &self.start
    }

    /// Run containing BWT position `j`.
    #[inline]
    pub fn run_of(&self, j: usize) -> usize {
        self.start.rank1(j + 1) - 1
    }

    /// Run containing row `j` and its first row.
    #[inline]
    pub fn run_and_start(&self, j: usize) -> (usize, usize) {
        self.start.rank_predecessor(j).expect("row 0 starts a run")
    }

    #[inline]
    pub fn run_start(&self, q: usize) -> usize {
        self.start.select1(q).expect("run index out of range")
    }

    #[inline]
    pub fn run_end(&self, q: usize) -> usize {
        self.start.select1(q + 1).map_or(self.len() - 1, |s| s - 1)
    }

    #[inline]
    pub fn run_letter(&self, q: usize) -> u8 {
        self.letters.get(q)
    }

    #[inline]
    pub fn is_run_end(&self, j: usize) -> bool {
        j + 1 == self.len() || self.start.get(j + 1)
    }

    pub fn access(&self, j: usize) -> Result<u8> {
        self.check(j)?;
        Ok(self.letters.get(self.run_of(j)))
    }

    fn check(&self, j: usize) -> Result<()> {
        if j >= self.len() {
            return Err(crate::Error::OutOfRange {
                what: "BWT position",
                index: j,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Start of the F-column run that receives the `k`-th run of `c`.
    #[inline]
    fn lex_start(&self, c: u8, k: usize) -> usize {
        let idx = self.tables.run_offsets[c as usize] as usize + k;
        self.lex_runs.select1(idx).expect("lex run index out of range")
    }

    /// Occurrences of `c` in `BWT[0, j)`.
    pub fn rank(&self, c: u8, j: usize) -> usize {
        if j == 0 || c as usize >= self.sigma() {
            return 0;
        }
        let (q, start) = self.run_and_start(j - 1);
        let k = self.letters.rank(c, q);
        let before = self.lex_start(c, k) - self.c(c);
        if self.letters.get(q) == c {
            before + (j - start)
        } else {
            before
        }
    }

    /// LF(j) together with the letter `BWT[j]`.
    #[inline]
    pub fn lf_with_letter(&self, j: usize) -> (usize, u8) {
        let (q, start) = self.run_and_start(j);
        let c = self.letters.get(q);
        let k = self.letters.rank(c, q);
        (self.lex_start(c, k) + (j - start), c)
    }

    #[inline]
    pub fn lf(&self, j: usize) -> usize {
        self.lf_with_letter(j).0
    }

    pub fn try_lf(&self, j: usize) -> Result<usize> {
        self.check(j)?;
        Ok(self.lf(j))
    }

    /// LF of a whole interval lying inside one run.
    #[inline]
    pub fn lf_interval(&self, sp: usize, ep: usize) -> (usize, usize) {
        let first = self.lf(sp);
        (first, first + (ep - sp))
    }

    /// LF of row `j` inside run `q`, which begins at row `start`.
    #[inline]
    pub fn lf_in_run(&self, q: usize, start: usize, j: usize) -> usize {
        let c = self.letters.get(q);
        let k = self.letters.rank(c, q);
        self.lex_start(c, k) + (j - start)
    }

    pub fn full_range(&self) -> SaRange {
        SaRange::new(0, self.len() - 1)
    }

    pub fn backward_step(&self, range: SaRange, c: u8) -> Option<SaRange> {
        if c as usize >= self.sigma() {
            return None;
        }
        let base = self.c(c);
        let sp = base + self.rank(c, range.sp);
        let ep = (base + self.rank(c, range.ep + 1)).checked_sub(1)?;
        (sp <= ep).then(|| SaRange::new(sp, ep))
    }

    /// Range of the suffixes prefixed by `pattern` (compact symbols).
    pub fn count(&self, pattern: &[u8]) -> Option<SaRange> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return None;
        }
        let mut range = self.full_range();
        for &c in pattern.iter().rev() {
            range = self.backward_step(range, c)?;
        }
        Some(range)
    }

    /// Run of the largest `j <= ep` with `BWT[j] = c`, which always ends a
    /// run when `BWT[ep] != c`.
    #[inline]
    pub fn last_run_of_symbol(&self, c: u8, ep: usize) -> Option<usize> {
        let q = self.run_of(ep);
        let k = self.letters.rank(c, q + 1);
        k.checked_sub(1).and_then(|k| self.letters.select(c, k))
    }

    pub(crate) fn push_sections(&self, out: &mut Vec<Section>) {
        out.push(Section::new("rl.tables", Role::Counting, &self.tables));
        out.push(Section::new("rl.start", Role::Counting, &self.start));
        out.push(Section::new("rl.letters", Role::Counting, &self.letters));
        out.push(Section::new("rl.lexruns", Role::Counting, &self.lex_runs));
    }

    pub(crate) fn from_sections(map: &SectionMap<'_>) -> Result<Self> {
        let tables: Tables = map.get("rl.tables")?;
        let start: SparseBitvector = map.get("rl.start")?;
        let letters: SymbolSequence = map.get("rl.letters")?;
        let lex_runs: SparseBitvector = map.get("rl.lexruns")?;
        let r = letters.len();
        if start.len() != tables.n
            || start.count_ones() != r
            || r == 0
            || start.select1(0) != Some(0)
            || letters.sigma() != tables.sigma
            || lex_runs.len() != tables.n + 1
            || lex_runs.count_ones() != r + 1
            || tables.run_offsets[tables.sigma] as usize != r
        {
            return format_err("run-length BWT sections are inconsistent");
        }
        for c in 0..tables.sigma {
            let runs_c = (tables.run_offsets[c + 1] - tables.run_offsets[c]) as usize;
            if letters.count(c as u8) != runs_c {
                return format_err("run offsets disagree with run letters");
            }
        }
        Ok(Self {
            tables,
            start,
            letters,
            lex_runs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{SuffixBundle, Text};

    fn t1() -> (Text, SuffixBundle, RunLengthBwt) {
        let t = Text::ingest(b"abaaba").unwrap();
        let b = SuffixBundle::build(&t);
        let rl = RunLengthBwt::build(&b.bwt, t.sigma());
        (t, b, rl)
    }

    #[test]
    fn build_examples() {
        let (_, _, rl) = t1();
        assert_eq!(rl.runs(), 5);
        assert_eq!(rl.start_bits().ones(), vec![0, 1, 3, 4, 5]); // 1101110
        let letters: Vec<u8> = (0..5).map(|q| rl.run_letter(q)).collect();
        assert_eq!(letters, vec![1, 2, 1, 0, 1]);

        assert_eq!(RunLengthBwt::build(&[3; 9], 4).runs(), 1);
        let alt: Vec<u8> = (0..10).map(|i| 1 + (i % 2) as u8).collect();
        assert_eq!(RunLengthBwt::build(&alt, 3).runs(), 10);
    }

    #[test]
    fn access_and_lf() {
        let (_, b, rl) = t1();
        assert_eq!(rl.access(4).unwrap(), 0);
        assert_eq!(rl.access(0).unwrap(), 1);
        assert!(rl.access(7).is_err());
        assert_eq!(rl.lf(0), 1); // ISA[6] in 1-based terms is row 2
        assert_eq!(rl.lf(4), 0);
        for j in 0..7 {
            assert_eq!(rl.lf(j), b.lf(j));
            assert_eq!(rl.access(j).unwrap(), b.bwt[j]);
        }
        let single = RunLengthBwt::build(&[2; 5], 3);
        assert_eq!(single.access(4).unwrap(), 2);
    }

    #[test]
    fn backward_steps() {
        let (_, _, rl) = t1();
        let b_range = rl.backward_step(rl.full_range(), 2).unwrap();
        assert_eq!(b_range, SaRange::new(5, 6));
        assert_eq!(rl.backward_step(b_range, 1), Some(SaRange::new(3, 4)));
        assert_eq!(rl.backward_step(b_range, 0), None);
        assert_eq!(rl.backward_step(b_range, 9), None);
    }

    #[test]
    fn count_examples() {
        let (t, _, rl) = t1();
        let enc = |p: &[u8]| t.alphabet().encode(p).unwrap();
        assert_eq!(rl.count(&enc(b"ab")), Some(SaRange::new(3, 4)));
        assert_eq!(rl.count(&enc(b"abaaba")), Some(SaRange::new(4, 4)));
        assert_eq!(rl.count(&enc(b"abaabaa")), None);
        assert_eq!(rl.count(&enc(b"abaabaaba")), None);
    }

    #[test]
    fn sections_round_trip() {
        let (_, _, rl) = t1();
        let mut secs = Vec::new();
        rl.push_sections(&mut secs);
        let map = SectionMap::from_sections(&secs).unwrap();
        assert_eq!(RunLengthBwt::from_sections(&map).unwrap(), rl);
    }
}

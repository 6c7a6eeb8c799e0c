//! Run-length compressed suffix array: Psi stored as runs per symbol,
//! backward search over Psi, and inverse-phi locating.

use crate::error::{format_err, Result};
use crate::persist::{ByteSink, ByteSource, Persist};
use crate::section::{Role, Section, SectionMap};
use crate::succinct::{width_for, BlockedDeltaSeq, IntVector, RankSelect, SparseBitvector};
use crate::text::SuffixBundle;
use crate::trace::QueryTrace;
use crate::SaRange;

pub const DEFAULT_BLOCK: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Tables {
    n: usize,
    sigma: usize,
    c_table: Vec<u64>,
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
        if c_table.len() != sigma + 1
            || run_offsets.len() != sigma + 1
            || c_table.windows(2).any(|w| w[0] > w[1])
            || run_offsets.windows(2).any(|w| w[0] > w[1])
            || c_table[sigma] as usize != n
            || c_table[0] != 0
            || run_offsets[0] != 0
        {
            return format_err("Psi symbol tables are malformed");
        }
        Ok(Self {
            n,
            sigma,
            c_table,
            run_offsets,
        })
    }
}

/// Psi cut into maximal runs of consecutive values inside one symbol's
/// rows. Run `g` starts at the row of the `g`-th one in `starts`; its head
/// value, shifted by `c * n` so that all symbols share one increasing
/// sequence, is `heads[g]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiRuns {
    tables: Tables,
    heads: BlockedDeltaSeq,
    starts: SparseBitvector,
}

impl PsiRuns {
    pub fn build(bundle: &SuffixBundle, symbols: &[u8], sigma: usize, block: usize) -> Self {
        let n = bundle.len();
        let mut c_table = vec![0u64; sigma + 1];
        for &c in symbols {
            c_table[c as usize + 1] += 1;
        }
        for c in 0..sigma {
            c_table[c + 1] += c_table[c];
        }
        let mut run_offsets = vec![0u64; sigma + 1];
        let mut heads = Vec::new();
        let mut starts = Vec::new();
        for c in 0..sigma {
            let (lo, hi) = (c_table[c] as usize, c_table[c + 1] as usize);
            for i in lo..hi {
                if i == lo || bundle.psi[i] != bundle.psi[i - 1] + 1 {
                    heads.push((c * n + bundle.psi[i]) as u64);
                    starts.push(i);
                }
            }
            run_offsets[c + 1] = heads.len() as u64;
        }
        Self {
            tables: Tables {
                n,
                sigma,
                c_table,
                run_offsets,
            },
            heads: BlockedDeltaSeq::new(&heads, block),
            starts: SparseBitvector::from_positions(n, &starts),
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
        self.heads.len()
    }

    pub fn block_size(&self) -> usize {
        self.heads.block_size()
    }

    pub fn c(&self, c: u8) -> usize {
        self.tables.c_table[c as usize] as usize
    }

    /// First row of run `g`.
    #[inline]
    pub fn run_start(&self, g: usize) -> usize {
        self.starts.select1(g).expect("run index in range")
    }

    /// Row after the last row of run `g`.
    #[inline]
    pub fn run_bound(&self, g: usize) -> usize {
        if g + 1 < self.runs() {
            self.run_start(g + 1)
        } else {
            self.len()
        }
    }

    /// Run containing row `i` and its first row.
    #[inline]
    pub fn run_of(&self, i: usize) -> (usize, usize) {
        self.starts.rank_predecessor(i).expect("row 0 starts a run")
    }

    #[inline]
    pub fn is_run_head(&self, i: usize) -> bool {
        self.starts.get(i)
    }

    #[inline]
    pub fn symbol_of_run(&self, g: usize) -> usize {
        self.heads.get(g) as usize / self.len()
    }

    #[inline]
    pub fn psi(&self, i: usize) -> usize {
        let (g, start) = self.run_of(i);
        let head = self.heads.get(g) as usize % self.len();
        head + (i - start)
    }

    pub fn try_psi(&self, i: usize) -> Result<usize> {
        if i >= self.len() {
            return Err(crate::Error::OutOfRange {
                what: "Psi position",
                index: i,
                len: self.len(),
            });
        }
        Ok(self.psi(i))
    }

    /// Psi of row `i` inside run `g`, which begins at row `start`.
    #[inline]
    pub fn psi_in_run(&self, g: usize, start: usize, i: usize) -> usize {
        self.heads.get(g) as usize % self.len() + (i - start)
    }

    /// Psi of a whole interval inside one run.
    #[inline]
    pub fn psi_interval(&self, lo: usize, hi: usize) -> (usize, usize) {
        let first = self.psi(lo);
        (first, first + (hi - lo))
    }

    pub fn full_range(&self) -> SaRange {
        SaRange::new(0, self.len() - 1)
    }

    /// One backward step. The second value is the run whose head became
    /// `sp'`, or `None` when `sp'` lies inside a run so that
    /// `Psi(sp') = sp`.
    pub fn backward_step_run(&self, range: SaRange, c: u8) -> Option<(SaRange, Option<usize>)> {
        let c = c as usize;
        if c >= self.sigma() {
            return None;
        }
        let (first_run, end_run) = (
            self.tables.run_offsets[c] as usize,
            self.tables.run_offsets[c + 1] as usize,
        );
        if first_run == end_run {
            return None;
        }
        let n = self.len();
        let shift = (c * n) as u64;
        let (sp, head_run) = match self.heads.predecessor(shift + range.sp as u64) {
            Some((h, g)) if g >= first_run => {
                let offset = (shift + range.sp as u64 - h) as usize;
                let start = self.run_start(g);
                if offset < self.run_bound(g) - start {
                    (start + offset, None)
                } else if g + 1 < end_run {
                    (self.run_start(g + 1), Some(g + 1))
                } else {
                    return None;
                }
            }
            _ => (self.run_start(first_run), Some(first_run)),
        };
        let ep = match self.heads.predecessor(shift + range.ep as u64) {
            Some((h, g)) if g >= first_run => {
                let offset = (shift + range.ep as u64 - h) as usize;
                let start = self.run_start(g);
                start + offset.min(self.run_bound(g) - start - 1)
            }
            _ => return None,
        };
        (sp <= ep).then(|| (SaRange::new(sp, ep), head_run))
    }

    pub fn backward_step(&self, range: SaRange, c: u8) -> Option<SaRange> {
        self.backward_step_run(range, c).map(|r| r.0)
    }

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

    pub(crate) fn push_sections(&self, out: &mut Vec<Section>) {
        out.push(Section::new("psi.tables", Role::Counting, &self.tables));
        out.push(Section::new("psi.heads", Role::Counting, &self.heads));
        out.push(Section::new("psi.starts", Role::Counting, &self.starts));
    }

    pub(crate) fn from_sections(map: &SectionMap<'_>) -> Result<Self> {
        let me = Self {
            tables: map.get("psi.tables")?,
            heads: map.get("psi.heads")?,
            starts: map.get("psi.starts")?,
        };
        let r = me.heads.len();
        let t = &me.tables;
        if t.n == 0
            || r == 0
            || me.starts.count_ones() != r
            || me.starts.len() != t.n
            || t.run_offsets[t.sigma] as usize != r
        {
            return format_err("Psi run sections are inconsistent");
        }
        let starts = me.starts.ones();
        let mut prev_bound = 0;
        for (g, (h, &st)) in me.heads.iter().zip(&starts).enumerate() {
            let c = h as usize / t.n;
            let h = h as usize % t.n;
            let on_symbol = c < t.sigma
                && (t.run_offsets[c] as usize..t.run_offsets[c + 1] as usize).contains(&g)
                && (t.c_table[c] as usize..t.c_table[c + 1] as usize).contains(&st);
            let first_of_symbol = g == t.run_offsets[c.min(t.sigma - 1)] as usize;
            if !on_symbol || (first_of_symbol && st != t.c_table[c] as usize) || st < prev_bound {
                return format_err("Psi run sections are inconsistent");
            }
            let bound = starts.get(g + 1).copied().unwrap_or(t.n);
            if h + (bound.min(t.c_table[c + 1] as usize) - st) > t.n {
                return format_err("Psi run overflows the text");
            }
            prev_bound = st + 1;
        }
        Ok(me)
    }
}

/// Marks at the text positions of Psi-run tails, each tied to the head
/// sample of the run that follows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IphiSamples {
    marks: SparseBitvector,
    mark_to_run: IntVector,
    samples: IntVector,
}

impl IphiSamples {
    /// `kept[g]` says whether the head sample of run `g` survives.
    pub(crate) fn build(bundle: &SuffixBundle, psi: &PsiRuns, kept: &[bool]) -> Self {
        let r = psi.runs();
        let n = bundle.len();
        assert_eq!(kept.len(), r);
        let mut slot = vec![0usize; r];
        let mut samples = Vec::new();
        for g in 0..r {
            slot[g] = samples.len();
            if kept[g] {
                samples.push(bundle.sa[psi.run_start(g)] as u64);
            }
        }
        let k = samples.len();
        assert!(k > 0, "at least one sample must survive");
        let mut marks: Vec<(usize, u64)> = (0..r)
            .filter(|&g| kept[g])
            .map(|g| {
                let tail = bundle.sa[psi.run_bound((g + r - 1) % r) - 1];
                (tail, slot[g] as u64)
            })
            .collect();
        marks.sort_unstable();
        let positions: Vec<usize> = marks.iter().map(|m| m.0).collect();
        let targets: Vec<u64> = marks.iter().map(|m| m.1).collect();
        Self {
            marks: SparseBitvector::from_positions(n, &positions),
            mark_to_run: IntVector::from_slice_width(&targets, width_for(k as u64 - 1)),
            samples: IntVector::from_slice_width(&samples, width_for(n as u64 - 1)),
        }
    }

    pub fn text_len(&self) -> usize {
        self.marks.len()
    }

    pub fn marks(&self) -> &SparseBitvector {
        &self.marks
    }

    pub fn mark_to_run(&self) -> &IntVector {
        &self.mark_to_run
    }

    pub fn samples(&self) -> &IntVector {
        &self.samples
    }

    #[inline]
    pub fn sample(&self, slot: usize) -> usize {
        self.samples.get(slot) as usize
    }

    /// Rank of the cyclic successor mark of `j` and the distance to it.
    #[inline]
    pub fn successor(&self, j: usize) -> (usize, usize) {
        match self.marks.rank_successor(j) {
            Some((q, pos)) => (q, pos - j),
            None => (0, self.marks.select1(0).unwrap() + self.text_len() - j),
        }
    }

    #[inline]
    pub fn iphi_from(&self, q: usize, offset: usize) -> usize {
        let n = self.text_len();
        (self.sample(self.mark_to_run.get(q) as usize) + n - offset % n) % n
    }

    /// For `j = SA[i]`, returns `SA[i + 1]`, and `SA[0]` for the last row.
    pub fn iphi(&self, j: usize) -> usize {
        let (q, offset) = self.successor(j);
        self.iphi_from(q, offset)
    }

    #[inline]
    pub(crate) fn iphi_traced(&self, j: usize, trace: &mut QueryTrace) -> usize {
        let (q, offset) = self.successor(j);
        if offset == 0 {
            trace.sample_reads += 1;
        } else {
            trace.phi_steps += 1;
        }
        self.iphi_from(q, offset)
    }

    /// Shifts one stored sample; only for negative tests.
    pub(crate) fn perturb(&mut self) {
        let n = self.text_len() as u64;
        let v = self.samples.get(0);
        self.samples.set(0, (v + 1) % n);
    }

    pub(crate) fn push_sections(&self, out: &mut Vec<Section>) {
        out.push(Section::new("loc.marks", Role::Locating, &self.marks));
        out.push(Section::new("loc.map", Role::Locating, &self.mark_to_run));
        out.push(Section::new("loc.samples", Role::Locating, &self.samples));
    }

    pub(crate) fn from_sections(map: &SectionMap<'_>, n: usize) -> Result<Self> {
        let me = Self {
            marks: map.get("loc.marks")?,
            mark_to_run: map.get("loc.map")?,
            samples: map.get("loc.samples")?,
        };
        let k = me.samples.len();
        if me.marks.len() != n
            || me.marks.count_ones() != k
            || me.mark_to_run.len() != k
            || k == 0
            || me.samples.iter().any(|v| v as usize >= n)
            || me.mark_to_run.iter().any(|v| v as usize >= k)
        {
            return format_err("inverse-phi sections are inconsistent");
        }
        Ok(me)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RCsa {
    psi: PsiRuns,
    loc: IphiSamples,
}

impl RCsa {
    pub fn build(bundle: &SuffixBundle, symbols: &[u8], sigma: usize, block: usize) -> Result<Self> {
        if block == 0 {
            return Err(crate::Error::InvalidParameter("block size must be at least 1".into()));
        }
        let psi = PsiRuns::build(bundle, symbols, sigma, block);
        let loc = IphiSamples::build(bundle, &psi, &vec![true; psi.runs()]);
        Ok(Self { psi, loc })
    }

    pub fn psi_runs(&self) -> &PsiRuns {
        &self.psi
    }

    pub fn samples(&self) -> &IphiSamples {
        &self.loc
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn iphi(&self, j: usize) -> usize {
        self.loc.iphi(j)
    }

    /// Backward search that also yields `SA[sp]`.
    pub fn count_toehold(
        &self,
        pattern: &[u8],
        trace: &mut QueryTrace,
    ) -> Option<(SaRange, usize)> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return None;
        }
        let mut range = self.psi.full_range();
        let mut toehold = self.loc.sample(0);
        for &c in pattern.iter().rev() {
            trace.backward_steps += 1;
            let (next, head) = self.psi.backward_step_run(range, c)?;
            toehold = match head {
                None => toehold - 1,
                Some(g) => self.loc.sample(g),
            };
            range = next;
        }
        Some((range, toehold))
    }

    /// 0-based starting positions, from `SA[sp]` up to `SA[ep]`.
    pub fn locate_traced(&self, pattern: &[u8], trace: &mut QueryTrace) -> Vec<usize> {
        let Some((range, toehold)) = self.count_toehold(pattern, trace) else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(range.len());
        let mut cur = toehold;
        out.push(cur);
        for _ in range.sp..range.ep {
            cur = self.loc.iphi_traced(cur, trace);
            out.push(cur);
        }
        out
    }

    pub(crate) fn perturb(&mut self) {
        self.loc.perturb();
    }

    pub(crate) fn push_sections(&self, out: &mut Vec<Section>) {
        self.psi.push_sections(out);
        self.loc.push_sections(out);
    }

    pub(crate) fn from_sections(map: &SectionMap<'_>) -> Result<Self> {
        let psi = PsiRuns::from_sections(map)?;
        let loc = IphiSamples::from_sections(map, psi.len())?;
        if loc.samples().len() != psi.runs() {
            return format_err("r-CSA needs one sample per run");
        }
        Ok(Self { psi, loc })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Text;

    fn t1(block: usize) -> (Text, SuffixBundle, RCsa) {
        let t = Text::ingest(b"abaaba").unwrap();
        let b = SuffixBundle::build(&t);
        let idx = RCsa::build(&b, t.symbols(), t.sigma(), block).unwrap();
        (t, b, idx)
    }

    #[test]
    fn build_examples() {
        let (_, b, idx) = t1(DEFAULT_BLOCK);
        let psi = idx.psi_runs();
        assert_eq!(psi.runs(), 5);
        // Psi_a = [1,4,6,7] (1-based) splits as [1], [4], [6,7].
        let a_runs: Vec<usize> = (0..5).filter(|&g| psi.symbol_of_run(g) == 1).collect();
        assert_eq!(a_runs.len(), 3);
        let heads: Vec<usize> = (0..5).map(|g| psi.run_start(g)).collect();
        assert_eq!(heads, vec![0, 1, 2, 3, 5]);
        let fsa: Vec<u64> = heads.iter().map(|&i| b.sa[i] as u64).collect();
        assert_eq!(idx.samples().samples().to_vec(), fsa);
        for block in [1, 2, b.len()] {
            let (_, _, other) = t1(block);
            for i in 0..b.len() {
                assert_eq!(other.psi_runs().psi(i), b.psi[i]);
            }
        }
    }

    #[test]
    fn psi_examples() {
        let (_, b, idx) = t1(DEFAULT_BLOCK);
        assert_eq!(idx.psi_runs().psi(4), 6);
        assert_eq!(idx.psi_runs().psi(1), 0);
        assert!(idx.psi_runs().try_psi(7).is_err());
        let mut i = b.isa[0];
        for k in 0..b.len() {
            assert_eq!(b.sa[i], k);
            i = idx.psi_runs().psi(i);
        }
    }

    #[test]
    fn backward_step_examples() {
        let (_, _, idx) = t1(DEFAULT_BLOCK);
        let psi = idx.psi_runs();
        assert_eq!(psi.backward_step(SaRange::new(5, 6), 1), Some(SaRange::new(3, 4)));
        assert_eq!(psi.backward_step(psi.full_range(), 2), Some(SaRange::new(5, 6)));
        assert_eq!(psi.backward_step(SaRange::new(5, 6), 0), None);
        assert_eq!(psi.backward_step(SaRange::new(5, 6), 2), None);
    }

    #[test]
    fn toehold_examples() {
        let (t, _, idx) = t1(DEFAULT_BLOCK);
        let enc = |p: &[u8]| t.alphabet().encode(p).unwrap();
        let mut tr = QueryTrace::default();
        assert_eq!(idx.count_toehold(&enc(b"ab"), &mut tr), Some((SaRange::new(3, 4), 3)));
        assert_eq!(idx.count_toehold(&[0], &mut tr), Some((SaRange::new(0, 0), 6)));
        assert_eq!(idx.count_toehold(&enc(b"aa"), &mut tr), Some((SaRange::new(2, 2), 2)));
    }

    #[test]
    fn iphi_examples() {
        let (t, b, idx) = t1(DEFAULT_BLOCK);
        // 1-based: 7 -> 6, 6 -> 3, 3 -> 4, and 2 wraps to 7.
        assert_eq!(idx.iphi(6), 5);
        assert_eq!(idx.iphi(5), 2);
        assert_eq!(idx.iphi(2), 3);
        assert_eq!(idx.iphi(1), 6);
        let mut cur = b.sa[0];
        for i in 1..b.len() {
            cur = idx.iphi(cur);
            assert_eq!(cur, b.sa[i]);
        }
        let loc = |p: &[u8]| {
            let v = idx.locate_traced(&t.alphabet().encode(p).unwrap(), &mut QueryTrace::default());
            v.iter().map(|x| x + 1).collect::<Vec<_>>()
        };
        assert_eq!(loc(b"a"), vec![6, 3, 4, 1]);
        assert_eq!(loc(b"ab"), vec![4, 1]);
        let mut tr = QueryTrace::default();
        idx.locate_traced(&t.alphabet().encode(b"abaaba").unwrap(), &mut tr);
        assert_eq!(tr.phi_steps + tr.sample_reads, 0);
    }

    #[test]
    fn sections_round_trip() {
        let (_, _, idx) = t1(2);
        let mut secs = Vec::new();
        idx.push_sections(&mut secs);
        let map = SectionMap::from_sections(&secs).unwrap();
        assert_eq!(RCsa::from_sections(&map).unwrap(), idx);
    }
}

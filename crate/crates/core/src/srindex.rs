//! Subsampled r-index: samples closer than `s` to their neighbours are
//! dropped, and locating walks at most `s - 1` LF steps per value.

use crate::error::{format_err, Result};
use crate::rindex::{letter_pos, LocateSamples};
use crate::rlbwt::RunLengthBwt;
use crate::section::{Role, Section, SectionMap};
use crate::succinct::{width_for, DenseBitvector, IntVector, RankSelect};
use crate::text::SuffixBundle;
use crate::trace::QueryTrace;
use crate::SaRange;

/// How much extra is stored to skip hopeless walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Variant {
    /// No extra structure.
    Plain,
    /// One bit per mark: were marks removed up to the next one?
    Valid,
    /// Also the distance to the first removed mark.
    ValidArea,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Plain, Variant::Valid, Variant::ValidArea];

    pub fn from_index(v: u64) -> Result<Self> {
        match v {
            0 => Ok(Variant::Plain),
            1 => Ok(Variant::Valid),
            2 => Ok(Variant::ValidArea),
            _ => Err(crate::Error::InvalidParameter(format!("variant must be 0, 1 or 2, got {v}"))),
        }
    }

    pub fn index(self) -> u64 {
        self as u64
    }
}

/// Keep flags for `sorted` (strictly increasing) under factor `s`.
///
/// Sweeps left to right against the last survivor: `v[i]` goes when
/// `v[i + 1] - survivor <= s`. The two ends always stay.
pub fn subsample(sorted: &[usize], s: usize) -> Vec<bool> {
    let mut keep = vec![true; sorted.len()];
    if sorted.len() < 3 {
        return keep;
    }
    let mut survivor = sorted[0];
    for i in 1..sorted.len() - 1 {
        if sorted[i + 1] - survivor <= s {
            keep[i] = false;
        } else {
            survivor = sorted[i];
        }
    }
    keep
}

/// Result of subsampling the run-end samples of a BWT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsamplePlan {
    pub s: usize,
    /// Surviving sample positions, ascending.
    pub kept: Vec<usize>,
    /// Removed samples, ascending.
    pub removed: Vec<usize>,
    /// `kept_by_run[p]` for each BWT run.
    pub kept_by_run: Vec<bool>,
}

impl SubsamplePlan {
    /// `values[p]` is the sample of run `p`; all values are distinct.
    pub fn new(values: &[usize], s: usize) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_unstable_by_key(|&p| values[p]);
        let sorted: Vec<usize> = order.iter().map(|&p| values[p]).collect();
        let keep = subsample(&sorted, s);
        let mut kept_by_run = vec![false; values.len()];
        let (mut kept, mut removed) = (Vec::new(), Vec::new());
        for (i, &p) in order.iter().enumerate() {
            kept_by_run[p] = keep[i];
            if keep[i] {
                kept.push(sorted[i]);
            } else {
                removed.push(sorted[i]);
            }
        }
        Self {
            s,
            kept,
            removed,
            kept_by_run,
        }
    }
}

/// Bits per mark saying whether marks were dropped up to the next one, and
/// for each 0 the distance to the first dropped mark, capped at `s - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Validity {
    pub valid: DenseBitvector,
    pub area: Option<IntVector>,
}

impl Validity {
    /// `marks` are all original marks as (position, kept), in position
    /// order; `forward` looks at the gap after a kept mark, otherwise at
    /// the gap before it.
    pub fn build(
        marks: &[(usize, bool)],
        n: usize,
        s: usize,
        forward: bool,
        with_area: bool,
    ) -> Self {
        let total = marks.len();
        let mut bits = Vec::new();
        let mut area = Vec::new();
        for (a, &(pos, kept)) in marks.iter().enumerate() {
            if !kept {
                continue;
            }
            let b = if forward { (a + 1) % total } else { (a + total - 1) % total };
            let (npos, nkept) = marks[b];
            let clean = nkept;
            bits.push(clean);
            if !clean {
                let d = if forward { (npos + n - pos) % n } else { (pos + n - npos) % n };
                area.push(d.min(s - 1) as u64);
            }
        }
        Self {
            valid: DenseBitvector::from_bits(bits),
            area: with_area
                .then(|| IntVector::from_slice_width(&area, width_for(s.saturating_sub(1) as u64))),
        }
    }

    /// Is a jump of `offset` from kept mark `q` free of dropped marks?
    #[inline]
    pub fn safe(&self, q: usize, offset: usize) -> bool {
        if self.valid.get(q) {
            return true;
        }
        match &self.area {
            Some(area) => offset < area.get(self.valid.rank0(q)) as usize,
            None => false,
        }
    }

    pub fn push_sections(&self, prefix: &str, out: &mut Vec<Section>) {
        out.push(Section::new(&format!("{prefix}.valid"), Role::Locating, &self.valid));
        if let Some(area) = &self.area {
            out.push(Section::new(&format!("{prefix}.validarea"), Role::Locating, area));
        }
    }

    pub fn from_sections(
        map: &SectionMap<'_>,
        prefix: &str,
        marks: usize,
        variant: Variant,
    ) -> Result<Option<Self>> {
        if variant == Variant::Plain {
            return Ok(None);
        }
        let valid: DenseBitvector = map.get(&format!("{prefix}.valid"))?;
        if valid.len() != marks {
            return format_err("validity bits do not match the marks");
        }
        let area = if variant == Variant::ValidArea {
            let area: IntVector = map.get(&format!("{prefix}.validarea"))?;
            if area.len() != valid.count_zeros() || area.iter().any(|d| d == 0) {
                return format_err("valid-area entries do not match the validity bits");
            }
            Some(area)
        } else {
            None
        };
        Ok(Some(Self { valid, area }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrIndex {
    rl: RunLengthBwt,
    loc: LocateSamples,
    removed: DenseBitvector,
    validity: Option<Validity>,
    s: usize,
    variant: Variant,
}

impl SrIndex {
    pub fn build(bundle: &SuffixBundle, sigma: usize, s: usize, variant: Variant) -> Result<Self> {
        let rl = RunLengthBwt::build(&bundle.bwt, sigma);
        Self::from_parts(bundle, rl, s, variant)
    }

    pub fn from_parts(
        bundle: &SuffixBundle,
        rl: RunLengthBwt,
        s: usize,
        variant: Variant,
    ) -> Result<Self> {
        if s == 0 {
            return Err(crate::Error::InvalidParameter("s must be at least 1".into()));
        }
        let r = rl.runs();
        let n = bundle.len();
        let values: Vec<usize> = (0..r).map(|p| letter_pos(&bundle.sa, rl.run_end(p))).collect();
        let plan = SubsamplePlan::new(&values, s);
        let kept = &plan.kept_by_run;
        let loc = LocateSamples::build(bundle, &rl, kept);
        let removed = DenseBitvector::from_bits(kept.iter().map(|&k| !k));
        let validity = (variant != Variant::Plain).then(|| {
            let mut marks: Vec<(usize, bool)> = (0..r)
                .map(|q| (letter_pos(&bundle.sa, rl.run_start(q)), kept[(q + r - 1) % r]))
                .collect();
            marks.sort_unstable();
            Validity::build(&marks, n, s, true, variant == Variant::ValidArea)
        });
        Ok(Self {
            rl,
            loc,
            removed,
            validity,
            s,
            variant,
        })
    }

    pub fn rlbwt(&self) -> &RunLengthBwt {
        &self.rl
    }

    pub fn samples(&self) -> &LocateSamples {
        &self.loc
    }

    pub fn removed(&self) -> &DenseBitvector {
        &self.removed
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn kept(&self) -> usize {
        self.loc.samples().len()
    }

    pub fn len(&self) -> usize {
        self.rl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rl.is_empty()
    }

    /// Surviving sample of run `q`, if its last row is given.
    #[inline]
    fn kept_sample(&self, q: usize) -> Option<usize> {
        (!self.removed.get(q)).then(|| self.loc.sample(self.removed.rank0(q)))
    }

    /// Letter position of the last row of run `p`, walking LF to the
    /// nearest surviving sample.
    fn run_end_letter(&self, p: usize, trace: &mut QueryTrace) -> usize {
        let n = self.len();
        let mut j = self.rl.run_end(p);
        let mut k = 0;
        loop {
            if self.rl.is_run_end(j) {
                if let Some(v) = self.kept_sample(self.rl.run_of(j)) {
                    trace.lf_steps += k as u64;
                    trace.walk(k as u64);
                    return (v + k) % n;
                }
            }
            j = self.rl.lf(j);
            k += 1;
        }
    }

    /// Backward search that resolves `SA[ep]` once, at the end.
    pub fn count_toehold(
        &self,
        pattern: &[u8],
        trace: &mut QueryTrace,
    ) -> Option<(SaRange, usize)> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return None;
        }
        let n = self.len() as i64;
        let mut range = self.rl.full_range();
        let mut hard = self.rl.runs() - 1;
        let mut easy: i64 = -1;
        for &c in pattern.iter().rev() {
            trace.backward_steps += 1;
            let next = self.rl.backward_step(range, c)?;
            if self.rl.run_letter(self.rl.run_of(range.ep)) == c {
                easy += 1;
            } else {
                hard = self.rl.last_run_of_symbol(c, range.ep)?;
                easy = 0;
            }
            range = next;
        }
        let base = self.run_end_letter(hard, trace) as i64;
        Some((range, (base - easy).rem_euclid(n) as usize))
    }

    /// 0-based starting positions, from `SA[ep]` down to `SA[sp]`.
    pub fn locate_traced(&self, pattern: &[u8], trace: &mut QueryTrace) -> Vec<usize> {
        let Some((range, toehold)) = self.count_toehold(pattern, trace) else {
            return Vec::new();
        };
        let occ = range.len();
        let mut res = vec![usize::MAX; occ];
        res[occ - 1] = toehold;
        if occ > 1 {
            self.resolve(range.sp, range.ep - 1, &mut res, trace);
        }
        res.reverse();
        res
    }

    /// Fills `res[o]` for the rows `sp + o`, `o < res.len() - 1`, given the
    /// last entry. Work goes depth first, lower rows first, so the row just
    /// below any piece is always known.
    fn resolve(&self, sp: usize, ep: usize, res: &mut [usize], trace: &mut QueryTrace) {
        struct Piece {
            lo: usize,
            hi: usize,
            orig: usize,
            level: usize,
            run: usize,
            start: usize,
            at_end: bool,
        }
        let n = self.len();
        let mut stack = Vec::new();
        let mut pieces = Vec::new();
        let mut split = |lo: usize, hi: usize, orig: usize, level: usize, stack: &mut Vec<Piece>| {
            pieces.clear();
            let mut top = hi;
            let (mut run, mut start) = self.rl.run_and_start(top);
            let mut at_end = self.rl.is_run_end(top);
            loop {
                let first = start.max(lo);
                pieces.push(Piece {
                    lo: first,
                    hi: top,
                    orig: orig + (first - lo),
                    level,
                    run,
                    start,
                    at_end,
                });
                if first == lo {
                    break;
                }
                top = start - 1;
                run -= 1;
                start = self.rl.run_start(run);
                at_end = true;
            }
            stack.extend(pieces.drain(..).rev());
        };
        split(sp, ep, 0, 0, &mut stack);
        while let Some(Piece { lo, mut hi, orig, level, run, start, at_end }) = stack.pop() {
            let row = |j: usize| orig + (j - lo);
            if at_end {
                if let Some(v) = self.kept_sample(run) {
                    res[row(hi)] = (v + 1 + level) % n;
                    trace.sample_reads += 1;
                    if hi == lo {
                        continue;
                    }
                    hi -= 1;
                }
            }
            if let Some(validity) = &self.validity {
                let mut done = false;
                loop {
                    let o = row(hi);
                    debug_assert_ne!(res[o + 1], usize::MAX);
                    let (q, offset) = self.loc.predecessor((res[o + 1] + n - 1) % n);
                    if !validity.safe(q, offset) {
                        break;
                    }
                    res[o] = self.phi_counted(q, offset, trace);
                    if hi == lo {
                        done = true;
                        break;
                    }
                    hi -= 1;
                }
                if done {
                    continue;
                }
            }
            if level + 1 >= self.s {
                for o in (row(lo)..=row(hi)).rev() {
                    res[o] = self.loc.phi_traced(res[o + 1], trace);
                }
                continue;
            }
            trace.lf_steps += 1;
            trace.walk(level as u64 + 1);
            let a = self.rl.lf_in_run(run, start, lo);
            split(a, a + (hi - lo), orig, level + 1, &mut stack);
        }
    }

    fn phi_counted(&self, q: usize, offset: usize, trace: &mut QueryTrace) -> usize {
        if offset == 0 {
            trace.sample_reads += 1;
        } else {
            trace.phi_steps += 1;
        }
        self.loc.phi_from(q, offset)
    }

    pub(crate) fn perturb(&mut self) {
        self.loc.perturb();
    }

    pub(crate) fn push_sections(&self, out: &mut Vec<Section>) {
        self.rl.push_sections(out);
        self.loc.push_sections(out);
        out.push(Section::new("sr.removed", Role::Locating, &self.removed));
        if let Some(v) = &self.validity {
            v.push_sections("sr", out);
        }
    }

    pub(crate) fn from_sections(map: &SectionMap<'_>, s: usize, variant: Variant) -> Result<Self> {
        if s == 0 {
            return format_err("s must be at least 1");
        }
        let rl = RunLengthBwt::from_sections(map)?;
        let loc = LocateSamples::from_sections(map, rl.len())?;
        let removed: DenseBitvector = map.get("sr.removed")?;
        if removed.len() != rl.runs() || removed.count_zeros() != loc.samples().len() {
            return format_err("removed bits do not match the samples");
        }
        let validity = Validity::from_sections(map, "sr", loc.samples().len(), variant)?;
        Ok(Self {
            rl,
            loc,
            removed,
            validity,
            s,
            variant,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rindex::RIndex;
    use crate::text::Text;

    #[test]
    fn subsample_examples() {
        assert_eq!(subsample(&[0, 1, 2, 3, 6], 4), vec![true, false, false, true, true]);
        let v = [0, 1, 2, 3, 6, 9, 10];
        assert!(subsample(&v, 1).iter().all(|&k| k));
        let spaced: Vec<usize> = (0..20).map(|i| i * 5).collect();
        assert!(subsample(&spaced, 4).iter().all(|&k| k));
        assert_eq!(subsample(&[3], 8), vec![true]);
    }

    fn t1(s: usize, variant: Variant) -> (Text, SrIndex) {
        let t = Text::ingest(b"abaaba").unwrap();
        let b = SuffixBundle::build(&t);
        let idx = SrIndex::build(&b, t.sigma(), s, variant).unwrap();
        (t, idx)
    }

    #[test]
    fn build_examples() {
        let (_, idx) = t1(4, Variant::Plain);
        assert_eq!(idx.kept(), 3);
        assert_eq!(idx.samples().marks().count_ones(), 3);
        let t = Text::ingest(b"abaaba").unwrap();
        let b = SuffixBundle::build(&t);
        let full = RIndex::build(&b, t.sigma());
        for v in Variant::ALL {
            let (_, idx) = t1(1, v);
            assert_eq!(idx.samples(), full.samples());
            assert_eq!(idx.removed().count_ones(), 0);
        }
    }

    #[test]
    fn toehold_and_locate_examples() {
        for v in Variant::ALL {
            let (t, idx) = t1(4, v);
            let enc = |p: &[u8]| t.alphabet().encode(p).unwrap();
            let mut tr = QueryTrace::default();
            assert_eq!(idx.count_toehold(&enc(b"ab"), &mut tr), Some((SaRange::new(3, 4), 0)));
            assert!(tr.max_walk < 4);
            let loc = |p: &[u8]| {
                let mut out = idx.locate_traced(&enc(p), &mut QueryTrace::default());
                out.sort_unstable();
                out.iter().map(|x| x + 1).collect::<Vec<_>>()
            };
            assert_eq!(loc(b"a"), vec![1, 3, 4, 6]);
            assert_eq!(loc(b"ab"), vec![1, 4]);
            assert_eq!(loc(b"b"), vec![2, 5]);
            assert!(loc(b"bb").is_empty());
        }
    }

    #[test]
    fn sections_round_trip() {
        for v in Variant::ALL {
            let (_, idx) = t1(2, v);
            let mut secs = Vec::new();
            idx.push_sections(&mut secs);
            let map = SectionMap::from_sections(&secs).unwrap();
            assert_eq!(SrIndex::from_sections(&map, 2, v).unwrap(), idx);
        }
    }
}

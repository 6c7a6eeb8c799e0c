//! Subsampled r-CSA: the mirror image of the subsampled r-index, walking
//! Psi forward to the next surviving run-head sample.

use crate::error::{format_err, Result};
use crate::rcsa::{IphiSamples, PsiRuns};
use crate::section::{Role, Section, SectionMap};
use crate::srindex::{Validity, Variant};
use crate::succinct::{DenseBitvector, RankSelect};
use crate::text::SuffixBundle;
use crate::trace::QueryTrace;
use crate::SaRange;

/// Keep flags for `sorted` (strictly increasing) under factor `s`, sweeping
/// right to left against the last survivor: `v[i]` goes when
/// `survivor - v[i - 1] <= s`. The two ends always stay.
pub fn subsample_backward(sorted: &[usize], s: usize) -> Vec<bool> {
    let len = sorted.len();
    let mut keep = vec![true; len];
    if len < 3 {
        return keep;
    }
    let mut survivor = sorted[len - 1];
    for i in (1..len - 1).rev() {
        if survivor - sorted[i - 1] <= s {
            keep[i] = false;
        } else {
            survivor = sorted[i];
        }
    }
    keep
}

/// Keep flags per run for head samples `values[g]`, plus the sorted kept
/// and removed values.
pub fn plan_backward(values: &[usize], s: usize) -> (Vec<bool>, Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by_key(|&g| values[g]);
    let sorted: Vec<usize> = order.iter().map(|&g| values[g]).collect();
    let keep = subsample_backward(&sorted, s);
    let mut by_run = vec![false; values.len()];
    let (mut kept, mut removed) = (Vec::new(), Vec::new());
    for (i, &g) in order.iter().enumerate() {
        by_run[g] = keep[i];
        if keep[i] {
            kept.push(sorted[i]);
        } else {
            removed.push(sorted[i]);
        }
    }
    (by_run, kept, removed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrCsa {
    psi: PsiRuns,
    loc: IphiSamples,
    removed: DenseBitvector,
    validity: Option<Validity>,
    s: usize,
    variant: Variant,
}

impl SrCsa {
    pub fn build(
        bundle: &SuffixBundle,
        symbols: &[u8],
        sigma: usize,
        block: usize,
        s: usize,
        variant: Variant,
    ) -> Result<Self> {
        if block == 0 {
            return Err(crate::Error::InvalidParameter("block size must be at least 1".into()));
        }
        if s == 0 {
            return Err(crate::Error::InvalidParameter("s must be at least 1".into()));
        }
        let psi = PsiRuns::build(bundle, symbols, sigma, block);
        let r = psi.runs();
        let n = bundle.len();
        let values: Vec<usize> = (0..r).map(|g| bundle.sa[psi.run_start(g)]).collect();
        let (kept, _, _) = plan_backward(&values, s);
        let loc = IphiSamples::build(bundle, &psi, &kept);
        let removed = DenseBitvector::from_bits(kept.iter().map(|&k| !k));
        let validity = (variant != Variant::Plain).then(|| {
            let mut marks: Vec<(usize, bool)> = (0..r)
                .map(|g| (bundle.sa[psi.run_bound((g + r - 1) % r) - 1], kept[g]))
                .collect();
            marks.sort_unstable();
            Validity::build(&marks, n, s, false, variant == Variant::ValidArea)
        });
        Ok(Self {
            psi,
            loc,
            removed,
            validity,
            s,
            variant,
        })
    }

    pub fn psi_runs(&self) -> &PsiRuns {
        &self.psi
    }

    pub fn samples(&self) -> &IphiSamples {
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
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    #[inline]
    fn kept_sample(&self, g: usize) -> Option<usize> {
        (!self.removed.get(g)).then(|| self.loc.sample(self.removed.rank0(g)))
    }

    /// `SA` at the head of run `g`, walking Psi to the next surviving head.
    fn run_head_text(&self, g: usize, trace: &mut QueryTrace) -> usize {
        let n = self.len();
        let mut i = self.psi.run_start(g);
        let mut k = 0;
        loop {
            let (h, start) = self.psi.run_of(i);
            if start == i {
                if let Some(v) = self.kept_sample(h) {
                    trace.psi_steps += k as u64;
                    trace.walk(k as u64);
                    return (v + n - k % n) % n;
                }
            }
            i = self.psi.psi(i);
            k += 1;
        }
    }

    /// Backward search that resolves `SA[sp]` once, at the end.
    pub fn count_toehold(
        &self,
        pattern: &[u8],
        trace: &mut QueryTrace,
    ) -> Option<(SaRange, usize)> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return None;
        }
        let n = self.len() as i64;
        let mut range = self.psi.full_range();
        let mut hard = 0;
        let mut easy: i64 = 0;
        for &c in pattern.iter().rev() {
            trace.backward_steps += 1;
            let (next, head) = self.psi.backward_step_run(range, c)?;
            match head {
                None => easy += 1,
                Some(g) => {
                    hard = g;
                    easy = 0;
                }
            }
            range = next;
        }
        let base = self.run_head_text(hard, trace) as i64;
        Some((range, (base - easy).rem_euclid(n) as usize))
    }

    /// 0-based starting positions, from `SA[sp]` up to `SA[ep]`.
    pub fn locate_traced(&self, pattern: &[u8], trace: &mut QueryTrace) -> Vec<usize> {
        let Some((range, toehold)) = self.count_toehold(pattern, trace) else {
            return Vec::new();
        };
        let mut res = vec![usize::MAX; range.len()];
        res[0] = toehold;
        if range.len() > 1 {
            self.resolve(range.sp + 1, range.ep, &mut res, trace);
        }
        res
    }

    /// Fills `res[o]` for rows `sp - 1 + o`, `o >= 1`, given `res[0]`.
    /// Depth first, upper rows first, so the row above any piece is known.
    fn resolve(&self, sp: usize, ep: usize, res: &mut [usize], trace: &mut QueryTrace) {
        struct Piece {
            lo: usize,
            hi: usize,
            orig: usize,
            level: usize,
            run: usize,
            start: usize,
        }
        let n = self.len();
        let mut stack = Vec::new();
        let mut pieces = Vec::new();
        let mut split = |lo: usize, hi: usize, orig: usize, level: usize, stack: &mut Vec<Piece>| {
            pieces.clear();
            let mut bottom = lo;
            let (mut run, mut start) = self.psi.run_of(bottom);
            loop {
                let bound = self.psi.run_bound(run);
                let end = (bound - 1).min(hi);
                pieces.push(Piece {
                    lo: bottom,
                    hi: end,
                    orig: orig + (bottom - lo),
                    level,
                    run,
                    start,
                });
                if end == hi {
                    break;
                }
                bottom = bound;
                start = bound;
                run += 1;
            }
            stack.extend(pieces.drain(..).rev());
        };
        split(sp, ep, 1, 0, &mut stack);
        while let Some(Piece { mut lo, hi, mut orig, level, run, start }) = stack.pop() {
            if start == lo {
                if let Some(v) = self.kept_sample(run) {
                    res[orig] = (v + n - level % n) % n;
                    trace.sample_reads += 1;
                    if lo == hi {
                        continue;
                    }
                    lo += 1;
                    orig += 1;
                }
            }
            if let Some(validity) = &self.validity {
                let mut done = false;
                loop {
                    debug_assert_ne!(res[orig - 1], usize::MAX);
                    let (q, offset) = self.loc.successor(res[orig - 1]);
                    if !validity.safe(q, offset) {
                        break;
                    }
                    res[orig] = self.iphi_counted(q, offset, trace);
                    if lo == hi {
                        done = true;
                        break;
                    }
                    lo += 1;
                    orig += 1;
                }
                if done {
                    continue;
                }
            }
            if level + 1 >= self.s {
                for o in orig..=orig + (hi - lo) {
                    res[o] = self.loc.iphi_traced(res[o - 1], trace);
                }
                continue;
            }
            trace.psi_steps += 1;
            trace.walk(level as u64 + 1);
            let a = self.psi.psi_in_run(run, start, lo);
            split(a, a + (hi - lo), orig, level + 1, &mut stack);
        }
    }

    fn iphi_counted(&self, q: usize, offset: usize, trace: &mut QueryTrace) -> usize {
        if offset == 0 {
            trace.sample_reads += 1;
        } else {
            trace.phi_steps += 1;
        }
        self.loc.iphi_from(q, offset)
    }

    pub(crate) fn perturb(&mut self) {
        self.loc.perturb();
    }

    pub(crate) fn push_sections(&self, out: &mut Vec<Section>) {
        self.psi.push_sections(out);
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
        let psi = PsiRuns::from_sections(map)?;
        let loc = IphiSamples::from_sections(map, psi.len())?;
        let removed: DenseBitvector = map.get("sr.removed")?;
        if removed.len() != psi.runs() || removed.count_zeros() != loc.samples().len() {
            return format_err("removed bits do not match the samples");
        }
        let validity = Validity::from_sections(map, "sr", loc.samples().len(), variant)?;
        Ok(Self {
            psi,
            loc,
            removed,
            validity,
            s,
            variant,
        })
    }
}

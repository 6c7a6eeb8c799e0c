//! r-index locating: a toehold kept during backward search, then phi.

use crate::error::{format_err, Result};
use crate::rlbwt::RunLengthBwt;
use crate::section::{Role, Section, SectionMap};
use crate::succinct::{width_for, IntVector, RankSelect, SparseBitvector};
use crate::text::SuffixBundle;
use crate::trace::QueryTrace;
use crate::SaRange;

/// Text position of the letter `BWT[j]`, cyclically: `SA[j] - 1`, with the
/// sentinel's letter at `n - 1`.
#[inline]
pub fn letter_pos(sa: &[usize], j: usize) -> usize {
    let n = sa.len();
    (sa[j] + n - 1) % n
}

/// Marks over text positions, each tied to one stored sample.
///
/// The mark at the first letter of run `q` stores `q'` such that the sample
/// of the preceding run sits at slot `q' - 1` (cyclically). With no runs
/// dropped this is the usual First / FirstToRun / Samples triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocateSamples {
    marks: SparseBitvector,
    mark_to_run: IntVector,
    samples: IntVector,
}

impl LocateSamples {
    /// `kept[p]` says whether the sample of run `p` survives.
    pub(crate) fn build(bundle: &SuffixBundle, rl: &RunLengthBwt, kept: &[bool]) -> Self {
        let r = rl.runs();
        assert_eq!(kept.len(), r);
        let mut slot = vec![0usize; r];
        let mut samples = Vec::new();
        for p in 0..r {
            slot[p] = samples.len();
            if kept[p] {
                samples.push(letter_pos(&bundle.sa, rl.run_end(p)) as u64);
            }
        }
        let k = samples.len();
        assert!(k > 0, "at least one sample must survive");
        let mut marks: Vec<(usize, u64)> = (0..r)
            .filter(|&q| kept[(q + r - 1) % r])
            .map(|q| {
                let pos = letter_pos(&bundle.sa, rl.run_start(q));
                (pos, ((slot[(q + r - 1) % r] + 1) % k) as u64)
            })
            .collect();
        marks.sort_unstable();
        let positions: Vec<usize> = marks.iter().map(|m| m.0).collect();
        let targets: Vec<u64> = marks.iter().map(|m| m.1).collect();
        let n = bundle.len();
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

    /// Rank of the cyclic predecessor mark of `i` and the distance to it.
    #[inline]
    pub fn predecessor(&self, i: usize) -> (usize, usize) {
        let n = self.text_len();
        match self.marks.rank_predecessor(i) {
            Some((q, pos)) => (q, i - pos),
            None => {
                let last = self.marks.count_ones() - 1;
                (last, i + n - self.marks.select1(last).unwrap())
            }
        }
    }

    /// phi given the predecessor mark `q` of `i` at distance `offset`.
    #[inline]
    pub fn phi_from(&self, q: usize, offset: usize) -> usize {
        let k = self.samples.len();
        let slot = (self.mark_to_run.get(q) as usize + k - 1) % k;
        (self.sample(slot) + 1 + offset) % self.text_len()
    }

    /// For `i = SA[j] - 1`, returns `SA[j - 1]`.
    pub fn phi(&self, i: usize) -> usize {
        let (q, offset) = self.predecessor(i);
        self.phi_from(q, offset)
    }

    #[inline]
    pub(crate) fn phi_traced(&self, sa: usize, trace: &mut QueryTrace) -> usize {
        let n = self.text_len();
        let (q, offset) = self.predecessor((sa + n - 1) % n);
        if offset == 0 {
            trace.sample_reads += 1;
        } else {
            trace.phi_steps += 1;
        }
        self.phi_from(q, offset)
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
            return format_err("locate sample sections are inconsistent");
        }
        Ok(me)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RIndex {
    rl: RunLengthBwt,
    loc: LocateSamples,
}

impl RIndex {
    pub fn build(bundle: &SuffixBundle, sigma: usize) -> Self {
        let rl = RunLengthBwt::build(&bundle.bwt, sigma);
        Self::from_parts(bundle, rl)
    }

    pub fn from_parts(bundle: &SuffixBundle, rl: RunLengthBwt) -> Self {
        let kept = vec![true; rl.runs()];
        let loc = LocateSamples::build(bundle, &rl, &kept);
        Self { rl, loc }
    }

    pub fn rlbwt(&self) -> &RunLengthBwt {
        &self.rl
    }

    pub fn samples(&self) -> &LocateSamples {
        &self.loc
    }

    pub fn len(&self) -> usize {
        self.rl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rl.is_empty()
    }

    pub fn phi(&self, i: usize) -> usize {
        self.loc.phi(i)
    }

    /// Backward search that also yields `SA[ep]`.
    pub fn count_toehold(
        &self,
        pattern: &[u8],
        trace: &mut QueryTrace,
    ) -> Option<(SaRange, usize)> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return None;
        }
        let n = self.len();
        let r = self.rl.runs();
        let mut range = self.rl.full_range();
        let mut toehold = (self.loc.sample(r - 1) + 1) % n;
        for &c in pattern.iter().rev() {
            trace.backward_steps += 1;
            let next = self.rl.backward_step(range, c)?;
            if self.rl.run_letter(self.rl.run_of(range.ep)) == c {
                toehold -= 1;
            } else {
                let p = self.rl.last_run_of_symbol(c, range.ep)?;
                toehold = self.loc.sample(p);
            }
            range = next;
        }
        Some((range, toehold))
    }

    /// 0-based starting positions, from `SA[ep]` down to `SA[sp]`.
    pub fn locate_traced(&self, pattern: &[u8], trace: &mut QueryTrace) -> Vec<usize> {
        let Some((range, toehold)) = self.count_toehold(pattern, trace) else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(range.len());
        let mut cur = toehold;
        out.push(cur);
        for _ in range.sp..range.ep {
            cur = self.loc.phi_traced(cur, trace);
            out.push(cur);
        }
        out
    }

    pub(crate) fn perturb(&mut self) {
        self.loc.perturb();
    }

    pub(crate) fn push_sections(&self, out: &mut Vec<Section>) {
        self.rl.push_sections(out);
        self.loc.push_sections(out);
    }

    pub(crate) fn from_sections(map: &SectionMap<'_>) -> Result<Self> {
        let rl = RunLengthBwt::from_sections(map)?;
        let loc = LocateSamples::from_sections(map, rl.len())?;
        if loc.samples().len() != rl.runs() {
            return format_err("r-index needs one sample per run");
        }
        Ok(Self { rl, loc })
    }
}

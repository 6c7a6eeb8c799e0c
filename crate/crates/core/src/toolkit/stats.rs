//! Size and repetitiveness reports.

use crate::error::Result;
use crate::rindex::letter_pos;
use crate::section::Role;
use crate::succinct::RankSelect;
use crate::srcsa::plan_backward;
use crate::srindex::SubsamplePlan;
use crate::text::{SuffixBundle, Text};
use crate::toolkit::envelope::{Envelope, Header};

pub const S_GRID: [usize; 6] = [2, 4, 8, 16, 32, 64];

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SectionStat {
    pub name: String,
    pub role: Role,
    pub bytes: u64,
    pub bps: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct KeptCount {
    pub s: usize,
    pub sr_index: usize,
    pub sr_csa: usize,
}

/// Characteristics of a text: length, runs, survivors under subsampling,
/// and where the BWT-run heads fall in the text.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TextStats {
    pub n: usize,
    pub sigma: usize,
    pub r: usize,
    pub n_over_r: f64,
    /// Runs of consecutive Psi values inside one symbol's rows.
    pub psi_runs: usize,
    pub kept: Vec<KeptCount>,
    /// Run-head letter positions per equal-width slice of the text.
    pub histogram: Vec<u64>,
}

/// Space of a serialized index, split by section.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct IndexStats {
    pub header: Header,
    pub label: String,
    pub n_over_r: f64,
    pub kept_samples: Option<usize>,
    pub total_bits: u64,
    pub bps: f64,
    pub counting_bits: u64,
    pub locating_bits: u64,
    pub sections: Vec<SectionStat>,
    /// Text positions of all run heads, when the index stores them.
    pub histogram: Option<Vec<u64>>,
}

/// Runs of consecutive Psi values confined to one symbol's rows.
pub fn confined_psi_runs(bundle: &SuffixBundle, symbols: &[u8]) -> usize {
    let first = |i: usize| symbols[bundle.sa[i]];
    (0..bundle.len())
        .filter(|&i| i == 0 || first(i) != first(i - 1) || bundle.psi[i] != bundle.psi[i - 1] + 1)
        .count()
}

/// Counts `positions` (each `< n`) in `bins` equal slices of `[0, n)`.
pub fn histogram(positions: impl IntoIterator<Item = usize>, n: usize, bins: usize) -> Vec<u64> {
    let bins = bins.max(1);
    let mut out = vec![0u64; bins];
    for p in positions {
        out[((p as u128 * bins as u128) / n as u128) as usize] += 1;
    }
    out
}

pub fn text_stats(text: &Text, bins: usize) -> TextStats {
    let bundle = SuffixBundle::build(text);
    text_stats_with(text, &bundle, bins)
}

pub fn text_stats_with(text: &Text, bundle: &SuffixBundle, bins: usize) -> TextStats {
    let n = bundle.len();
    let bwt = &bundle.bwt;
    let starts: Vec<usize> = (0..n).filter(|&j| j == 0 || bwt[j] != bwt[j - 1]).collect();
    let r = starts.len();
    let ends: Vec<usize> = (0..n).filter(|&j| j + 1 == n || bwt[j] != bwt[j + 1]).collect();
    let end_samples: Vec<usize> = ends.iter().map(|&j| letter_pos(&bundle.sa, j)).collect();
    let symbols = text.symbols();
    let heads: Vec<usize> = (0..n)
        .filter(|&i| {
            i == 0
                || symbols[bundle.sa[i]] != symbols[bundle.sa[i - 1]]
                || bundle.psi[i] != bundle.psi[i - 1] + 1
        })
        .map(|i| bundle.sa[i])
        .collect();
    let kept = S_GRID
        .iter()
        .map(|&s| KeptCount {
            s,
            sr_index: SubsamplePlan::new(&end_samples, s).kept.len(),
            sr_csa: plan_backward(&heads, s).1.len(),
        })
        .collect();
    TextStats {
        n,
        sigma: text.sigma(),
        r,
        n_over_r: n as f64 / r as f64,
        psi_runs: heads.len(),
        kept,
        histogram: histogram(starts.iter().map(|&j| letter_pos(&bundle.sa, j)), n, bins),
    }
}

pub fn index_stats(bytes: &[u8], bins: usize) -> Result<IndexStats> {
    let env = Envelope::parse(bytes)?;
    let index = env.index()?;
    let h = env.header;
    let n = h.n.max(1) as f64;
    let total_bits = env.total_bytes() as u64 * 8;
    let locating_bits: u64 = env
        .sections
        .iter()
        .filter(|s| s.role == Role::Locating)
        .map(|s| s.len * 8)
        .sum();
    let sections = env
        .sections
        .iter()
        .map(|s| SectionStat {
            name: s.name.clone(),
            role: s.role,
            bytes: s.len,
            bps: (s.len * 8) as f64 / n,
        })
        .collect();
    let heads: Option<Vec<usize>> = if let Some(x) = index.engine_rindex() {
        Some(x.samples().marks().ones())
    } else {
        index.engine_rcsa().map(|x| x.samples().samples().iter().map(|v| v as usize).collect())
    };
    Ok(IndexStats {
        header: h,
        label: index.params().label(),
        n_over_r: h.n as f64 / h.r.max(1) as f64,
        kept_samples: index.kept_samples(),
        total_bits,
        bps: total_bits as f64 / n,
        counting_bits: total_bits - locating_bits,
        locating_bits,
        sections,
        histogram: heads.map(|v| histogram(v, h.n as usize, bins)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toolkit::envelope::encode;
    use crate::{AnyIndex, BuildParams, IndexKind};

    #[test]
    fn t1_report() {
        let t = Text::ingest(b"abaaba").unwrap();
        let st = text_stats(&t, 1);
        assert_eq!((st.n, st.r, st.psi_runs), (7, 5, 5));
        assert_eq!(st.histogram, vec![5]);
        assert_eq!(text_stats(&t, 3).histogram.iter().sum::<u64>(), 5);
        let idx = AnyIndex::build(&t, BuildParams::new(IndexKind::RIndex)).unwrap();
        let bytes = encode(&idx);
        let is = index_stats(&bytes, 4).unwrap();
        assert_eq!(is.total_bits, bytes.len() as u64 * 8);
        assert_eq!(is.counting_bits + is.locating_bits, is.total_bits);
        assert_eq!(is.histogram.unwrap().iter().sum::<u64>(), 5);
        assert_eq!(idx.engine_rindex().unwrap().samples().marks().count_ones(), 5);
    }
}

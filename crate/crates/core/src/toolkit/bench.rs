//! Timing of count and locate queries.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::index::AnyIndex;
use crate::section::Role;
use crate::toolkit::envelope::encode;
use crate::trace::QueryTrace;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BenchRow {
    pub kind: String,
    pub s: usize,
    pub variant: u64,
    pub block: usize,
    pub bps: f64,
    pub us_per_occ: Option<f64>,
    /// LF, Psi and phi steps per reported occurrence.
    pub steps_avg: Option<f64>,
    pub build_ms: Option<f64>,
    pub counting_bits: u64,
    pub locating_bits: u64,
    pub count_us_per_pattern: f64,
    pub patterns: usize,
    pub occ: u64,
    pub reps: usize,
}

/// Times `patterns` on `index`: one untimed warm-up pass, then the mean of
/// `reps` timed passes.
pub fn bench_index(
    index: &AnyIndex,
    build_ms: Option<f64>,
    patterns: &[Vec<u8>],
    reps: usize,
) -> Result<BenchRow> {
    if reps == 0 || patterns.is_empty() {
        return Err(Error::InvalidParameter("need at least one pattern and one repetition".into()));
    }
    let sections = index.sections();
    let bytes = encode(index).len() as u64;
    let locating_bits: u64 = sections
        .iter()
        .filter(|s| s.role == Role::Locating)
        .map(|s| s.bytes.len() as u64 * 8)
        .sum();
    let locates = index.kind().can_locate();

    let mut trace = QueryTrace::default();
    let mut occ = 0u64;
    for p in patterns {
        index.count(p)?;
        if locates {
            let (out, t) = index.locate_traced(p)?;
            occ += out.len() as u64;
            trace.merge(&t);
        }
    }

    let mut count_total = 0.0;
    let mut locate_total = 0.0;
    for _ in 0..reps {
        let start = Instant::now();
        for p in patterns {
            std::hint::black_box(index.count(p)?);
        }
        count_total += start.elapsed().as_secs_f64();
        if locates {
            let start = Instant::now();
            for p in patterns {
                std::hint::black_box(index.locate(p, false)?);
            }
            locate_total += start.elapsed().as_secs_f64();
        }
    }
    let params = index.params();
    let per_occ = (locates && occ > 0).then_some(occ as f64);
    Ok(BenchRow {
        kind: params.kind.name().to_string(),
        s: params.s,
        variant: params.variant.index(),
        block: if params.kind.uses_block() { params.block } else { 0 },
        bps: (bytes * 8) as f64 / index.len() as f64,
        us_per_occ: per_occ.map(|o| locate_total / reps as f64 * 1e6 / o),
        steps_avg: per_occ
            .map(|o| (trace.lf_steps + trace.psi_steps + trace.phi_steps) as f64 / o),
        build_ms,
        counting_bits: bytes * 8 - locating_bits,
        locating_bits,
        count_us_per_pattern: count_total / reps as f64 * 1e6 / patterns.len() as f64,
        patterns: patterns.len(),
        occ,
        reps,
    })
}

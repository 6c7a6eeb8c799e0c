//! Cross-checks indexes against the naive search oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::index::{AnyIndex, BuildParams};
use crate::text::{oracle_search, SuffixBundle, Text};

/// Longest text the naive oracle is asked to scan.
pub const VERIFY_LIMIT: usize = 10_000_000;

pub const LONG_LENGTHS: [usize; 3] = [10, 20, 30];
const SHORT_LENGTHS: [usize; 3] = [1, 2, 3];

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CheckResult {
    pub label: String,
    pub patterns: usize,
    pub count_mismatches: usize,
    pub locate_mismatches: usize,
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.count_mismatches == 0 && self.locate_mismatches == 0
    }
}

/// Substrings of lengths 10, 20 and 30 from random offsets, short
/// substrings, random strings over the text's bytes, and one pattern with a
/// byte the text never uses.
pub fn sample_patterns(body: &[u8], per_length: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for len in LONG_LENGTHS.iter().chain(&SHORT_LENGTHS) {
        if *len > body.len() {
            continue;
        }
        for _ in 0..per_length {
            let st = rng.gen_range(0..=body.len() - len);
            out.push(body[st..st + len].to_vec());
        }
    }
    let mut used: Vec<u8> = body.to_vec();
    used.sort_unstable();
    used.dedup();
    if !used.is_empty() {
        for _ in 0..per_length {
            let len = rng.gen_range(1..=12);
            out.push((0..len).map(|_| used[rng.gen_range(0..used.len())]).collect());
        }
    }
    if let Some(missing) = (1..=255u8).find(|b| used.binary_search(b).is_err()) {
        let mut p = body[..body.len().min(3)].to_vec();
        p.push(missing);
        out.push(p);
    }
    out
}

/// Oracle answers for `patterns`: occurrence count and sorted 1-based
/// positions.
pub fn oracle_answers(text: &Text, patterns: &[Vec<u8>]) -> Vec<(usize, Vec<usize>)> {
    patterns.iter().map(|p| oracle_search(text, p)).collect()
}

pub fn verify_index(
    index: &AnyIndex,
    patterns: &[Vec<u8>],
    answers: &[(usize, Vec<usize>)],
) -> Result<CheckResult> {
    let mut res = CheckResult {
        label: index.params().label(),
        patterns: patterns.len(),
        count_mismatches: 0,
        locate_mismatches: 0,
        first_failure: None,
    };
    for (p, (occ, positions)) in patterns.iter().zip(answers) {
        let got = index.count(p)?;
        let mut fail = None;
        if got != *occ {
            res.count_mismatches += 1;
            fail = Some(format!("count {got}, expected {occ}"));
        }
        if index.kind().can_locate() {
            let found = index.locate(p, true)?;
            if &found != positions {
                res.locate_mismatches += 1;
                fail.get_or_insert_with(|| format!("locate returned {} positions", found.len()));
            }
        }
        if let (Some(f), None) = (fail, &res.first_failure) {
            res.first_failure = Some(format!("{:?}: {f}", String::from_utf8_lossy(p)));
        }
    }
    Ok(res)
}

/// Builds each configuration over `bytes` and checks it on sampled
/// patterns.
pub fn verify_text(
    bytes: &[u8],
    configs: &[BuildParams],
    per_length: usize,
    seed: u64,
) -> Result<Vec<CheckResult>> {
    let text = Text::ingest(bytes)?;
    if text.len() > VERIFY_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "text of {} symbols is over the verification limit of {VERIFY_LIMIT}",
            text.len()
        )));
    }
    let body = text.original();
    let patterns = sample_patterns(&body, per_length, seed);
    let answers = oracle_answers(&text, &patterns);
    let bundle = SuffixBundle::build(&text);
    configs
        .iter()
        .map(|&p| verify_index(&AnyIndex::build_with(&text, &bundle, p)?, &patterns, &answers))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IndexKind;

    #[test]
    fn t1_passes_and_corruption_fails() {
        let configs: Vec<BuildParams> = BuildParams::grid()
            .into_iter()
            .filter(|p| p.s == 1 || p.s == 4)
            .collect();
        let res = verify_text(b"abaaba", &configs, 5, 1).unwrap();
        assert!(res.iter().all(|r| r.passed()), "{res:?}");

        let text = Text::ingest(b"abaababaabbaab").unwrap();
        let patterns = sample_patterns(&text.original(), 5, 3);
        let answers = oracle_answers(&text, &patterns);
        let mut idx = AnyIndex::build(&text, BuildParams::new(IndexKind::RIndex)).unwrap();
        idx.perturb();
        assert!(!verify_index(&idx, &patterns, &answers).unwrap().passed());
    }

    #[test]
    fn long_patterns_sampled() {
        let body: Vec<u8> = (0..100).map(|i| b"ACGT"[i % 4]).collect();
        let pats = sample_patterns(&body, 2, 9);
        for len in LONG_LENGTHS {
            assert!(pats.iter().any(|p| p.len() == len));
        }
    }
}

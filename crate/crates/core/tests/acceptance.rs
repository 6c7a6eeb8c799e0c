//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{family_text, patterns, Case, SIGMAS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srx::rindex::letter_pos;
use srx::rcsa::PsiRuns;
use srx::succinct::RankSelect;
use srx::text::{oracle_search, SuffixBundle, Text};
use srx::toolkit::corpus::{synthetic, SyntheticSpec};
use srx::toolkit::envelope::{decode, encode};
use srx::toolkit::stats::{confined_psi_runs, index_stats};
use srx::trace::QueryTrace;
use srx::{AnyIndex, BuildParams, Error, IndexKind, Variant};

const TEXTS: usize = 500;
const MAX_BODY: usize = 1999;
const PATTERNS: usize = 60;
const SEED: u64 = 0x5eed_2024;
const FLIPS: usize = 100;

#[derive(Debug, Default, Clone, PartialEq)]
struct Tally {
    checks: u64,
    failed: u64,
    examples: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < 5 {
                self.examples.push(what());
            }
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failed += other.failed;
        for e in other.examples {
            if self.examples.len() < 5 {
                self.examples.push(e);
            }
        }
    }
}

/// Everything criteria 1 to 3 observe on one text's indexes.
#[derive(Debug, Default, PartialEq)]
struct CoreRun {
    oracle: Tally,
    permutation: Tally,
    lemma: Tally,
    answers: Vec<Answer>,
}

#[derive(Debug, PartialEq)]
struct Answer {
    count: usize,
    located: Option<(Vec<usize>, QueryTrace)>,
    toehold: Option<(Option<usize>, QueryTrace)>,
}

#[derive(Default)]
struct Totals {
    c: [Tally; 7],
    flipped: usize,
    persist_time: Duration,
}

fn kept_bound(n: usize, r: usize, s: usize) -> usize {
    r.min(2 * n.div_ceil(s + 1))
}

/// Removed values lie between kept neighbours at most `s` apart; the
/// smallest and largest values are kept.
fn spacing_holds(values: &[usize], kept: &[bool], s: usize) -> bool {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by_key(|&p| values[p]);
    let mut last_kept: Option<usize> = None;
    let mut pending = false;
    for &p in &order {
        if kept[p] {
            if pending && values[p] - last_kept.unwrap() > s {
                return false;
            }
            last_kept = Some(values[p]);
            pending = false;
        } else if last_kept.is_none() {
            return false;
        } else {
            pending = true;
        }
    }
    !pending
}

/// `SA[i+1] = SA[l+1] - (SA[l] - SA[i])` for every row, `l` the first
/// run tail reached by iterating Psi from `i`.
fn forward_identity(b: &SuffixBundle, psi: &PsiRuns, tally: &mut Tally, label: &str) {
    let n = b.len();
    let tail = |l: usize| l + 1 == n || psi.is_run_head(l + 1);
    // dist[i]: Psi steps from row i to its tail, filled in decreasing text order.
    let mut dist = vec![0usize; n];
    let mut tail_of = vec![0usize; n];
    for p in (0..n).rev() {
        let i = b.isa[p];
        if tail(i) || p == n - 1 {
            tail_of[i] = i;
        } else {
            let next = b.isa[p + 1];
            dist[i] = dist[next] + 1;
            tail_of[i] = tail_of[next];
        }
    }
    for i in 0..n {
        let (l, d) = (tail_of[i], dist[i]);
        let ok = tail(l)
            && b.sa[l] == (b.sa[i] + d) % n
            && b.sa[(i + 1) % n] == (b.sa[(l + 1) % n] + n - d) % n;
        tally.check(ok, || format!("{label}: forward identity fails at row {i}"));
    }
}

fn core_run(case: &Case, pats: &[Vec<u8>], oracle: &[(usize, Vec<usize>)], indexes: &[AnyIndex]) -> CoreRun {
    let b = &case.bundle;
    let n = b.len();
    let mut run = CoreRun::default();
    for idx in indexes {
        let params = idx.params();
        let label = params.label();
        let walk_limit = params.kind.is_subsampled().then_some(params.s as u64);
        for (p, (occ, want)) in pats.iter().zip(oracle) {
            let count = idx.count(p).unwrap();
            run.oracle.check(count == *occ, || {
                format!("{label}: count {:?} = {count}, oracle {occ}", String::from_utf8_lossy(p))
            });
            let mut answer = Answer { count, located: None, toehold: None };
            if params.kind.can_locate() {
                let (got, trace) = idx.locate_traced(p).unwrap();
                let mut sorted = got.clone();
                sorted.sort_unstable();
                run.oracle.check(&sorted == want, || {
                    format!("{label}: locate {:?} = {sorted:?}, oracle {want:?}", String::from_utf8_lossy(p))
                });
                let mut tt = QueryTrace::default();
                let toe = idx.count_toehold(p, &mut tt).unwrap();
                let expect = toe.map(|(r, _)| if params.kind.uses_block() { b.sa[r.sp] } else { b.sa[r.ep] });
                let value = toe.map(|(_, x)| x);
                run.oracle.check(value == expect, || format!("{label}: toehold {value:?}, want {expect:?}"));
                if let Some(s) = walk_limit {
                    run.lemma.check(trace.max_walk < s && tt.max_walk < s, || {
                        format!("{label}: walk {} / {} not below s", trace.max_walk, tt.max_walk)
                    });
                }
                answer.located = Some((got, trace));
                answer.toehold = Some((value, tt));
            }
            run.answers.push(answer);
        }

        if let Some(ri) = idx.engine_rindex() {
            for j in 1..n {
                let got = ri.phi(letter_pos(&b.sa, j));
                run.permutation.check(got == b.sa[j - 1], || format!("phi at row {j}: {got}"));
            }
        }
        if let Some(rc) = idx.engine_rcsa() {
            for i in 0..n {
                let got = rc.iphi(b.sa[i]);
                run.permutation.check(got == b.sa[(i + 1) % n], || format!("inverse phi at row {i}: {got}"));
            }
            forward_identity(b, rc.psi_runs(), &mut run.lemma, &label);
        }

        let r = idx.runs();
        if let Some(sr) = idx.engine_srindex() {
            let s = sr.s();
            let rl = sr.rlbwt();
            let values: Vec<usize> = (0..r).map(|p| letter_pos(&b.sa, rl.run_end(p))).collect();
            let kept: Vec<bool> = (0..r).map(|p| !sr.removed().get(p)).collect();
            let k = kept.iter().filter(|&&x| x).count();
            run.lemma.check(k == sr.kept() && k == sr.samples().samples().len(), || format!("{label}: kept count"));
            run.lemma.check(k <= kept_bound(n, r, s), || format!("{label}: kept {k} over bound"));
            run.lemma.check(spacing_holds(&values, &kept, s), || format!("{label}: spacing"));
        }
        if let Some(sc) = idx.engine_srcsa() {
            let s = sc.s();
            let psi = sc.psi_runs();
            let heads: Vec<usize> = (0..r).map(|g| b.sa[psi.run_start(g)]).collect();
            let kept: Vec<bool> = (0..r).map(|g| !sc.removed().get(g)).collect();
            let k = kept.iter().filter(|&&x| x).count();
            run.lemma.check(k == sc.kept() && k == sc.samples().samples().len(), || format!("{label}: kept count"));
            run.lemma.check(k <= kept_bound(n, r, s), || format!("{label}: kept {k} over bound"));
            run.lemma.check(spacing_holds(&heads, &kept, s), || format!("{label}: spacing"));
            forward_identity(b, psi, &mut run.lemma, &label);
        }
    }
    run
}

/// Sections and query traces of `sub` (s = 1) against the full index.
fn degenerates(full: &AnyIndex, sub: &AnyIndex, pats: &[Vec<u8>], tally: &mut Tally) {
    let label = sub.params().label();
    let full_secs: BTreeMap<String, Vec<u8>> = full.sections().into_iter().map(|s| (s.name, s.bytes)).collect();
    let sub_secs: BTreeMap<String, Vec<u8>> = sub.sections().into_iter().map(|s| (s.name, s.bytes)).collect();
    for (name, bytes) in &full_secs {
        tally.check(sub_secs.get(name) == Some(bytes), || format!("{label}: section {name} differs"));
    }
    for name in sub_secs.keys().filter(|k| !full_secs.contains_key(*k)) {
        tally.check(name.starts_with("sr."), || format!("{label}: unexpected section {name}"));
    }
    let removed = match (sub.engine_srindex(), sub.engine_srcsa()) {
        (Some(x), _) => x.removed().count_ones(),
        (_, Some(x)) => x.removed().count_ones(),
        _ => usize::MAX,
    };
    tally.check(removed == 0, || format!("{label}: {removed} samples removed"));
    for p in pats {
        let a = full.locate_traced(p).unwrap();
        let b = sub.locate_traced(p).unwrap();
        tally.check(a == b, || format!("{label}: locate trace {a:?} vs {b:?}"));
        let (mut ta, mut tb) = (QueryTrace::default(), QueryTrace::default());
        let ra = full.count_toehold(p, &mut ta).unwrap();
        let rb = sub.count_toehold(p, &mut tb).unwrap();
        tally.check(ra == rb && ta == tb, || format!("{label}: toehold trace {ta:?} vs {tb:?}"));
    }
}

fn one_text(i: usize, totals: &mut Totals) {
    let case = Case::new(family_text(SEED, i, MAX_BODY));
    let pats = patterns(&case.body, SIGMAS[i % 3], PATTERNS, SEED + i as u64);
    let oracle: Vec<(usize, Vec<usize>)> = pats.iter().map(|p| oracle_search(&case.text, p)).collect();
    let grid = BuildParams::grid();
    let indexes: Vec<AnyIndex> = grid
        .iter()
        .map(|&p| AnyIndex::build_with(&case.text, &case.bundle, p).unwrap())
        .collect();

    let run = core_run(&case, &pats, &oracle, &indexes);

    let find = |kind: IndexKind, s: usize, v: Variant| {
        indexes.iter().find(|x| {
            let p = x.params();
            p.kind == kind && (!kind.is_subsampled() || (p.s == s && p.variant == v))
        })
    };
    for (full, sub) in [(IndexKind::RIndex, IndexKind::SrIndex), (IndexKind::RCsa, IndexKind::SrCsa)] {
        let full = find(full, 1, Variant::Plain).unwrap();
        for v in Variant::ALL {
            degenerates(full, find(sub, 1, v).unwrap(), &pats, &mut totals.c[3]);
        }
    }

    let r = case.bundle.bwt_runs();
    let confined = confined_psi_runs(&case.bundle, case.text.symbols());
    let stored = find(IndexKind::RCsa, 1, Variant::Plain).unwrap().runs();
    let rl = find(IndexKind::Rlbwt, 1, Variant::Plain).unwrap().runs();
    totals.c[5].check(confined == r && stored == r && rl == r, || {
        format!("text {i}: r = {r}, confined Psi runs {confined}, stored {stored}, rlbwt {rl}")
    });

    let start = Instant::now();
    let mut files = Vec::with_capacity(indexes.len());
    let mut decoded = Vec::with_capacity(indexes.len());
    for idx in &indexes {
        let bytes = encode(idx);
        let back = decode(&bytes);
        let ok = match &back {
            Ok(x) => x == idx && encode(x) == bytes,
            Err(_) => false,
        };
        totals.c[6].check(ok, || format!("text {i} {}: round trip changed the index", idx.params().label()));
        if let Ok(x) = back {
            decoded.push(x);
        }
        files.push(bytes);
    }
    let rerun = core_run(&case, &pats, &oracle, &decoded);
    totals.c[6].check(decoded.len() == indexes.len() && rerun == run, || {
        format!("text {i}: criteria 1-3 differ after reload")
    });
    if i < FLIPS {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ i as u64);
        let mut bad = files[i % files.len()].clone();
        let bit = rng.gen_range(0..bad.len() * 8);
        bad[bit / 8] ^= 1 << (bit % 8);
        let res = decode(&bad);
        let ok = if bit < 64 {
            matches!(res, Err(Error::BadMagic))
        } else {
            matches!(res, Err(Error::Checksum { .. }))
        };
        totals.flipped += 1;
        totals.c[6].check(ok, || format!("text {i}: flipped bit {bit} gave {:?}", res.err()));
    }
    totals.persist_time += start.elapsed();

    totals.c[0].absorb(run.oracle);
    totals.c[1].absorb(run.permutation);
    totals.c[2].absorb(run.lemma);
}

/// Locating bits and bps on the synthetic corpus.
fn space_trend(tally: &mut Tally) -> String {
    let body = synthetic(&SyntheticSpec::default());
    let text = Text::ingest(&body).unwrap();
    let bundle = SuffixBundle::build(&text);
    let measure = |p: BuildParams| {
        let idx = AnyIndex::build_with(&text, &bundle, p).unwrap();
        index_stats(&encode(&idx), 1).unwrap()
    };
    let full = measure(BuildParams::new(IndexKind::RIndex));
    let mut summary = format!(
        "n/r {:.1}, r-index {:.3} bps ({} locating bits)",
        full.n_over_r, full.bps, full.locating_bits
    );
    for v in Variant::ALL {
        let stats: Vec<_> = [1, 4, 8, 16]
            .iter()
            .map(|&s| (s, measure(BuildParams::subsampled(IndexKind::SrIndex, s, v))))
            .collect();
        let at8 = &stats[2].1;
        tally.check(2 * at8.locating_bits <= full.locating_bits, || {
            format!("v{}: s=8 locating bits {} vs r-index {}", v.index(), at8.locating_bits, full.locating_bits)
        });
        for w in stats.windows(2) {
            tally.check(w[1].1.bps < w[0].1.bps, || {
                format!("v{}: bps {:.4} at s={} not below {:.4} at s={}", v.index(), w[1].1.bps, w[1].0, w[0].1.bps, w[0].0)
            });
        }
        let bps: Vec<String> = stats.iter().map(|(s, st)| format!("s{s}={:.3}", st.bps)).collect();
        summary.push_str(&format!("; v{} {}", v.index(), bps.join(" ")));
    }
    let r = bundle.bwt_runs();
    tally.check(confined_psi_runs(&bundle, text.symbols()) == r, || "synthetic: Psi runs != r".into());
    summary
}

fn main() -> ExitCode {
    let started = Instant::now();
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).min(16);
    let mut totals = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut t = Totals::default();
                    for i in (w..TEXTS).step_by(workers) {
                        one_text(i, &mut t);
                    }
                    t
                })
            })
            .collect();
        let mut all = Totals::default();
        for h in handles {
            let t = h.join().expect("worker panicked");
            for (a, b) in all.c.iter_mut().zip(t.c) {
                a.absorb(b);
            }
            all.flipped += t.flipped;
            all.persist_time += t.persist_time;
        }
        all
    });
    let core_time = started.elapsed();
    let trend = space_trend(&mut totals.c[4]);
    let persist_wall = totals.persist_time / workers as u32;
    totals.c[6].check(persist_wall < Duration::from_secs(120), || {
        format!("serialization checks took {persist_wall:?}")
    });

    let names = [
        "oracle equivalence of count, locate and toeholds over 500 texts and 39 configurations",
        "phi and inverse phi equal the suffix-array neighbour maps",
        "kept bound, spacing around removed samples, walks below s, forward-step identity",
        "s=1 subsampled indexes match full indexes in sections and traces",
        "synthetic space trend",
        "confined Psi runs equal BWT runs",
        "serialization round trip and single-bit corruption",
    ];
    let mut all_ok = true;
    for (k, (t, name)) in totals.c.iter().zip(names).enumerate() {
        let ok = t.failed == 0 && t.checks > 0;
        all_ok &= ok;
        let extra = match k {
            0 => format!(", {core_time:.1?}"),
            4 => format!(", {trend}"),
            6 => format!(", {} flipped files, ~{persist_wall:.1?}", totals.flipped),
            _ => String::new(),
        };
        println!(
            "criterion {}: {} - {name} ({} checks, {} failed{extra})",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            t.checks,
            t.failed
        );
        for e in &t.examples {
            println!("    {e}");
        }
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

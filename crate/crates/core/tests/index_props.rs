mod common;

use common::{family_text, patterns, Case, SIGMAS};
use proptest::prelude::*;
use srx::rcsa::RCsa;
use srx::rindex::{letter_pos, RIndex};
use srx::rlbwt::RunLengthBwt;
use srx::srcsa::SrCsa;
use srx::srindex::{SrIndex, Variant};
use srx::succinct::RankSelect;
use srx::text::oracle_search;
use srx::toolkit::stats::confined_psi_runs;
use srx::trace::QueryTrace;

fn case() -> impl Strategy<Value = Case> {
    (any::<u64>(), 0usize..6, 1usize..=400).prop_map(|(seed, i, max)| Case::new(family_text(seed, i, max)))
}

fn sigma_of(c: &Case) -> usize {
    c.text.sigma()
}

/// Removed values sit strictly between kept neighbours at most `s` apart.
fn spacing_holds(values: &[usize], kept: &[bool], s: usize) -> bool {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_unstable_by_key(|&p| values[p]);
    let mut last_kept = None;
    let mut pending = false;
    for &p in &order {
        if kept[p] {
            if pending && values[p] - last_kept.unwrap() > s {
                return false;
            }
            last_kept = Some(values[p]);
            pending = false;
        } else {
            if last_kept.is_none() {
                return false;
            }
            pending = true;
        }
    }
    !pending
}

fn kept_bound(n: usize, r: usize, s: usize) -> usize {
    r.min(2 * n.div_ceil(s + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn suffix_structures_are_consistent(c in case()) {
        let b = &c.bundle;
        let n = b.len();
        let sym = c.text.symbols();
        let mut seen = vec![false; n];
        for &p in &b.sa {
            prop_assert!(!seen[p]);
            seen[p] = true;
        }
        for i in 1..n {
            prop_assert!(sym[b.sa[i - 1]..] < sym[b.sa[i]..]);
        }
        for i in 0..n {
            prop_assert_eq!(b.isa[b.sa[i]], i);
            prop_assert_eq!(b.psi[b.lf(i)], i);
            prop_assert_eq!(b.lf(b.psi[i]), i);
            prop_assert_eq!(b.bwt[i], sym[(b.sa[i] + n - 1) % n]);
        }
        prop_assert_eq!(confined_psi_runs(b, sym), b.bwt_runs());
    }

    #[test]
    fn rlbwt_matches_plain_bwt(c in case()) {
        let b = &c.bundle;
        let rl = RunLengthBwt::build(&b.bwt, sigma_of(&c));
        prop_assert_eq!(rl.runs(), b.bwt_runs());
        for j in 0..b.len() {
            prop_assert_eq!(rl.access(j).unwrap(), b.bwt[j]);
            prop_assert_eq!(rl.lf(j), b.lf(j));
        }
        prop_assert!(rl.access(b.len()).is_err());
    }

    #[test]
    fn psi_runs_reproduce_psi_for_any_block(c in case()) {
        let b = &c.bundle;
        let n = b.len();
        for block in [1, 8, 64, n] {
            let rc = RCsa::build(b, c.text.symbols(), sigma_of(&c), block).unwrap();
            prop_assert_eq!(rc.psi_runs().runs(), b.bwt_runs());
            for i in 0..n {
                prop_assert_eq!(rc.psi_runs().psi(i), b.psi[i]);
            }
            prop_assert!(rc.psi_runs().try_psi(n).is_err());
        }
    }

    #[test]
    fn both_counting_engines_agree_with_oracle(c in case(), seed in any::<u64>()) {
        let b = &c.bundle;
        let rl = RunLengthBwt::build(&b.bwt, sigma_of(&c));
        let rc = RCsa::build(b, c.text.symbols(), sigma_of(&c), 8).unwrap();
        for p in patterns(&c.body, SIGMAS[seed as usize % 3], 40, seed) {
            let (occ, _) = oracle_search(&c.text, &p);
            let Some(enc) = c.text.alphabet().encode(&p) else {
                prop_assert_eq!(occ, 0);
                continue;
            };
            let a = rl.count(&enc);
            prop_assert_eq!(a, rc.psi_runs().count(&enc));
            prop_assert_eq!(a.map_or(0, |r| r.len()), occ);
        }
    }

    #[test]
    fn phi_and_inverse_phi_follow_the_suffix_array(c in case()) {
        let b = &c.bundle;
        let n = b.len();
        let ri = RIndex::build(b, sigma_of(&c));
        let rc = RCsa::build(b, c.text.symbols(), sigma_of(&c), 64).unwrap();
        for j in 1..n {
            prop_assert_eq!(ri.phi(letter_pos(&b.sa, j)), b.sa[j - 1]);
        }
        for i in 0..n {
            prop_assert_eq!(rc.iphi(b.sa[i]), b.sa[(i + 1) % n]);
        }
    }

    #[test]
    fn forward_step_identity(c in case()) {
        let b = &c.bundle;
        let n = b.len();
        let rc = RCsa::build(b, c.text.symbols(), sigma_of(&c), 64).unwrap();
        let tail = |l: usize| l + 1 == n || rc.psi_runs().is_run_head(l + 1);
        for i in 0..n {
            let (mut l, mut d) = (i, 0);
            while !tail(l) {
                l = b.psi[l];
                d += 1;
            }
            prop_assert_eq!(b.sa[l], (b.sa[i] + d) % n);
            prop_assert_eq!(b.sa[(i + 1) % n], (b.sa[(l + 1) % n] + n - d) % n);
        }
    }

    #[test]
    fn subsampling_bounds_and_spacing(c in case()) {
        let b = &c.bundle;
        let n = b.len();
        let r = b.bwt_runs();
        let mut prev = usize::MAX;
        for s in 1..=20 {
            let sr = SrIndex::build(b, sigma_of(&c), s, Variant::Plain).unwrap();
            let rl = sr.rlbwt();
            let values: Vec<usize> = (0..r).map(|p| letter_pos(&b.sa, rl.run_end(p))).collect();
            let kept: Vec<bool> = (0..r).map(|p| !sr.removed().get(p)).collect();
            prop_assert_eq!(kept.iter().filter(|&&k| k).count(), sr.kept());
            prop_assert!(sr.kept() <= kept_bound(n, r, s));
            prop_assert!(sr.kept() <= prev, "kept grew from s={} to s={}", s - 1, s);
            prop_assert!(spacing_holds(&values, &kept, s));
            prev = sr.kept();

            let sc = SrCsa::build(b, c.text.symbols(), sigma_of(&c), 64, s, Variant::Plain).unwrap();
            let heads: Vec<usize> = (0..r).map(|g| b.sa[sc.psi_runs().run_start(g)]).collect();
            let kept: Vec<bool> = (0..r).map(|g| !sc.removed().get(g)).collect();
            prop_assert_eq!(kept.iter().filter(|&&k| k).count(), sc.kept());
            prop_assert!(sc.kept() <= kept_bound(n, r, s));
            prop_assert!(spacing_holds(&heads, &kept, s));
            if s == 1 {
                prop_assert_eq!(sr.kept(), r);
                prop_assert_eq!(sc.kept(), r);
            }
        }
    }

    #[test]
    fn subsampled_locate_matches_oracle_with_short_walks(c in case(), seed in any::<u64>()) {
        let b = &c.bundle;
        let sigma = sigma_of(&c);
        let pats = patterns(&c.body, SIGMAS[seed as usize % 3], 25, seed);
        for s in [1, 2, 3, 4, 8, 16, 64] {
            for v in Variant::ALL {
                let sr = SrIndex::build(b, sigma, s, v).unwrap();
                let sc = SrCsa::build(b, c.text.symbols(), sigma, 8, s, v).unwrap();
                for p in &pats {
                    let (_, want) = oracle_search(&c.text, p);
                    let Some(enc) = c.text.alphabet().encode(p) else { continue };
                    for (name, got, trace, toe) in [
                        {
                            let mut t = QueryTrace::default();
                            let got = sr.locate_traced(&enc, &mut t);
                            let mut tt = QueryTrace::default();
                            let toe = sr.count_toehold(&enc, &mut tt).map(|(r, x)| x == b.sa[r.ep]);
                            t.merge(&tt);
                            ("sr-index", got, t, toe)
                        },
                        {
                            let mut t = QueryTrace::default();
                            let got = sc.locate_traced(&enc, &mut t);
                            let mut tt = QueryTrace::default();
                            let toe = sc.count_toehold(&enc, &mut tt).map(|(r, x)| x == b.sa[r.sp]);
                            t.merge(&tt);
                            ("sr-csa", got, t, toe)
                        },
                    ] {
                        let mut got: Vec<usize> = got.into_iter().map(|x| x + 1).collect();
                        got.sort_unstable();
                        prop_assert_eq!(&got, &want, "{} s={} {:?}", name, s, v);
                        prop_assert!(trace.max_walk < s as u64, "{} s={} walk {}", name, s, trace.max_walk);
                        prop_assert_ne!(toe, Some(false), "{} toehold", name);
                        prop_assert_eq!(toe.is_some(), !want.is_empty());
                    }
                }
            }
        }
    }
}

mod common;

use common::{instance, Kind, MIXED};
use proptest::prelude::*;
use propsel::axioms::{audit_ejr, audit_pjr, deserves, Options};
use propsel::fixtures::{gen_random, RandomParams};
use propsel::rule_pav::{pav_score, pav_swap_search, solve_pav_exact};
use propsel::rule_phragmen::{run_phragmen, run_phragmen_weighted, trace_audit};
use propsel::{CandSet, DEFAULT_CAP};

fn kind() -> impl Strategy<Value = Kind> {
    prop::sample::select(MIXED.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_pav_matches_brute_force(k in kind(), seed in any::<u64>()) {
        let e = instance(k, seed, 6, 7, false);
        let res = solve_pav_exact(&e, DEFAULT_CAP).unwrap();
        let maximal = e.system().enumerate_maximal(DEFAULT_CAP).unwrap();
        let best = maximal.iter().map(|w| pav_score(&e, w)).max().unwrap();
        let mut expect: Vec<CandSet> = maximal.into_iter().filter(|w| pav_score(&e, w) == best).collect();
        expect.sort();
        prop_assert_eq!(res.score, best);
        prop_assert_eq!(res.winners, expect);
    }

    #[test]
    fn phragmen_traces_are_consistent(k in kind(), seed in any::<u64>(), weighted in any::<bool>()) {
        let e = instance(k, seed, 6, 7, weighted);
        let tr = if weighted { run_phragmen_weighted(&e) } else { run_phragmen(&e) }.unwrap();
        prop_assert_eq!(trace_audit(&tr, &e), Ok(()));
        prop_assert!(e.is_feasible(&tr.outcome));
    }

    #[test]
    fn swap_search_reaches_a_local_optimum(k in kind(), seed in any::<u64>()) {
        let e = instance(k, seed, 6, 7, false);
        let start = e.system().complete(&CandSet::EMPTY);
        let w = pav_swap_search(&e, &start).unwrap();
        prop_assert!(e.system().is_maximal(&w));
        prop_assert!(pav_score(&e, &w) >= pav_score(&e, &start));
        let score = pav_score(&e, &w);
        for out in w.iter() {
            for inn in (0..e.m()).filter(|c| !w.contains(*c)) {
                let s = w.without(out).with(inn);
                if e.is_feasible(&s) {
                    prop_assert!(pav_score(&e, &s) <= score);
                }
            }
        }
    }

    #[test]
    fn ejr_implies_pjr_on_every_feasible_set(k in kind(), seed in any::<u64>()) {
        let e = instance(k, seed, 5, 5, false);
        let opts = Options::default();
        for w in e.system().enumerate_feasible(DEFAULT_CAP).unwrap() {
            if audit_ejr(&e, &w, &opts).unwrap().satisfied() {
                prop_assert!(audit_pjr(&e, &w, &opts).unwrap().satisfied());
            }
        }
    }

    #[test]
    fn deserving_is_monotone_in_ell(k in kind(), seed in any::<u64>()) {
        let e = instance(k, seed, 5, 6, false);
        let opts = Options::default();
        let group: Vec<usize> = (0..e.n()).filter(|i| i % 2 == 0).collect();
        let top = e.common_approvals(&group).len();
        let verdicts: Vec<bool> = (1..=top).map(|l| deserves(&e, &group, l, &opts).unwrap().holds).collect();
        prop_assert!(verdicts.windows(2).all(|p| p[0] || !p[1]));
    }
}

#[test]
fn random_seed_one_is_pinned() {
    let e = gen_random(&RandomParams::committee(4, 4, 2), 1).unwrap();
    let ballots: Vec<Vec<String>> = (0..e.n()).map(|i| e.ids_of(e.approvals(i))).collect();
    assert_eq!(
        ballots,
        vec![
            vec!["c1", "c2", "c4"],
            vec!["c1", "c3", "c4"],
            vec!["c3"],
            vec!["c1", "c2", "c3", "c4"],
        ]
    );
}

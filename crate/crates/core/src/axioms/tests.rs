use super::*;
use crate::constraints::{AttributeGroupSpec, ConstraintSpec};
use crate::model::{Candidate, Election};
use crate::rational::{from_usize, int};
use crate::set::CandSet;

fn named(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn election(cands: &[String], ballots: &[Vec<&str>], spec: ConstraintSpec) -> Election {
    let candidates = cands.iter().map(|c| Candidate::new(c.as_str())).collect();
    let voters = ballots
        .iter()
        .enumerate()
        .map(|(i, b)| crate::model::VoterSpec::approving(format!("v{}", i + 1), b.iter().copied()))
        .collect();
    Election::new(candidates, voters, spec).unwrap()
}

fn example_3_4() -> Election {
    let cands = named("c", 13);
    let mut ballots = vec![vec!["c1", "c2", "c3"]; 3];
    ballots.extend(vec![vec![]; 7]);
    election(&cands, &ballots, ConstraintSpec::Committee { k: 10 })
}

fn example_3_5(extra_c1: bool) -> Election {
    let c1 = named("a", 100);
    let c2 = named("b", 100);
    let cands: Vec<String> = c1.iter().chain(&c2).cloned().collect();
    let mut approved: Vec<&str> = c2[..11].iter().map(String::as_str).collect();
    if extra_c1 {
        approved.extend(c1[..4].iter().map(String::as_str));
    }
    let mut ballots = vec![approved; 41];
    ballots.extend(vec![vec![]; 59]);
    let spec = ConstraintSpec::DisjointAttributes {
        k: 30,
        groups: vec![
            AttributeGroupSpec {
                members: c1.clone(),
                lower: 10,
                upper: 10,
            },
            AttributeGroupSpec {
                members: c2.clone(),
                lower: 20,
                upper: 20,
            },
        ],
    };
    election(&cands, &ballots, spec)
}

#[test]
fn three_voters_deserve_three() {
    let e = example_3_4();
    let group = [0, 1, 2];
    assert!(deserves(&e, &group, 3, &Options::default()).unwrap().holds);
    let v = deserves(&e, &group, 4, &Options::default()).unwrap();
    assert!(!v.holds);
    assert_eq!(v.refuting, Some(CandSet::EMPTY));
}

#[test]
fn quota_example_deserves() {
    let opts = Options::default();
    let group: Vec<usize> = (0..41).collect();
    let e = example_3_5(false);
    assert!(deserves(&e, &group, 8, &opts).unwrap().holds);
    let v = deserves(&e, &group, 9, &opts).unwrap();
    assert!(!v.holds);
    assert!(e.is_feasible(&v.refuting.unwrap()));

    let e = example_3_5(true);
    assert!(deserves(&e, &group, 10, &opts).unwrap().holds);
    assert!(!deserves(&e, &group, 11, &opts).unwrap().holds);
}

#[test]
fn vacuous_and_empty_claims() {
    let e = example_3_4();
    assert!(deserves(&e, &[], 5, &Options::default()).unwrap().holds);
    assert!(deserves(&e, &[0], 0, &Options::default()).unwrap().holds);
    // voters 1 and 4 share no approval
    let v = deserves(&e, &[0, 3], 1, &Options::default()).unwrap();
    assert_eq!((v.holds, v.refuting), (false, Some(CandSet::EMPTY)));
}

#[test]
fn weighted_unit_matches_unweighted() {
    let e = example_3_4();
    let opts = Options::default();
    assert!(deserves_weighted(&e, &[0, 1, 2], &int(3), 3, &opts).unwrap().holds);
    // with weight budget 2 no 3-subset fits
    let v = deserves_weighted(&e, &[0, 1, 2], &int(2), 3, &opts).unwrap();
    assert_eq!((v.holds, v.refuting), (false, Some(CandSet::EMPTY)));
}

#[test]
fn zero_cohesion_is_trivial() {
    let e = example_3_4();
    for cohesion in [Cohesion::Fixed { alpha: 0 }, Cohesion::Adaptive] {
        assert!(cohesive(&e, &[3, 4], cohesion, &int(0), &Options::default()).unwrap().holds);
    }
}

#[test]
fn cohesion_matches_deserving_on_approvals() {
    let e = example_3_4();
    let opts = Options::default();
    for ell in 1..=4 {
        let d = deserves(&e, &[0, 1, 2], ell, &opts).unwrap().holds;
        let c = cohesive(&e, &[0, 1, 2], Cohesion::Fixed { alpha: ell }, &from_usize(ell), &opts)
            .unwrap()
            .holds;
        assert_eq!(d, c, "ell = {ell}");
    }
}

#[test]
fn ejr_audit_on_small_committee() {
    let e = example_3_4();
    let opts = Options::default();
    let bad = e.set_of(&["c4", "c5", "c6", "c7", "c8", "c9", "c10", "c11", "c12", "c13"]).unwrap();
    let rep = audit_ejr(&e, &bad, &opts).unwrap();
    let v = rep.violation.clone().unwrap();
    assert_eq!(v.group, vec![0, 1, 2]);
    assert_eq!(v.claim, Claim::Deserves { ell: 1 });
    assert!(recheck(&e, &bad, &rep, &opts).unwrap());

    let good = e.set_of(&["c1", "c2", "c3", "c4"]).unwrap();
    assert!(audit_ejr(&e, &good, &opts).unwrap().satisfied());
    assert!(audit_pjr(&e, &good, &opts).unwrap().satisfied());
    let all = Options {
        groups: GroupSearch::AllSubsets,
        ..opts
    };
    assert!(audit_ejr(&e, &good, &all).unwrap().satisfied());
    assert!(!audit_pjr(&e, &bad, &all).unwrap().satisfied());
}

#[test]
fn infeasible_outcome_is_rejected() {
    let e = example_3_4();
    let w = CandSet::full(13);
    assert_eq!(audit_ejr(&e, &w, &Options::default()).unwrap_err(), crate::Error::InfeasibleOutcome);
}

#[test]
fn empty_ballots_satisfy_everything() {
    let cands = named("c", 3);
    let e = election(&cands, &[vec![], vec![]], ConstraintSpec::Committee { k: 2 });
    let w = e.set_of(&["c1"]).unwrap();
    for axiom in Axiom::ALL {
        assert!(audit(&e, &w, axiom, &Options::default()).unwrap().satisfied(), "{axiom:?}");
    }
}

#[test]
fn core_two_disjoint_singletons() {
    let cands = vec!["a".to_string(), "b".to_string()];
    let e = election(&cands, &[vec!["a"], vec!["b"]], ConstraintSpec::Committee { k: 1 });
    let w = e.set_of(&["a"]).unwrap();
    assert!(audit_core(&e, &w, &Options::default()).unwrap().satisfied());
    let one = election(&cands[..1], &[vec!["a"]], ConstraintSpec::Committee { k: 1 });
    assert!(audit_core(&one, &one.set_of(&["a"]).unwrap(), &Options::default())
        .unwrap()
        .satisfied());
}

#[test]
fn restrained_ejr_is_weaker() {
    // k = 4 with exactly two men and two women; half the voters approve two men
    let cands: Vec<String> = ["m1", "m2", "m3", "m4", "f1", "f2"].iter().map(|s| s.to_string()).collect();
    let spec = ConstraintSpec::DisjointAttributes {
        k: 4,
        groups: vec![
            AttributeGroupSpec {
                members: cands[..4].to_vec(),
                lower: 2,
                upper: 2,
            },
            AttributeGroupSpec {
                members: cands[4..].to_vec(),
                lower: 2,
                upper: 2,
            },
        ],
    };
    let e = election(&cands, &[vec!["m1", "m2"], vec![]], spec);
    let w = e.set_of(&["m3", "m4", "f1", "f2"]).unwrap();
    let opts = Options::default();
    let ejr = audit_ejr(&e, &w, &opts).unwrap();
    assert_eq!(ejr.violation.as_ref().unwrap().claim, Claim::Deserves { ell: 1 });
    assert!(audit_restrained_ejr(&e, &w, 4, &opts).unwrap().satisfied());
    assert!(matches!(
        audit_restrained_ejr(&e, &w, 3, &opts),
        Err(crate::Error::Precondition(_))
    ));
}

#[test]
fn restrained_ejr_detects_blocking() {
    let cands = named("c", 4);
    let e = election(&cands, &[vec!["c1", "c2"], vec!["c1", "c2"]], ConstraintSpec::Committee { k: 2 });
    let w = e.set_of(&["c3", "c4"]).unwrap();
    let rep = audit_restrained_ejr(&e, &w, 2, &Options::default()).unwrap();
    assert_eq!(
        rep.violation.as_ref().unwrap().claim,
        Claim::Blocking { endowment: 2, ell: 1 }
    );
    assert!(recheck(&e, &w, &rep, &Options::default()).unwrap());
}

#[test]
fn average_satisfaction_bound() {
    let e = example_3_4();
    let w = e.set_of(&["c1", "c2", "c4"]).unwrap();
    assert!(check_avg_satisfaction(&e, &w, &[0, 1, 2], 3));
    assert!(!check_avg_satisfaction(&e, &w, &[0, 1, 2], 6));
    assert!(check_avg_satisfaction(&e, &CandSet::EMPTY, &[0, 1, 2], 1));
}

#[test]
fn symmetric_and_plain_agree_on_small_quota_instance() {
    let a = named("a", 4);
    let b = named("b", 4);
    let cands: Vec<String> = a.iter().chain(&b).cloned().collect();
    let spec = ConstraintSpec::DisjointAttributes {
        k: 4,
        groups: vec![
            AttributeGroupSpec {
                members: a,
                lower: 1,
                upper: 3,
            },
            AttributeGroupSpec {
                members: b,
                lower: 1,
                upper: 2,
            },
        ],
    };
    let e = election(
        &cands,
        &[vec!["a1", "a2", "b1"], vec!["a1", "a2", "b1", "b2"], vec!["b3"], vec![]],
        spec,
    );
    let plain = Options::plain();
    let auto = Options::default();
    for group in [vec![0], vec![0, 1], vec![1], vec![2], vec![0, 1, 2]] {
        for ell in 1..=4 {
            assert_eq!(
                deserves(&e, &group, ell, &plain).unwrap().holds,
                deserves(&e, &group, ell, &auto).unwrap().holds,
                "{group:?} {ell}"
            );
            for cohesion in [Cohesion::Fixed { alpha: ell }, Cohesion::Adaptive] {
                let beta = from_usize(ell);
                assert_eq!(
                    cohesive(&e, &group, cohesion, &beta, &plain).unwrap().holds,
                    cohesive(&e, &group, cohesion, &beta, &auto).unwrap().holds,
                    "{group:?} {ell} {cohesion:?}"
                );
            }
        }
    }
}

use super::*;
use crate::model::Candidate;
use crate::rational::int;

fn cands(ids: &[&str]) -> Vec<Candidate> {
    ids.iter().map(|&id| Candidate::new(id)).collect()
}

fn ids(n: usize, prefix: &str) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn set(v: &[usize]) -> CandSet {
    v.iter().copied().collect()
}

fn public_decisions() -> FeasibilitySystem {
    let spec = ConstraintSpec::PublicDecisions {
        issues: vec![["y1".into(), "n1".into()], ["y2".into(), "n2".into()]],
    };
    FeasibilitySystem::build(&spec, &cands(&["y1", "n1", "y2", "n2"])).unwrap()
}

fn attributes(k: usize, groups: &[(&[&str], usize, usize)]) -> Result<FeasibilitySystem> {
    let all: Vec<&str> = groups.iter().flat_map(|g| g.0.iter().copied()).collect();
    let spec = ConstraintSpec::DisjointAttributes {
        k,
        groups: groups
            .iter()
            .map(|(m, l, u)| AttributeGroupSpec {
                members: m.iter().map(|s| s.to_string()).collect(),
                lower: *l,
                upper: *u,
            })
            .collect(),
    };
    FeasibilitySystem::build(&spec, &cands(&all))
}

#[test]
fn committee_sizes() {
    let sys = FeasibilitySystem::build(&ConstraintSpec::Committee { k: 2 }, &cands(&["a", "b", "c"])).unwrap();
    assert!(sys.is_feasible(&set(&[0, 1])));
    assert!(!sys.is_feasible(&set(&[0, 1, 2])));
    assert!(sys.is_feasible(&CandSet::EMPTY));
    assert_eq!(sys.enumerate_feasible(DEFAULT_CAP).unwrap().len(), 7);
    assert!(!sys.can_extend(&set(&[0, 1]), 2).unwrap());
    assert_eq!(sys.can_extend(&set(&[0, 1, 2]), 2), Err(Error::InfeasibleOutcome));
}

#[test]
fn committee_k1_enumeration_order() {
    let sys = FeasibilitySystem::build(&ConstraintSpec::Committee { k: 1 }, &cands(&["a", "b"])).unwrap();
    assert_eq!(sys.enumerate_feasible(DEFAULT_CAP).unwrap(), vec![set(&[]), set(&[0]), set(&[1])]);
    assert_eq!(sys.enumerate_maximal(DEFAULT_CAP).unwrap(), vec![set(&[0]), set(&[1])]);
}

#[test]
fn public_decisions_counts() {
    let sys = public_decisions();
    assert!(!sys.is_feasible(&set(&[0, 1])));
    assert!(sys.is_feasible(&set(&[0, 2])));
    assert_eq!(sys.enumerate_feasible(DEFAULT_CAP).unwrap().len(), 9);
    assert_eq!(sys.enumerate_maximal(DEFAULT_CAP).unwrap().len(), 4);
    assert!(!sys.can_extend(&set(&[0]), 1).unwrap());
    assert!(sys.can_extend(&set(&[0]), 2).unwrap());
}

#[test]
fn public_decisions_must_partition() {
    let spec = ConstraintSpec::PublicDecisions {
        issues: vec![["y1".into(), "n1".into()]],
    };
    let err = FeasibilitySystem::build(&spec, &cands(&["y1", "n1", "z"])).unwrap_err();
    assert_eq!(err, Error::UncoveredCandidate("z".into()));
}

#[test]
fn quota_validation() {
    let err = attributes(3, &[(&["a1", "a2", "a3"], 2, 3), (&["b1", "b2", "b3"], 2, 3)]).unwrap_err();
    assert!(matches!(err, Error::UnsatisfiableQuotas(_)));
    let err = attributes(0, &[(&["a1"], 0, 1)]).unwrap_err();
    assert_eq!(err, Error::NonPositiveK);
    let spec = ConstraintSpec::DisjointAttributes {
        k: 1,
        groups: vec![
            AttributeGroupSpec {
                members: vec!["a".into()],
                lower: 0,
                upper: 1,
            },
            AttributeGroupSpec {
                members: vec!["a".into()],
                lower: 0,
                upper: 1,
            },
        ],
    };
    let err = FeasibilitySystem::build(&spec, &cands(&["a"])).unwrap_err();
    assert_eq!(err, Error::OverlappingGroups("a".into()));
}

#[test]
fn attribute_completability() {
    // k = 3, at least two from b: {a1, a2} cannot be completed
    let sys = attributes(3, &[(&["a1", "a2", "a3"], 0, 3), (&["b1", "b2"], 2, 2)]).unwrap();
    assert!(sys.is_feasible(&set(&[0])));
    assert!(!sys.is_feasible(&set(&[0, 1])));
    assert!(sys.is_feasible(&set(&[0, 3, 4])));
    assert!(!sys.is_feasible(&set(&[0, 1, 3])));
}

#[test]
fn forty_from_a_group_of_forty_one() {
    let a = ids(41, "p");
    let b = ids(50, "q");
    let spec = ConstraintSpec::DisjointAttributes {
        k: 80,
        groups: vec![
            AttributeGroupSpec {
                members: a.clone(),
                lower: 0,
                upper: 40,
            },
            AttributeGroupSpec {
                members: b.clone(),
                lower: 0,
                upper: 40,
            },
        ],
    };
    let all: Vec<Candidate> = a.iter().chain(&b).map(|s| Candidate::new(s.as_str())).collect();
    let sys = FeasibilitySystem::build(&spec, &all).unwrap();
    assert!(!sys.is_feasible(&CandSet::full(41)));
    assert!(sys.is_feasible(&CandSet::full(40)));
}

#[test]
fn explicit_maximal() {
    let spec = ConstraintSpec::Explicit {
        sets: vec![vec!["x1".into()], vec!["y1".into(), "y2".into()]],
    };
    let sys = FeasibilitySystem::build(&spec, &cands(&["x1", "y1", "y2"])).unwrap();
    assert_eq!(sys.enumerate_maximal(DEFAULT_CAP).unwrap(), vec![set(&[0]), set(&[1, 2])]);
    assert_eq!(sys.enumerate_feasible(DEFAULT_CAP).unwrap().len(), 5);
}

#[test]
fn budget_limits() {
    let mut cs = cands(&["a", "b", "c"]);
    cs[0].weight = int(2);
    let spec = ConstraintSpec::Budget {
        limit: Some(int(3)),
        groups: vec![BudgetGroupSpec {
            members: vec!["b".into(), "c".into()],
            cap: int(1),
        }],
    };
    let sys = FeasibilitySystem::build(&spec, &cs).unwrap();
    assert!(sys.is_feasible(&set(&[0, 1])));
    assert!(!sys.is_feasible(&set(&[1, 2])));
    assert!(!sys.is_feasible(&set(&[0, 1, 2])));
}

#[test]
fn enumeration_cap() {
    let sys = FeasibilitySystem::build(&ConstraintSpec::Committee { k: 3 }, &cands(&["a", "b", "c", "d"])).unwrap();
    assert_eq!(sys.enumerate_feasible(5), Err(Error::EnumerationCapExceeded { cap: 5 }));
}

#[test]
fn matroid_families_pass_exchange() {
    let sys = FeasibilitySystem::build(&ConstraintSpec::Committee { k: 3 }, &cands(&["a", "b", "c", "d", "e"])).unwrap();
    assert_eq!(sys.check_exchange_property(DEFAULT_CAP).unwrap(), ExchangeCheck::IsMatroid);
    assert_eq!(public_decisions().check_exchange_property(DEFAULT_CAP).unwrap(), ExchangeCheck::IsMatroid);
    let sys = attributes(3, &[(&["a1", "a2", "a3"], 1, 2), (&["b1", "b2"], 1, 2)]).unwrap();
    assert_eq!(sys.check_exchange_property(DEFAULT_CAP).unwrap(), ExchangeCheck::IsMatroid);
}

#[test]
fn explicit_non_matroid_witness() {
    let spec = ConstraintSpec::Explicit {
        sets: vec![vec!["x1".into()], vec!["y1".into(), "y2".into()]],
    };
    let sys = FeasibilitySystem::build(&spec, &cands(&["x1", "y1", "y2"])).unwrap();
    let ExchangeCheck::Witness(w) = sys.check_exchange_property(DEFAULT_CAP).unwrap() else {
        panic!("expected a witness");
    };
    assert_eq!((w.x, w.y), (set(&[0]), set(&[1, 2])));
    w.validate(&sys).unwrap();
}

#[test]
fn ranking_encoding() {
    let spec = ConstraintSpec::Ranking {
        items: vec!["1".into(), "2".into(), "3".into()],
    };
    let enc = encode_domain(&spec).unwrap();
    let ids: Vec<&str> = enc.candidates.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, ["1>2", "1>3", "2>1", "2>3", "3>1", "3>2"]);
    let sys = &enc.system;
    let at = |id: &str| enc.index_of(id).unwrap();
    let chain = set(&[at("1>2"), at("2>3")]);
    assert!(sys.is_feasible(&chain));
    assert!(!sys.is_feasible(&chain.with(at("3>1"))));
    assert!(!sys.can_extend(&chain, at("3>1")).unwrap());
    assert!(!sys.is_feasible(&set(&[at("1>2"), at("2>1")])));

    // the witness from the literature re-validates
    let lit = MatroidWitness {
        x: chain,
        y: set(&[at("3>2"), at("2>1"), at("3>1")]),
    };
    lit.validate(sys).unwrap();
    // the canonical witness is smaller in |Y \ X|
    let ExchangeCheck::Witness(w) = sys.check_exchange_property(DEFAULT_CAP).unwrap() else {
        panic!("expected a witness");
    };
    w.validate(sys).unwrap();
    assert_eq!(w.x, chain);
    assert_eq!(w.y - w.x, set(&[at("3>1"), at("3>2")]));
}

#[test]
fn negative_votes_encoding() {
    let spec = ConstraintSpec::NegativeVotes {
        items: vec!["c1".into(), "c2".into()],
        k: 1,
    };
    let enc = encode_domain(&spec).unwrap();
    let at = |id: &str| enc.index_of(id).unwrap();
    assert!(!enc.system.is_feasible(&set(&[at("c1"), at("~c1")])));
    assert!(enc.system.is_feasible(&set(&[at("c1"), at("~c2")])));
    let ExchangeCheck::Witness(w) = enc.system.check_exchange_property(DEFAULT_CAP).unwrap() else {
        panic!("expected a witness");
    };
    assert_eq!(w.x, set(&[at("c1")]));
    assert_eq!(w.y, set(&[at("c2"), at("~c1")]));

    // the general pattern X = {c1..ck}, Y = {~c1, c2..c(k+1)}
    let spec = ConstraintSpec::NegativeVotes {
        items: ids(4, "c"),
        k: 2,
    };
    let enc = encode_domain(&spec).unwrap();
    let at = |id: &str| enc.index_of(id).unwrap();
    MatroidWitness {
        x: set(&[at("c1"), at("c2")]),
        y: set(&[at("~c1"), at("c2"), at("c3")]),
    }
    .validate(&enc.system)
    .unwrap();
}

#[test]
fn judgment_encoding() {
    let spec = ConstraintSpec::Judgment {
        variables: vec!["x".into(), "y".into()],
        clauses: vec![vec!["-x".into(), "-y".into()]],
    };
    let enc = encode_domain(&spec).unwrap();
    let at = |id: &str| enc.index_of(id).unwrap();
    assert!(!enc.system.is_feasible(&set(&[at("x=T"), at("y=T")])));
    assert!(!enc.system.is_feasible(&set(&[at("x=T"), at("x=F")])));
    assert!(enc.system.is_feasible(&set(&[at("x=T"), at("y=F")])));
    let ExchangeCheck::Witness(w) = enc.system.check_exchange_property(DEFAULT_CAP).unwrap() else {
        panic!("expected a witness");
    };
    assert_eq!(w.x, set(&[at("x=T")]));
    assert_eq!(w.y, set(&[at("x=F"), at("y=T")]));

    let bad = ConstraintSpec::Judgment {
        variables: vec!["x".into()],
        clauses: vec![vec!["x".into()], vec!["!x".into()]],
    };
    assert_eq!(encode_domain(&bad).unwrap_err(), Error::UnsatisfiableClauses);
}

#[test]
fn one_swap_examples() {
    let sys = FeasibilitySystem::build(&ConstraintSpec::Committee { k: 2 }, &cands(&["a", "b", "c"])).unwrap();
    assert_eq!(sys.one_swap(&set(&[0, 1]), &set(&[0, 1]), 2).unwrap(), 0);

    let sys = public_decisions();
    assert_eq!(sys.one_swap(&set(&[0, 2]), &set(&[0]), 1).unwrap(), 0);

    let sys = attributes(2, &[(&["a1", "a2"], 0, 1), (&["b1", "b2"], 0, 2)]).unwrap();
    // W = {a1, b1}, W' = {a1}, c = a2
    assert_eq!(sys.one_swap(&set(&[0, 2]), &set(&[0]), 1).unwrap(), 0);

    let spec = ConstraintSpec::Explicit {
        sets: vec![vec!["x1".into()], vec!["y1".into(), "y2".into()]],
    };
    let sys = FeasibilitySystem::build(&spec, &cands(&["x1", "y1", "y2"])).unwrap();
    // W = {y1, y2}, W' = {y1, y2}, c = x1: (W \ W') ∪ {x1} is feasible, no single swap is
    assert_eq!(sys.one_swap(&set(&[1, 2]), &set(&[1, 2]), 0), Err(Error::NotAMatroid));
}

#[test]
fn count_space_matches_plain_feasibility() {
    let sys = attributes(3, &[(&["a1", "a2", "a3"], 1, 2), (&["b1", "b2", "b3"], 1, 2)]).unwrap();
    let refine = [set(&[0, 3]), set(&[1, 3, 4])];
    let space = sys.count_space(&refine).unwrap();
    for mask in 0..64u64 {
        let s = CandSet::from_mask(mask);
        assert_eq!(space.feasible(&space.counts_of(&s)), sys.is_feasible(&s), "{s:?}");
    }
    let mut vectors = 0;
    let limit = vec![usize::MAX; space.classes().len()];
    space
        .for_each_vector(&limit, usize::MAX, DEFAULT_CAP, |t| {
            assert!(sys.is_feasible(&space.materialize(t)));
            vectors += 1;
            std::ops::ControlFlow::Continue(())
        })
        .unwrap();
    assert!(vectors > 0);
}

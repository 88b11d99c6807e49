//! Deterministic instance generators.
//!
//! The counterexample generators take a feasibility domain (candidates and
//! constraints) together with an exchange-property witness `(X, Y)` and
//! build an electorate on which PAV fails EJR or Phragmén's method fails
//! PJR. The remaining generators build the weighted Phragmén failure, the
//! stable-but-not-FJR instance, and seeded random elections. A small catalog
//! addresses them by id.

use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::{
    encode_domain, AttributeGroupSpec, BudgetGroupSpec, ConstraintSpec, ExchangeCheck, FeasibilitySystem,
    MatroidWitness,
};
use crate::error::{Error, Result};
use crate::model::{Candidate, Election, VoterSpec};
use crate::priceability::PriceSystem;
use crate::rational::{from_usize, int, one, ratio, zero, Rational};
use crate::rule_pav::pav_score;
use crate::set::CandSet;

/// Candidates and system of a domain. Encodings derive their candidates
/// when `candidates` is empty.
pub fn domain(candidates: &[Candidate], spec: &ConstraintSpec) -> Result<(Vec<Candidate>, FeasibilitySystem)> {
    if candidates.is_empty() && spec.is_encoding() {
        let enc = encode_domain(spec)?;
        return Ok((enc.candidates, enc.system));
    }
    Ok((candidates.to_vec(), FeasibilitySystem::build(spec, candidates)?))
}

/// The canonical exchange-property witness of a non-matroid system.
pub fn canonical_witness(system: &FeasibilitySystem, cap: usize) -> Result<MatroidWitness> {
    match system.check_exchange_property(cap)? {
        ExchangeCheck::Witness(w) => Ok(w),
        ExchangeCheck::IsMatroid => Err(Error::InvalidWitness("the system is a matroid".into())),
    }
}

fn ids(candidates: &[Candidate], set: &CandSet) -> Vec<String> {
    set.iter().map(|c| candidates[c].id.clone()).collect()
}

fn voters(groups: &[(usize, Vec<String>)]) -> Vec<VoterSpec> {
    let mut out = Vec::new();
    for (count, ballot) in groups {
        for _ in 0..*count {
            out.push(VoterSpec::approving(format!("v{}", out.len() + 1), ballot.iter().cloned()));
        }
    }
    out
}

/// `⌊ℓ n / (ℓ + 1)⌋ + 1`.
fn majority(ell: usize, n: usize) -> usize {
    ell * n / (ell + 1) + 1
}

/// PAV fails EJR: `⌊ℓn/(ℓ+1)⌋ + 1` voters approve exactly `X` (with
/// `ℓ = |X|`), the rest approve exactly `Y \ X`.
///
/// The generator checks by direct evaluation that some
/// `(X \ {c'}) ∪ {c1, c2}` with `c1, c2 ∈ Y \ X` is feasible and scores
/// strictly more than `X`, and fails with [`Error::NTooSmall`] otherwise.
pub fn gen_pav_ejr_counterexample(
    candidates: &[Candidate],
    spec: &ConstraintSpec,
    witness: &MatroidWitness,
    n: usize,
) -> Result<Election> {
    let (cands, system) = domain(candidates, spec)?;
    witness.validate(&system)?;
    let (x, y) = (witness.x, witness.y);
    let ell = x.len();
    let s1 = majority(ell, n);
    if s1 >= n {
        return Err(Error::BadN(n, "the second group would be empty".into()));
    }
    let fresh = y - x;
    let e = Election::new(
        cands.clone(),
        voters(&[(s1, ids(&cands, &x)), (n - s1, ids(&cands, &fresh))]),
        spec.clone(),
    )?;
    let base = pav_score(&e, &x);
    let mut best: Option<Rational> = None;
    for drop in x.iter() {
        for c1 in fresh.iter() {
            for c2 in fresh.iter().filter(|&c2| c2 > c1) {
                let swapped = x.without(drop).with(c1).with(c2);
                if system.is_feasible(&swapped) {
                    let gap = pav_score(&e, &swapped) - &base;
                    if best.as_ref().is_none_or(|b| gap > *b) {
                        best = Some(gap);
                    }
                }
            }
        }
    }
    match best {
        None => Err(Error::InvalidWitness("no feasible double swap; the witness is not minimal".into())),
        Some(gap) if !gap.is_positive() => Err(Error::NTooSmall { n, gap: gap.to_string() }),
        Some(_) => Ok(e),
    }
}

/// Phragmén fails PJR: everyone approves `X`; `⌊ℓn/(ℓ+1)⌋ + 1` voters
/// (with `ℓ = |Y|`) also approve `Y`.
pub fn gen_phragmen_pjr_counterexample(
    candidates: &[Candidate],
    spec: &ConstraintSpec,
    witness: &MatroidWitness,
    n: usize,
) -> Result<Election> {
    let (cands, system) = domain(candidates, spec)?;
    witness.validate(&system)?;
    let (x, y) = (witness.x, witness.y);
    let s = majority(y.len(), n);
    if s > n {
        return Err(Error::BadN(n, "the group exceeds the electorate".into()));
    }
    Election::new(
        cands.clone(),
        voters(&[(s, ids(&cands, &x.union(&y))), (n - s, ids(&cands, &x))]),
        spec.clone(),
    )
}

/// Parameters of the weighted Phragmén failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedFailure {
    /// Number of candidate groups.
    pub g: usize,
    /// `a` candidates cost `2 + eps`.
    pub eps: Rational,
    /// Fraction of voters in the group approving the cheap candidates.
    pub share: Rational,
}

impl Default for WeightedFailure {
    fn default() -> Self {
        WeightedFailure {
            g: 100,
            eps: ratio(1, 100),
            share: ratio(99, 200),
        }
    }
}

/// `g` groups `{a_i, b_i, c_i, d_i}`, each with a weight cap of three;
/// `a_i` weighs `2 + eps`, the others one. A `share` of the voters approves
/// every `b`, `c` and `d`; everybody approves every `a`. The electorate has
/// the smallest size making the share integral.
pub fn gen_weighted_phragmen_failure(params: &WeightedFailure) -> Result<Election> {
    let WeightedFailure { g, eps, share } = params;
    if *g == 0 {
        return Err(Error::InvalidParameters("g must be positive".into()));
    }
    if !eps.is_positive() || *eps >= one() {
        return Err(Error::InvalidParameters("eps must lie in (0, 1)".into()));
    }
    if !share.is_positive() || *share >= ratio(1, 2) {
        return Err(Error::InvalidParameters("share must lie in (0, 1/2)".into()));
    }
    // everybody must fund an `a` before the group can fund a cheap candidate
    if (int(2) + eps) * share >= one() {
        return Err(Error::InvalidParameters("share too large: (2 + eps) * share must stay below 1".into()));
    }
    let n = share.denom().to_usize().ok_or_else(|| Error::InvalidParameters("share denominator too large".into()))?;
    let s = share.numer().to_usize().expect("share is below one");
    let mut candidates = Vec::new();
    let mut groups = Vec::new();
    for i in 1..=*g {
        let group: Vec<String> = ["a", "b", "c", "d"].iter().map(|p| format!("{p}{i}")).collect();
        candidates.push(Candidate::weighted(group[0].clone(), int(2) + eps));
        for id in &group[1..] {
            candidates.push(Candidate::new(id.clone()));
        }
        groups.push(BudgetGroupSpec {
            members: group,
            cap: int(3),
        });
    }
    let a: Vec<String> = (1..=*g).map(|i| format!("a{i}")).collect();
    let all: Vec<String> = candidates.iter().map(|c| c.id.clone()).collect();
    Election::new(
        candidates,
        voters(&[(s, all), (n - s, a)]),
        ConstraintSpec::Budget { limit: None, groups },
    )
}

/// Closed-form check that the cheap-candidate group of
/// [`gen_weighted_phragmen_failure`] is `(b, b)`-strongly cohesive.
///
/// A counter-proposal with `t` of the `a` candidates leaves `3 (g - t)`
/// cheap candidates; the group answers when `b` of them remain. Otherwise it
/// needs `share > b / (t (2 + eps) + b)`, hardest at the smallest such `t`
/// and with nothing else in `T`.
pub fn weighted_failure_cohesive(params: &WeightedFailure, b: usize) -> bool {
    let WeightedFailure { g, eps, share } = params;
    if b > 3 * g {
        return false;
    }
    // smallest t with 3 (g - t) < b
    let t = (0..=*g).find(|&t| 3 * (g - t) < b);
    match t {
        None => true,
        Some(t) => {
            let b = from_usize(b);
            *share > &b / (from_usize(t) * (int(2) + eps) + &b)
        }
    }
}

/// Which voters approve what in the stable-but-not-FJR instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpNotFjrVariant {
    /// The two large groups approve `C_1 \ A` and `C_2 \ (B ∪ E)`.
    #[default]
    Repaired,
    /// The two large groups approve all of `C_1` and `C_2`.
    Literal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpNotFjr {
    pub election: Election,
    pub outcome: CandSet,
    pub prices: PriceSystem,
}

/// Two attribute groups `C_1` (41 candidates, `a1..a5` then `p1..p36`) and
/// `C_2` (50 candidates, `b1..b5`, `e1..e5`, then `q1..q40`), at most 40
/// selected from each. Voters: `V_1` (3n/5) for `C_1`, `V_2` (n/3) for
/// `C_2`, and `S` (n/15) for `A = {a1..a5}`, half of `S` also for
/// `B = {b1..b5}` and the other half for `E = {e1..e5}`.
///
/// The reference outcome is `a1..a4`, all `p` and all `q`, with prices
/// `n/60` on `C_1` and `n/120` on `C_2`, paid evenly within each group.
pub fn gen_sp_not_fjr(n: usize, variant: SpNotFjrVariant) -> Result<SpNotFjr> {
    if n == 0 || !n.is_multiple_of(30) {
        return Err(Error::BadN(n, "must be a positive multiple of 30".into()));
    }
    let name = |p: &str, k: usize| -> Vec<String> { (1..=k).map(|i| format!("{p}{i}")).collect() };
    let (a, p, b, e, q) = (name("a", 5), name("p", 36), name("b", 5), name("e", 5), name("q", 40));
    let c1: Vec<String> = a.iter().chain(&p).cloned().collect();
    let c2: Vec<String> = b.iter().chain(&e).chain(&q).cloned().collect();
    let candidates: Vec<Candidate> = c1.iter().chain(&c2).map(Candidate::new).collect();
    let spec = ConstraintSpec::DisjointAttributes {
        k: 80,
        groups: vec![
            AttributeGroupSpec {
                members: c1.clone(),
                lower: 0,
                upper: 40,
            },
            AttributeGroupSpec {
                members: c2.clone(),
                lower: 0,
                upper: 40,
            },
        ],
    };
    let (v1_ballot, v2_ballot) = match variant {
        SpNotFjrVariant::Repaired => (p.clone(), q.clone()),
        SpNotFjrVariant::Literal => (c1.clone(), c2.clone()),
    };
    let (v1, v2, s) = (3 * n / 5, n / 3, n / 15);
    let with = |extra: &[String]| -> Vec<String> { a.iter().chain(extra).cloned().collect() };
    let election = Election::new(
        candidates,
        voters(&[(v1, v1_ballot), (v2, v2_ballot), (s / 2, with(&b)), (s / 2, with(&e))]),
        spec,
    )?;

    let outcome_ids: Vec<&String> = a[..4].iter().chain(&p).chain(&q).collect();
    let outcome = election.set_of(&outcome_ids)?;
    let (pi1, pi2) = (ratio(n as i64, 60), ratio(n as i64, 120));
    let in_c1 = |c: usize| c < c1.len();
    let prices: Vec<Rational> = (0..election.m())
        .map(|c| if in_c1(c) { pi1.clone() } else { pi2.clone() })
        .collect();
    let mut payments = vec![vec![zero(); election.m()]; election.n()];
    for (i, row) in payments.iter_mut().enumerate() {
        let (targets, share): (Vec<usize>, Rational) = if i < v1 {
            (outcome.iter().filter(|&c| in_c1(c) && c >= 5).collect(), ratio(1, 36))
        } else if i < v1 + v2 {
            (outcome.iter().filter(|&c| !in_c1(c)).collect(), ratio(1, 40))
        } else {
            ((0..4).collect(), ratio(1, 4))
        };
        for c in targets {
            row[c] = share.clone();
        }
    }
    Ok(SpNotFjr {
        election,
        outcome,
        prices: PriceSystem { prices, payments },
    })
}

/// The constraint family of a random election.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomFamily {
    Committee { k: usize },
    /// Candidates paired into `m / 2` yes/no issues.
    PublicDecisions,
    /// `groups` attribute groups with random satisfiable quotas.
    DisjointAttributes { groups: usize },
    /// Downward closure of up to `sets` random sets.
    Explicit { sets: usize },
    /// A single random weight limit.
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    pub n: usize,
    pub m: usize,
    pub family: RandomFamily,
    /// Each approval is drawn with probability `density.0 / density.1`.
    pub density: (u32, u32),
    /// Integer candidate weights drawn from `1..=w`.
    pub weights: Option<u32>,
}

impl RandomParams {
    pub fn committee(n: usize, m: usize, k: usize) -> Self {
        RandomParams {
            n,
            m,
            family: RandomFamily::Committee { k },
            density: (1, 2),
            weights: None,
        }
    }
}

/// A reproducible random election.
pub fn gen_random(params: &RandomParams, seed: u64) -> Result<Election> {
    let RandomParams {
        n,
        m,
        family,
        density,
        weights,
    } = *params;
    if n == 0 || m == 0 || density.1 == 0 || density.0 > density.1 {
        return Err(Error::InvalidParameters("need n, m > 0 and a density in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<String> = (1..=m).map(|i| format!("c{i}")).collect();
    let candidates: Vec<Candidate> = ids
        .iter()
        .map(|id| match weights {
            Some(w) if w >= 1 => Candidate::weighted(id.clone(), from_usize(rng.gen_range(1..=w) as usize)),
            Some(_) => Candidate::new(id.clone()),
            None => Candidate::new(id.clone()),
        })
        .collect();
    let spec = match family {
        RandomFamily::Committee { k } => ConstraintSpec::Committee { k: k.clamp(1, m) },
        RandomFamily::PublicDecisions => {
            if m % 2 != 0 {
                return Err(Error::InvalidParameters("public decisions need an even m".into()));
            }
            ConstraintSpec::PublicDecisions {
                issues: ids.chunks(2).map(|p| [p[0].clone(), p[1].clone()]).collect(),
            }
        }
        RandomFamily::DisjointAttributes { groups } => {
            if groups == 0 || groups > m {
                return Err(Error::InvalidParameters("need 1 <= groups <= m".into()));
            }
            // every group gets one candidate, the rest are spread at random
            let mut owner: Vec<usize> = (0..m).map(|c| if c < groups { c } else { rng.gen_range(0..groups) }).collect();
            for c in (1..m).rev() {
                let j = rng.gen_range(0..=c);
                owner.swap(c, j);
            }
            let mut specs = Vec::new();
            let (mut low, mut high) = (0, 0);
            for r in 0..groups {
                let members: Vec<String> = (0..m).filter(|&c| owner[c] == r).map(|c| ids[c].clone()).collect();
                let upper = rng.gen_range(1..=members.len());
                let lower = rng.gen_range(0..=upper);
                low += lower;
                high += upper;
                specs.push(AttributeGroupSpec { members, lower, upper });
            }
            ConstraintSpec::DisjointAttributes {
                k: rng.gen_range(low.max(1)..=high),
                groups: specs,
            }
        }
        RandomFamily::Explicit { sets } => {
            let count = rng.gen_range(1..=sets.max(1));
            let mut out: Vec<Vec<String>> = Vec::new();
            for _ in 0..count {
                let mut set: Vec<String> = ids.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                if set.is_empty() {
                    set.push(ids[rng.gen_range(0..m)].clone());
                }
                out.push(set);
            }
            ConstraintSpec::Explicit { sets: out }
        }
        RandomFamily::Budget => {
            let total = candidates.iter().fold(zero(), |acc, c| acc + &c.weight);
            let heaviest = candidates.iter().map(|c| c.weight.clone()).max().expect("m > 0");
            let lo = heaviest.to_integer().to_usize().unwrap_or(1);
            let hi = total.to_integer().to_usize().unwrap_or(lo).max(lo);
            ConstraintSpec::Budget {
                limit: Some(from_usize(rng.gen_range(lo..=hi))),
                groups: Vec::new(),
            }
        }
    };
    let voters: Vec<VoterSpec> = (1..=n)
        .map(|i| {
            let ballot: Vec<String> = ids.iter().filter(|_| rng.gen_ratio(density.0, density.1)).cloned().collect();
            VoterSpec::approving(format!("v{i}"), ballot)
        })
        .collect();
    Election::new(candidates, voters, spec)
}

/// The non-matroid domains the counterexample fixtures are built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessDomain {
    /// `{∅, {x1}, {y1}, {y2}, {y1, y2}}`.
    Explicit,
    /// Rankings of three items.
    Ranking,
    /// Two items, one positive vote.
    NegativeVotes,
    /// Two variables with the clause `¬x ∨ ¬y`.
    Judgment,
}

impl WitnessDomain {
    pub const ALL: [WitnessDomain; 4] = [
        WitnessDomain::Explicit,
        WitnessDomain::Ranking,
        WitnessDomain::NegativeVotes,
        WitnessDomain::Judgment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WitnessDomain::Explicit => "explicit",
            WitnessDomain::Ranking => "ranking",
            WitnessDomain::NegativeVotes => "negative-votes",
            WitnessDomain::Judgment => "judgment",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name() == s)
    }

    pub fn spec(self) -> ConstraintSpec {
        let strs = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match self {
            WitnessDomain::Explicit => ConstraintSpec::Explicit {
                sets: vec![strs(&["x1"]), strs(&["y1", "y2"])],
            },
            WitnessDomain::Ranking => ConstraintSpec::Ranking {
                items: strs(&["1", "2", "3"]),
            },
            WitnessDomain::NegativeVotes => ConstraintSpec::NegativeVotes {
                items: strs(&["c1", "c2"]),
                k: 1,
            },
            WitnessDomain::Judgment => ConstraintSpec::Judgment {
                variables: strs(&["x", "y"]),
                clauses: vec![strs(&["-x", "-y"])],
            },
        }
    }

    pub fn candidates(self) -> Vec<Candidate> {
        match self {
            WitnessDomain::Explicit => ["x1", "y1", "y2"].iter().map(|s| Candidate::new(*s)).collect(),
            _ => Vec::new(),
        }
    }

    /// Default electorate size of the PAV fixture.
    pub fn pav_n(self) -> usize {
        match self {
            WitnessDomain::Ranking => 18,
            _ => 12,
        }
    }
}

/// Fixture parameters; absent values take each fixture's default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixtureParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub g: Option<usize>,
    pub eps: Option<Rational>,
    pub share: Option<Rational>,
    pub seed: Option<u64>,
    pub domain: Option<WitnessDomain>,
}

/// A generated instance with its reference artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub id: String,
    /// Effective parameters, defaults filled in.
    pub params: Vec<(String, String)>,
    pub election: Election,
    pub outcome: Option<CandSet>,
    pub prices: Option<PriceSystem>,
    pub witness: Option<MatroidWitness>,
}

/// `(id, description)` of every fixture.
pub const CATALOG: [(&str, &str); 6] = [
    ("pav-ejr-cex", "PAV violates EJR on a non-matroid domain"),
    ("phragmen-pjr-cex", "Phragmén's method violates PJR on a non-matroid domain"),
    ("weighted-phragmen", "weighted Phragmén selects only the expensive candidates"),
    ("sp-not-fjr", "stable-priceable outcome violating adaptive FJR"),
    ("sp-not-fjr-literal", "as sp-not-fjr with the large groups approving whole attribute groups"),
    ("random", "seeded random committee election"),
];

pub fn build_fixture(id: &str, params: &FixtureParams, cap: usize) -> Result<Fixture> {
    let mut echo: Vec<(String, String)> = Vec::new();
    let fixture = |election: Election, outcome, prices, witness| Fixture {
        id: id.to_string(),
        params: Vec::new(),
        election,
        outcome,
        prices,
        witness,
    };
    let mut out = match id {
        "pav-ejr-cex" | "phragmen-pjr-cex" => {
            let d = params.domain.unwrap_or(WitnessDomain::Explicit);
            let (cands, system) = domain(&d.candidates(), &d.spec())?;
            let w = canonical_witness(&system, cap)?;
            let pav = id == "pav-ejr-cex";
            let n = params.n.unwrap_or(if pav { d.pav_n() } else { 9 });
            echo.push(("domain".into(), d.name().into()));
            echo.push(("n".into(), n.to_string()));
            let e = if pav {
                gen_pav_ejr_counterexample(&cands, &d.spec(), &w, n)?
            } else {
                gen_phragmen_pjr_counterexample(&cands, &d.spec(), &w, n)?
            };
            fixture(e, None, None, Some(w))
        }
        "weighted-phragmen" => {
            let defaults = WeightedFailure::default();
            let p = WeightedFailure {
                g: params.g.unwrap_or(defaults.g),
                eps: params.eps.clone().unwrap_or(defaults.eps),
                share: params.share.clone().unwrap_or(defaults.share),
            };
            echo.push(("g".into(), p.g.to_string()));
            echo.push(("eps".into(), p.eps.to_string()));
            echo.push(("share".into(), p.share.to_string()));
            let e = gen_weighted_phragmen_failure(&p)?;
            let a: CandSet = (0..p.g).map(|i| 4 * i).collect();
            fixture(e, Some(a), None, None)
        }
        "sp-not-fjr" | "sp-not-fjr-literal" => {
            let n = params.n.unwrap_or(30);
            echo.push(("n".into(), n.to_string()));
            let variant = if id == "sp-not-fjr" {
                SpNotFjrVariant::Repaired
            } else {
                SpNotFjrVariant::Literal
            };
            let f = gen_sp_not_fjr(n, variant)?;
            fixture(f.election, Some(f.outcome), Some(f.prices), None)
        }
        "random" => {
            let (n, m) = (params.n.unwrap_or(4), params.m.unwrap_or(4));
            let k = params.k.unwrap_or(2);
            let seed = params.seed.unwrap_or(1);
            for (key, v) in [("n", n as u64), ("m", m as u64), ("k", k as u64), ("seed", seed)] {
                echo.push((key.into(), v.to_string()));
            }
            fixture(gen_random(&RandomParams::committee(n, m, k), seed)?, None, None, None)
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    out.params = echo;
    Ok(out)
}

/// Smallest `n ≥ 2` (stepping by one) on which [`gen_pav_ejr_counterexample`]
/// succeeds for `domain`, below `limit`.
pub fn smallest_pav_n(d: WitnessDomain, limit: usize, cap: usize) -> Result<Option<usize>> {
    let (cands, system) = domain(&d.candidates(), &d.spec())?;
    let w = canonical_witness(&system, cap)?;
    for n in 2..limit {
        match gen_pav_ejr_counterexample(&cands, &d.spec(), &w, n) {
            Ok(_) => return Ok(Some(n)),
            Err(Error::NTooSmall { .. }) | Err(Error::BadN(..)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{audit_ejr, audit_pjr, Options};
    use crate::constraints::DEFAULT_CAP;
    use crate::rule_pav::solve_pav_exact;
    use crate::rule_phragmen::run_phragmen;

    fn explicit() -> (Vec<Candidate>, ConstraintSpec, MatroidWitness) {
        let d = WitnessDomain::Explicit;
        let (c, sys) = domain(&d.candidates(), &d.spec()).unwrap();
        let w = canonical_witness(&sys, DEFAULT_CAP).unwrap();
        (c, d.spec(), w)
    }

    #[test]
    fn pav_counterexample_sizes() {
        let (c, spec, w) = explicit();
        let e = gen_pav_ejr_counterexample(&c, &spec, &w, 12).unwrap();
        assert_eq!(e.supporters_of("x1").unwrap().len(), 7);
        assert_eq!(e.supporters_of("y1").unwrap().len(), 5);
        assert_eq!(pav_score(&e, &e.set_of(&["x1"]).unwrap()), int(7));
        assert_eq!(pav_score(&e, &e.set_of(&["y1", "y2"]).unwrap()), ratio(15, 2));
        let r = solve_pav_exact(&e, DEFAULT_CAP).unwrap();
        assert_eq!(r.winners, vec![e.set_of(&["y1", "y2"]).unwrap()]);
        assert!(!audit_ejr(&e, &r.winners[0], &Options::default()).unwrap().satisfied());

        assert_eq!(
            gen_pav_ejr_counterexample(&c, &spec, &w, 6).unwrap_err(),
            Error::NTooSmall { n: 6, gap: "-1".into() }
        );
    }

    #[test]
    fn smallest_n_per_domain() {
        assert_eq!(smallest_pav_n(WitnessDomain::Explicit, 40, DEFAULT_CAP).unwrap(), Some(7));
        assert_eq!(smallest_pav_n(WitnessDomain::Ranking, 40, DEFAULT_CAP).unwrap(), Some(7));
    }

    #[test]
    fn phragmen_counterexample() {
        let (c, spec, w) = explicit();
        for n in [9, 90] {
            let e = gen_phragmen_pjr_counterexample(&c, &spec, &w, n).unwrap();
            let tr = run_phragmen(&e).unwrap();
            assert_eq!(tr.outcome, e.set_of(&["x1"]).unwrap());
            assert_eq!(tr.events[0].time, ratio(1, n as i64));
            let rep = audit_pjr(&e, &tr.outcome, &Options::default()).unwrap();
            let v = rep.violation.unwrap();
            assert_eq!(v.group.len(), 2 * n / 3 + 1);
            assert_eq!(v.claim, crate::axioms::Claim::Deserves { ell: 2 });
        }
    }

    #[test]
    fn matroid_domain_is_refused() {
        let c: Vec<Candidate> = ["a", "b"].iter().map(|s| Candidate::new(*s)).collect();
        let sys = FeasibilitySystem::build(&ConstraintSpec::Committee { k: 1 }, &c).unwrap();
        assert!(matches!(canonical_witness(&sys, DEFAULT_CAP), Err(Error::InvalidWitness(_))));
        let fake = MatroidWitness {
            x: CandSet::singleton(0),
            y: CandSet::singleton(0).with(1),
        };
        assert!(gen_phragmen_pjr_counterexample(&c, &ConstraintSpec::Committee { k: 1 }, &fake, 9).is_err());
    }

    #[test]
    fn weighted_failure_parameters() {
        let p = WeightedFailure::default();
        assert!(weighted_failure_cohesive(&p, 120));
        let e = gen_weighted_phragmen_failure(&WeightedFailure { g: 2, ..p.clone() }).unwrap();
        assert_eq!((e.n(), e.m()), (200, 8));
        assert_eq!(e.supporters_of("b1").unwrap().len(), 99);
        assert!(gen_weighted_phragmen_failure(&WeightedFailure { g: 0, ..p.clone() }).is_err());
        assert!(gen_weighted_phragmen_failure(&WeightedFailure {
            share: ratio(1, 2),
            ..p
        })
        .is_err());
    }

    #[test]
    fn sp_not_fjr_shape() {
        let f = gen_sp_not_fjr(30, SpNotFjrVariant::Repaired).unwrap();
        assert_eq!((f.election.n(), f.election.m()), (30, 91));
        assert_eq!(f.outcome.len(), 80);
        assert!(f.election.is_feasible(&f.outcome));
        for i in 0..30 {
            assert_eq!(f.prices.remaining(i), zero());
        }
        assert_eq!(gen_sp_not_fjr(15, SpNotFjrVariant::Repaired).unwrap_err().class(), crate::ErrorClass::Generator);
    }

    #[test]
    fn random_is_reproducible() {
        let p = RandomParams::committee(4, 4, 2);
        assert_eq!(gen_random(&p, 1).unwrap(), gen_random(&p, 1).unwrap());
        assert_ne!(gen_random(&p, 1).unwrap(), gen_random(&p, 2).unwrap());
        for seed in 0..50 {
            let p = RandomParams {
                n: 5,
                m: 6,
                family: RandomFamily::DisjointAttributes { groups: 3 },
                density: (1, 2),
                weights: None,
            };
            gen_random(&p, seed).unwrap();
        }
    }
}

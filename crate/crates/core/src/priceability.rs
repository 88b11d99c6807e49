//! Stable priceability.
//!
//! Every voter holds one unit of money. A [`PriceSystem`] gives each
//! candidate a price and each voter a payment per candidate. An outcome `W`
//! is stable-priceable when:
//!
//! - SP1: voters pay only for selected candidates they approve;
//! - SP2: payments for each selected candidate add up to its price;
//! - SP3: for every `c ∉ W`,
//!   `Σ_{i ∈ N(c)} max(r_i, max_{c' ∈ W} p_i(c')) ≤ π_c`, with `r_i` the
//!   money voter `i` has left;
//! - SP4: `W` has the largest total price among feasible sets. In
//!   [`SpMode::Exhaustive`] this is replaced by exhaustiveness.
//!
//! [`find_payments`] solves SP1 to SP3 as an exact linear program. Voters
//! with identical ballots, and candidates that are interchangeable in the
//! program, share variables: averaging any solution over such permutations
//! gives a symmetric one, so nothing is lost.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::axioms::{strongly_cohesive_claims, Options};
use crate::constraints::Family;
use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpOutcome, Relation};
use crate::model::Election;
use crate::rational::{from_usize, one, zero, Rational};
use crate::set::CandSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriceSystem {
    /// `prices[c]`, for every candidate.
    pub prices: Vec<Rational>,
    /// `payments[i][c]`, for every voter and candidate.
    pub payments: Vec<Vec<Rational>>,
}

impl PriceSystem {
    /// Money voter `i` has not spent.
    pub fn remaining(&self, i: usize) -> Rational {
        self.payments[i].iter().fold(one(), |acc, p| acc - p)
    }

    /// Total price of `set`.
    pub fn price_of(&self, set: &CandSet) -> Rational {
        set.iter().fold(zero(), |acc, c| acc + &self.prices[c])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpMode {
    /// SP4: the outcome maximizes the total price.
    #[default]
    Sp4,
    /// No candidate can be added to the outcome.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpCondition {
    /// Prices positive, payments nonnegative, nobody spends more than one.
    Budgets,
    Sp1,
    Sp2,
    Sp3,
    Sp4,
    Exhaustive,
}

impl SpCondition {
    pub fn name(self) -> &'static str {
        match self {
            SpCondition::Budgets => "budgets",
            SpCondition::Sp1 => "sp1",
            SpCondition::Sp2 => "sp2",
            SpCondition::Sp3 => "sp3",
            SpCondition::Sp4 => "sp4",
            SpCondition::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for SpCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionCheck {
    pub condition: SpCondition,
    pub holds: bool,
    /// What failed first, with candidate and voter ids.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpReport {
    pub checks: Vec<ConditionCheck>,
}

impl SpReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn holds(&self, condition: SpCondition) -> bool {
        self.checks.iter().any(|c| c.condition == condition && c.holds)
    }
}

fn check(condition: SpCondition, detail: Option<String>) -> ConditionCheck {
    ConditionCheck {
        condition,
        holds: detail.is_none(),
        detail,
    }
}

/// The largest total price of a feasible set.
///
/// Disjoint-attribute systems are solved by a dynamic program over the
/// groups; other systems enumerate their maximal sets.
pub fn max_total_price(e: &Election, prices: &[Rational], cap: usize) -> Result<Rational> {
    if let Family::DisjointAttributes { k, groups } = e.system().family() {
        let k = *k;
        // best[used] where used = Σ max(lower, count) over the groups so far
        let mut best: Vec<Option<Rational>> = vec![None; k + 1];
        best[0] = Some(zero());
        for g in groups {
            let mut sorted: Vec<Rational> = g.members.iter().map(|c| prices[c].clone()).collect();
            sorted.sort_by(|a, b| b.cmp(a));
            let mut prefix = vec![zero()];
            for p in &sorted[..g.capacity()] {
                prefix.push(prefix.last().unwrap() + p);
            }
            let mut next: Vec<Option<Rational>> = vec![None; k + 1];
            for (used, value) in best.iter().enumerate() {
                let Some(value) = value else { continue };
                for (count, gain) in prefix.iter().enumerate() {
                    let total = used + count.max(g.lower);
                    if total > k {
                        break;
                    }
                    let cand = value + gain;
                    if next[total].as_ref().is_none_or(|b| cand > *b) {
                        next[total] = Some(cand);
                    }
                }
            }
            best = next;
        }
        return best
            .into_iter()
            .flatten()
            .max()
            .ok_or_else(|| Error::Precondition("no feasible set".into()));
    }
    let maximal = e.system().enumerate_maximal(cap)?;
    Ok(maximal
        .iter()
        .map(|w| w.iter().fold(zero(), |acc, c| acc + &prices[c]))
        .max()
        .unwrap_or_else(zero))
}

/// Checks SP1 to SP3 and either SP4 or exhaustiveness.
pub fn verify_sp(e: &Election, w: &CandSet, ps: &PriceSystem, mode: SpMode, cap: usize) -> Result<SpReport> {
    if !e.is_feasible(w) {
        return Err(Error::InfeasibleOutcome);
    }
    if ps.prices.len() != e.m() || ps.payments.len() != e.n() || ps.payments.iter().any(|p| p.len() != e.m()) {
        return Err(Error::Precondition("price system dimensions do not match the election".into()));
    }
    let cid = |c: usize| e.candidates()[c].id.clone();
    let vid = |i: usize| e.voters()[i].id.clone();
    let mut checks = Vec::new();

    let budgets = (0..e.m())
        .find(|&c| !ps.prices[c].is_positive())
        .map(|c| format!("price of {} is not positive", cid(c)))
        .or_else(|| {
            (0..e.n()).find_map(|i| {
                if let Some(c) = (0..e.m()).find(|&c| ps.payments[i][c].is_negative()) {
                    Some(format!("{} pays a negative amount for {}", vid(i), cid(c)))
                } else if ps.remaining(i).is_negative() {
                    Some(format!("{} spends more than one unit", vid(i)))
                } else {
                    None
                }
            })
        });
    checks.push(check(SpCondition::Budgets, budgets));

    let sp1 = (0..e.n()).find_map(|i| {
        (0..e.m())
            .find(|&c| !ps.payments[i][c].is_zero() && (!w.contains(c) || !e.approvals(i).contains(c)))
            .map(|c| format!("{} pays for {}", vid(i), cid(c)))
    });
    checks.push(check(SpCondition::Sp1, sp1));

    let sp2 = w.iter().find_map(|c| {
        let paid = (0..e.n()).fold(zero(), |acc, i| acc + &ps.payments[i][c]);
        (paid != ps.prices[c]).then(|| format!("{} receives {} against a price of {}", cid(c), paid, ps.prices[c]))
    });
    checks.push(check(SpCondition::Sp2, sp2));

    let willing: Vec<Rational> = (0..e.n())
        .map(|i| {
            w.iter()
                .map(|c| ps.payments[i][c].clone())
                .fold(ps.remaining(i), |acc, p| if p > acc { p } else { acc })
        })
        .collect();
    let sp3 = (0..e.m()).filter(|&c| !w.contains(c)).find_map(|c| {
        let offer = e.supporters(c).iter().fold(zero(), |acc, &i| acc + &willing[i]);
        (offer > ps.prices[c]).then(|| format!("supporters of {} can offer {} against a price of {}", cid(c), offer, ps.prices[c]))
    });
    checks.push(check(SpCondition::Sp3, sp3));

    match mode {
        SpMode::Sp4 => {
            let best = max_total_price(e, &ps.prices, cap)?;
            let own = ps.price_of(w);
            let sp4 = (best > own).then(|| format!("a feasible set is priced {best}, the outcome {own}"));
            checks.push(check(SpCondition::Sp4, sp4));
        }
        SpMode::Exhaustive => {
            let ext = e.system().extenders(w);
            let detail = ext.first().map(|c| format!("{} can be added", cid(c)));
            checks.push(check(SpCondition::Exhaustive, detail));
        }
    }
    Ok(SpReport { checks })
}

/// How prices enter the payment program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PriceMode {
    /// Fixed prices, one per candidate.
    Given(Vec<Rational>),
    /// One common price `π`.
    Uniform,
    /// `π_c = λ · weight(c)` for a common `λ`.
    Proportional,
    /// A free price per candidate, with SP4 imposed against every maximal
    /// feasible set.
    General,
}

/// Solves for a price system under which `w` satisfies SP1 to SP3 (and SP4
/// in [`PriceMode::General`]). `None` when no such system exists.
///
/// With variable prices the program maximizes the total price of `w` plus
/// the smallest price (capped at one), and reports `None` if prices cannot
/// be made positive.
pub fn find_payments(e: &Election, w: &CandSet, mode: &PriceMode, cap: usize) -> Result<Option<PriceSystem>> {
    let others = match mode {
        PriceMode::General => e.system().enumerate_maximal(cap)?,
        _ => Vec::new(),
    };
    payments_against(e, w, mode, &others)
}

fn payments_against(e: &Election, w: &CandSet, mode: &PriceMode, rivals: &[CandSet]) -> Result<Option<PriceSystem>> {
    if !e.is_approval() {
        return Err(Error::Precondition("priceability needs approval ballots".into()));
    }
    if !e.is_feasible(w) {
        return Err(Error::InfeasibleOutcome);
    }
    if let PriceMode::Given(p) = mode {
        if p.len() != e.m() || p.iter().any(|v| !v.is_positive()) {
            return Err(Error::Precondition("one positive price per candidate".into()));
        }
    }
    let types = e.voter_types();
    let type_of: Vec<usize> = {
        let mut t = vec![0; e.n()];
        for (j, members) in types.iter().enumerate() {
            for &i in members {
                t[i] = j;
            }
        }
        t
    };
    let ballot = |j: usize| e.approvals(types[j][0]);

    // candidate classes: same side of W, same supporting types, same price key
    let key = |c: usize| -> (bool, Vec<bool>, Option<Rational>) {
        let approving: Vec<bool> = (0..types.len()).map(|j| ballot(j).contains(c)).collect();
        let price = match mode {
            PriceMode::Given(p) => Some(p[c].clone()),
            PriceMode::Proportional => Some(e.weight(c).clone()),
            PriceMode::Uniform | PriceMode::General => None,
        };
        (w.contains(c), approving, price)
    };
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for c in 0..e.m() {
        let found = match mode {
            PriceMode::General => None,
            _ => classes.iter().position(|cl| key(cl[0]) == key(c)),
        };
        match found {
            Some(k) => classes[k].push(c),
            None => classes.push(vec![c]),
        }
    }
    let class_of: Vec<usize> = {
        let mut out = vec![0; e.m()];
        for (k, members) in classes.iter().enumerate() {
            for &c in members {
                out[c] = k;
            }
        }
        out
    };

    let mut lp = LinearProgram::new(0);
    // price variables
    let price_var: Vec<Option<usize>> = match mode {
        PriceMode::Given(_) => vec![None; classes.len()],
        PriceMode::Uniform | PriceMode::Proportional => {
            let v = lp.add_var();
            vec![Some(v); classes.len()]
        }
        PriceMode::General => (0..classes.len()).map(|_| Some(lp.add_var())).collect(),
    };
    // the price of class k as (variable coefficient, constant)
    let price_term = |k: usize| -> (Option<(usize, Rational)>, Rational) {
        let c = classes[k][0];
        match mode {
            PriceMode::Given(p) => (None, p[c].clone()),
            PriceMode::Uniform | PriceMode::General => (Some((price_var[k].unwrap(), one())), zero()),
            PriceMode::Proportional => (Some((price_var[k].unwrap(), e.weight(c).clone())), zero()),
        }
    };

    // pay[j][k]: what one voter of type j pays for one candidate of class k ⊆ W
    let mut pay: Vec<Vec<Option<usize>>> = vec![vec![None; classes.len()]; types.len()];
    for (j, row) in pay.iter_mut().enumerate() {
        for (k, members) in classes.iter().enumerate() {
            if w.contains(members[0]) && ballot(j).contains(members[0]) {
                row[k] = Some(lp.add_var());
            }
        }
    }
    let most: Vec<usize> = (0..types.len()).map(|_| lp.add_var()).collect();
    let size = |k: usize| from_usize(classes[k].len());
    let count = |j: usize| from_usize(types[j].len());

    for j in 0..types.len() {
        let spend: Vec<(usize, Rational)> = (0..classes.len())
            .filter_map(|k| pay[j][k].map(|v| (v, size(k))))
            .collect();
        lp.push(spend.clone(), Relation::Le, one());
        // most[j] ≥ r_j = 1 − spend, and most[j] ≥ every single payment
        let mut with_most = spend;
        with_most.push((most[j], one()));
        lp.push(with_most, Relation::Ge, one());
        for v in pay[j].iter().flatten() {
            lp.push(vec![(most[j], one()), (*v, -one())], Relation::Ge, zero());
        }
    }
    for k in 0..classes.len() {
        let (var, constant) = price_term(k);
        let mut row: Vec<(usize, Rational)> = Vec::new();
        if w.contains(classes[k][0]) {
            // SP2: Σ_j |j| pay[j][k] − price = 0
            row.extend((0..types.len()).filter_map(|j| pay[j][k].map(|v| (v, count(j)))));
            if let Some((v, a)) = var {
                row.push((v, -a));
            }
            lp.push(row, Relation::Eq, constant);
        } else {
            // SP3: Σ_{j approving} |j| most[j] − price ≤ 0
            row.extend((0..types.len()).filter(|&j| ballot(j).contains(classes[k][0])).map(|j| (most[j], count(j))));
            if let Some((v, a)) = var {
                row.push((v, -a));
            }
            lp.push(row, Relation::Le, constant);
        }
    }
    if let PriceMode::General = mode {
        // SP4 against every rival set
        for rival in rivals {
            let mut coeff = vec![zero(); classes.len()];
            for c in rival.iter() {
                coeff[class_of[c]] += one();
            }
            for c in w.iter() {
                coeff[class_of[c]] -= one();
            }
            let row: Vec<(usize, Rational)> = coeff
                .into_iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(k, a)| (price_var[k].unwrap(), a))
                .collect();
            if !row.is_empty() {
                lp.push(row, Relation::Le, zero());
            }
        }
    }
    // positivity: maximize t ≤ 1 with every price variable ≥ t
    let floor = match mode {
        PriceMode::Given(_) => None,
        _ => {
            let t = lp.add_var();
            let mut vars: Vec<usize> = price_var.iter().flatten().copied().collect();
            vars.dedup();
            for v in vars {
                lp.push(vec![(v, one()), (t, -one())], Relation::Ge, zero());
            }
            lp.push(vec![(t, one())], Relation::Le, one());
            // prefer systems spending as much as possible on W
            let mut objective = vec![(t, one())];
            for k in (0..classes.len()).filter(|&k| w.contains(classes[k][0])) {
                if let (Some((v, a)), _) = price_term(k) {
                    objective.push((v, a * size(k)));
                }
            }
            lp.objective = Some(objective);
            Some(t)
        }
    };

    let point = match solve(&lp) {
        LpOutcome::Optimal { point, .. } => point,
        LpOutcome::Infeasible => return Ok(None),
        LpOutcome::Unbounded => unreachable!("the objective is capped"),
    };
    if let Some(t) = floor {
        if !point[t].is_positive() {
            return Ok(None);
        }
    }
    let value = |(v, a): (usize, Rational)| a * &point[v];
    let prices = (0..e.m())
        .map(|c| {
            let (var, constant) = price_term(class_of[c]);
            var.map(value).unwrap_or(constant)
        })
        .collect();
    let payments = (0..e.n())
        .map(|i| {
            (0..e.m())
                .map(|c| match pay[type_of[i]][class_of[c]] {
                    Some(v) if w.contains(c) => point[v].clone(),
                    _ => zero(),
                })
                .collect()
        })
        .collect();
    Ok(Some(PriceSystem { prices, payments }))
}

/// Which stable-priceable outcomes to search for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// A common price; candidates are the maximum-cardinality feasible sets.
    Uniform,
    /// Free prices with SP4; candidates are all maximal feasible sets.
    General,
    /// Prices proportional to weights, exhaustive outcomes instead of SP4.
    Exhaustive,
}

/// Every candidate outcome that admits a price system, with one such
/// system, in enumeration order.
pub fn search_stable_priceable(e: &Election, mode: SearchMode, cap: usize) -> Result<Vec<(CandSet, PriceSystem)>> {
    let maximal = e.system().enumerate_maximal(cap)?;
    let top = maximal.iter().map(|w| w.len()).max().unwrap_or(0);
    let (outcomes, price_mode): (Vec<&CandSet>, PriceMode) = match mode {
        SearchMode::Uniform => (maximal.iter().filter(|w| w.len() == top).collect(), PriceMode::Uniform),
        SearchMode::General => (maximal.iter().collect(), PriceMode::General),
        SearchMode::Exhaustive => (maximal.iter().collect(), PriceMode::Proportional),
    };
    let mut out = Vec::new();
    for w in outcomes {
        if let Some(ps) = payments_against(e, w, &price_mode, &maximal)? {
            out.push((*w, ps));
        }
    }
    Ok(out)
}

/// For a stable-priceable `w` (exhaustive, prices proportional to weights):
/// whether every strongly cohesive `(S, α, β)` has a member approving at
/// least `β (n − |S|) / n` winners.
pub fn check_weighted_sp_bound(e: &Election, w: &CandSet, ps: &PriceSystem, opts: &Options) -> Result<bool> {
    if !verify_sp(e, w, ps, SpMode::Exhaustive, opts.cap)?.passes() {
        return Err(Error::Precondition("the price system is not stable in exhaustive mode".into()));
    }
    let rate = &ps.prices[0] / e.weight(0);
    if (0..e.m()).any(|c| &ps.prices[c] / e.weight(c) != rate) {
        return Err(Error::Precondition("prices are not proportional to weights".into()));
    }
    let n = e.n();
    for claim in strongly_cohesive_claims(e, opts)? {
        let s = claim.group.len();
        let ok = claim
            .group
            .iter()
            .any(|&i| e.approval_count(i, w) * n >= claim.beta * (n - s));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{ConstraintSpec, DEFAULT_CAP};
    use crate::model::{Candidate, VoterSpec};
    use crate::rational::{int, ratio};

    fn two_plus_two() -> Election {
        let c = vec![Candidate::new("a"), Candidate::new("b")];
        let v = vec![
            VoterSpec::approving("v1", ["a"]),
            VoterSpec::approving("v2", ["a"]),
            VoterSpec::approving("v3", ["b"]),
            VoterSpec::approving("v4", ["b"]),
        ];
        Election::new(c, v, ConstraintSpec::Committee { k: 2 }).unwrap()
    }

    fn manual(e: &Election) -> PriceSystem {
        let mut payments = vec![vec![zero(); 2]; 4];
        payments[0][0] = one();
        payments[1][0] = one();
        payments[2][1] = one();
        payments[3][1] = one();
        PriceSystem {
            prices: vec![int(2); e.m()],
            payments,
        }
    }

    #[test]
    fn committee_example_passes() {
        let e = two_plus_two();
        let w = e.all_candidates();
        let ps = manual(&e);
        assert!(verify_sp(&e, &w, &ps, SpMode::Sp4, DEFAULT_CAP).unwrap().passes());
        let mut bad = ps.clone();
        bad.payments[0][0] -= ratio(1, 100);
        let rep = verify_sp(&e, &w, &bad, SpMode::Sp4, DEFAULT_CAP).unwrap();
        assert!(!rep.holds(SpCondition::Sp2));
        assert!(rep.holds(SpCondition::Sp1));
    }

    #[test]
    fn uniform_payments() {
        let e = two_plus_two();
        let w = e.all_candidates();
        let ps = find_payments(&e, &w, &PriceMode::Uniform, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(ps, manual(&e));
        assert!(verify_sp(&e, &w, &ps, SpMode::Sp4, DEFAULT_CAP).unwrap().passes());
        let found = search_stable_priceable(&e, SearchMode::Uniform, DEFAULT_CAP).unwrap();
        assert_eq!(found, vec![(w, manual(&e))]);
    }

    #[test]
    fn unpaid_candidate_is_infeasible() {
        let c = vec![Candidate::new("a"), Candidate::new("z")];
        let v = vec![VoterSpec::approving("v1", ["a"])];
        let e = Election::new(c, v, ConstraintSpec::Committee { k: 2 }).unwrap();
        let w = e.all_candidates();
        assert_eq!(find_payments(&e, &w, &PriceMode::Uniform, DEFAULT_CAP).unwrap(), None);
        let given = PriceMode::Given(vec![one(), one()]);
        assert_eq!(find_payments(&e, &w, &given, DEFAULT_CAP).unwrap(), None);
    }

    #[test]
    fn sp3_boundary_and_violation() {
        // one voter for a, two for b, k = 1: buying a leaves b's supporters with
        // two units against a price of one
        let c = vec![Candidate::new("a"), Candidate::new("b")];
        let v = vec![
            VoterSpec::approving("v1", ["a"]),
            VoterSpec::approving("v2", ["b"]),
            VoterSpec::approving("v3", ["b"]),
        ];
        let e = Election::new(c, v, ConstraintSpec::Committee { k: 1 }).unwrap();
        let a = e.set_of(&["a"]).unwrap();
        let b = e.set_of(&["b"]).unwrap();
        assert_eq!(find_payments(&e, &a, &PriceMode::Uniform, DEFAULT_CAP).unwrap(), None);
        let ps = find_payments(&e, &b, &PriceMode::Uniform, DEFAULT_CAP).unwrap().unwrap();
        assert!(verify_sp(&e, &b, &ps, SpMode::Sp4, DEFAULT_CAP).unwrap().passes());
        let general = search_stable_priceable(&e, SearchMode::General, DEFAULT_CAP).unwrap();
        assert_eq!(general.iter().map(|(w, _)| *w).collect::<Vec<_>>(), vec![b]);
    }

    #[test]
    fn attribute_price_maximum() {
        let c: Vec<Candidate> = ["a1", "a2", "a3", "b1", "b2"].iter().map(|s| Candidate::new(*s)).collect();
        let spec = ConstraintSpec::DisjointAttributes {
            k: 3,
            groups: vec![
                crate::constraints::AttributeGroupSpec {
                    members: vec!["a1".into(), "a2".into(), "a3".into()],
                    lower: 1,
                    upper: 2,
                },
                crate::constraints::AttributeGroupSpec {
                    members: vec!["b1".into(), "b2".into()],
                    lower: 1,
                    upper: 2,
                },
            ],
        };
        let v = vec![VoterSpec::approving("v1", ["a1"])];
        let e = Election::new(c, v, spec).unwrap();
        let prices = vec![int(5), int(1), int(4), int(2), int(3)];
        let brute = e
            .system()
            .enumerate_maximal(DEFAULT_CAP)
            .unwrap()
            .iter()
            .map(|w| w.iter().fold(zero(), |acc, c| acc + &prices[c]))
            .max()
            .unwrap();
        assert_eq!(max_total_price(&e, &prices, DEFAULT_CAP).unwrap(), brute);
        assert_eq!(brute, int(12));
    }
}

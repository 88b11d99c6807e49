use std::collections::HashSet;

use super::{
    cohesive, cohesive_with, deserves, deserves_weighted, AuditReport, Axiom, Claim, Cohesion, FjrMode, GroupSearch,
    Options, SearchStats, Violation,
};
use crate::error::{Error, Result};
use crate::model::Election;
use crate::rational::Rational;
use crate::set::{self, CandSet};

/// Largest voter count for which all voter subsets are enumerated.
const MAX_SUBSET_VOTERS: usize = 24;

fn require_feasible(e: &Election, w: &CandSet) -> Result<()> {
    if !e.is_feasible(w) {
        return Err(Error::InfeasibleOutcome);
    }
    Ok(())
}

fn utilities(e: &Election, group: &[usize], w: &CandSet) -> Vec<Rational> {
    group.iter().map(|&i| e.utility(i, w)).collect()
}

fn report(axiom: Axiom, violation: Option<Violation>, stats: SearchStats) -> AuditReport {
    AuditReport {
        axiom,
        violation,
        stats,
    }
}

/// Every nonempty intersection of ballots, in increasing order.
pub(super) fn intersection_closure(e: &Election) -> Vec<CandSet> {
    let ballots: Vec<CandSet> = (0..e.n())
        .map(|i| *e.approvals(i))
        .filter(|b| !b.is_empty())
        .collect();
    let mut seen: HashSet<CandSet> = ballots.iter().copied().collect();
    let mut frontier: Vec<CandSet> = seen.iter().copied().collect();
    while let Some(y) = frontier.pop() {
        for b in &ballots {
            let z = y.intersection(b);
            if !z.is_empty() && seen.insert(z) {
                frontier.push(z);
            }
        }
    }
    let mut out: Vec<CandSet> = seen.into_iter().collect();
    out.sort();
    out
}

fn subset_groups(n: usize) -> Result<impl Iterator<Item = Vec<usize>>> {
    if n > MAX_SUBSET_VOTERS {
        return Err(Error::Precondition(format!(
            "voter-subset search supports at most {MAX_SUBSET_VOTERS} voters"
        )));
    }
    Ok((1u64..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect()))
}

/// Unions of voter types, or all voter subsets.
fn candidate_groups(e: &Election, opts: &Options) -> Result<Vec<Vec<usize>>> {
    match opts.groups {
        GroupSearch::AllSubsets => Ok(subset_groups(e.n())?.collect()),
        GroupSearch::Reduced => {
            let types = e.voter_types();
            Ok(subset_groups(types.len())?
                .map(|pick| {
                    let mut g: Vec<usize> = pick.iter().flat_map(|&t| types[t].iter().copied()).collect();
                    g.sort_unstable();
                    g
                })
                .collect())
        }
    }
}

/// Audits `w` for EJR: some group deserving `ℓ` has every member approving
/// fewer than `ℓ` winners.
pub fn audit_ejr(e: &Election, w: &CandSet, opts: &Options) -> Result<AuditReport> {
    require_feasible(e, w)?;
    let mut stats = SearchStats::default();
    let test = |group: Vec<usize>, ell: usize, stats: &mut SearchStats| -> Result<Option<Violation>> {
        stats.groups += 1;
        let v = deserves(e, &group, ell, opts)?;
        stats.t_sets += v.examined;
        Ok(v.holds.then(|| Violation {
            utilities: utilities(e, &group, w),
            group,
            claim: Claim::Deserves { ell },
        }))
    };
    match opts.groups {
        GroupSearch::AllSubsets => {
            for group in subset_groups(e.n())? {
                let ell = group.iter().map(|&i| e.approval_count(i, w)).max().unwrap_or(0) + 1;
                if e.common_approvals(&group).len() < ell {
                    continue;
                }
                if let Some(v) = test(group, ell, &mut stats)? {
                    return Ok(report(Axiom::Ejr, Some(v), stats));
                }
            }
        }
        GroupSearch::Reduced => {
            let closure = intersection_closure(e);
            let mut tried = HashSet::new();
            for ell in 1..=e.m() {
                for y in closure.iter().filter(|y| y.len() >= ell) {
                    let group: Vec<usize> = (0..e.n())
                        .filter(|&i| y.is_subset(e.approvals(i)) && e.approval_count(i, w) < ell)
                        .collect();
                    if group.is_empty() || !tried.insert((group.clone(), ell)) {
                        continue;
                    }
                    if let Some(v) = test(group, ell, &mut stats)? {
                        return Ok(report(Axiom::Ejr, Some(v), stats));
                    }
                }
            }
        }
    }
    Ok(report(Axiom::Ejr, None, stats))
}

/// Audits `w` for PJR: some group deserving `ℓ` has fewer than `ℓ` winners
/// in the union of its ballots.
pub fn audit_pjr(e: &Election, w: &CandSet, opts: &Options) -> Result<AuditReport> {
    require_feasible(e, w)?;
    let mut stats = SearchStats::default();
    let test = |group: Vec<usize>, ell: usize, stats: &mut SearchStats| -> Result<Option<Violation>> {
        stats.groups += 1;
        let v = deserves(e, &group, ell, opts)?;
        stats.t_sets += v.examined;
        Ok(v.holds.then(|| Violation {
            utilities: utilities(e, &group, w),
            group,
            claim: Claim::Deserves { ell },
        }))
    };
    match opts.groups {
        GroupSearch::AllSubsets => {
            for group in subset_groups(e.n())? {
                let ell = e.union_approvals(&group).intersection_len(w) + 1;
                if e.common_approvals(&group).len() < ell {
                    continue;
                }
                if let Some(v) = test(group, ell, &mut stats)? {
                    return Ok(report(Axiom::Pjr, Some(v), stats));
                }
            }
        }
        GroupSearch::Reduced => {
            for (group, ell) in pjr_groups(e, w, |y, ell| y.len() >= ell) {
                if let Some(v) = test(group, ell, &mut stats)? {
                    return Ok(report(Axiom::Pjr, Some(v), stats));
                }
            }
        }
    }
    Ok(report(Axiom::Pjr, None, stats))
}

/// Candidate groups for PJR-style audits: for a common-approval set `Y`
/// and a set `Z ⊆ W` of `ℓ - 1` winners, the voters approving `Y` whose
/// approved winners all lie in `Z`. Ordered by `ℓ`, then `Y`, then `Z`.
fn pjr_groups<'a>(
    e: &'a Election,
    w: &'a CandSet,
    keep: impl Fn(&CandSet, usize) -> bool + 'a,
) -> impl Iterator<Item = (Vec<usize>, usize)> + 'a {
    let closure = intersection_closure(e);
    let mut tried = HashSet::new();
    (1..=e.m()).flat_map(move |ell| {
        let mut out = Vec::new();
        for y in closure.iter().filter(|y| keep(y, ell)) {
            let approving: Vec<usize> = (0..e.n()).filter(|&i| y.is_subset(e.approvals(i))).collect();
            set::any_subset_of_size(w, (ell - 1).min(w.len()), |z| {
                let group: Vec<usize> = approving
                    .iter()
                    .copied()
                    .filter(|&i| e.approvals(i).intersection(w).is_subset(&z))
                    .collect();
                if !group.is_empty() && tried.insert((group.clone(), ell)) {
                    out.push((group, ell));
                }
                false
            });
        }
        out
    })
}

/// Audits `w` for FJR in the given reading. Thresholds range over the
/// achievable utility values; `α` over `0..=m` in the fixed reading.
pub fn audit_fjr(e: &Election, w: &CandSet, mode: FjrMode, opts: &Options) -> Result<AuditReport> {
    require_feasible(e, w)?;
    let axiom = match mode {
        FjrMode::Fixed => Axiom::Fjr,
        FjrMode::Adaptive => Axiom::FjrAdaptive,
    };
    let values = e.achievable_values();
    let mut stats = SearchStats::default();
    for group in candidate_groups(e, opts)? {
        let utils = utilities(e, &group, w);
        let best = utils.iter().max().expect("groups are nonempty");
        let Some(beta) = values.iter().find(|v| *v > best) else {
            continue;
        };
        let modes: Vec<Cohesion> = match mode {
            FjrMode::Fixed => (0..=e.m()).map(|alpha| Cohesion::Fixed { alpha }).collect(),
            FjrMode::Adaptive => vec![Cohesion::Adaptive],
        };
        stats.groups += 1;
        for cohesion in modes {
            let v = cohesive(e, &group, cohesion, beta, opts)?;
            stats.t_sets += v.examined;
            if v.holds {
                let violation = Violation {
                    group,
                    claim: Claim::Cohesive {
                        cohesion,
                        beta: beta.clone(),
                    },
                    utilities: utils,
                };
                return Ok(report(axiom, Some(violation), stats));
            }
        }
    }
    Ok(report(axiom, None, stats))
}

/// Audits `w` for the core: a group that is cohesive for per-voter
/// thresholds each exceeding the voter's utility from `w`.
pub fn audit_core(e: &Election, w: &CandSet, opts: &Options) -> Result<AuditReport> {
    require_feasible(e, w)?;
    let mut stats = SearchStats::default();
    'groups: for group in candidate_groups(e, opts)? {
        let utils = utilities(e, &group, w);
        let mut beta = Vec::with_capacity(group.len());
        for (&i, u) in group.iter().zip(&utils) {
            match e.achievable_values_of(i).into_iter().find(|v| v > u) {
                Some(b) => beta.push(b),
                None => continue 'groups,
            }
        }
        stats.groups += 1;
        for alpha in 0..=e.m() {
            let v = cohesive_with(e, &group, Cohesion::Fixed { alpha }, &beta, opts)?;
            stats.t_sets += v.examined;
            if v.holds {
                let violation = Violation {
                    group,
                    claim: Claim::CoreCohesive { alpha, beta },
                    utilities: utils,
                };
                return Ok(report(Axiom::Core, Some(violation), stats));
            }
        }
    }
    Ok(report(Axiom::Core, None, stats))
}

/// Whether `group` is a blocking coalition against `w` with endowment
/// `⌊|S| k / n⌋` claiming `ℓ` common approvals: every sub-committee
/// `Ŵ ⊆ W` with `|Ŵ| <= k - k'` that can still take `k'` further members
/// extends by at most `k'` candidates to a feasible set holding `ℓ`
/// commonly approved candidates.
fn blocking(e: &Election, group: &[usize], w: &CandSet, k: usize, ell: usize) -> (bool, usize) {
    let system = e.system();
    let endowment = group.len() * k / e.n();
    let common = e.common_approvals(group);
    let all = e.all_candidates();
    let mut examined = 0;
    let mut blocked = true;
    for size in 0..=(k - endowment).min(w.len()) {
        let escaped = set::any_subset_of_size(w, size, |sub| {
            examined += 1;
            if !system.can_add(&sub, &all, endowment) {
                return false;
            }
            let have = sub.intersection_len(&common);
            let need = ell.saturating_sub(have);
            !(need <= endowment && system.can_add(&sub, &common, need))
        });
        if escaped {
            blocked = false;
            break;
        }
    }
    (blocked, examined)
}

/// Audits `w` for restrained EJR over feasible committees of size at most
/// `k`. The system's largest feasible set must have exactly `k` members.
pub fn audit_restrained_ejr(e: &Election, w: &CandSet, k: usize, opts: &Options) -> Result<AuditReport> {
    require_feasible(e, w)?;
    let largest = e.system().max_feasible_size(opts.cap)?;
    if largest != k {
        return Err(Error::Precondition(format!(
            "largest feasible set has {largest} members, expected k = {k}"
        )));
    }
    let mut stats = SearchStats::default();
    for group in candidate_groups(e, opts)? {
        let ell = group.iter().map(|&i| e.approval_count(i, w)).max().unwrap_or(0) + 1;
        stats.groups += 1;
        let (blocked, examined) = blocking(e, &group, w, k, ell);
        stats.t_sets += examined;
        if blocked {
            let violation = Violation {
                utilities: utilities(e, &group, w),
                claim: Claim::Blocking {
                    endowment: group.len() * k / e.n(),
                    ell,
                },
                group,
            };
            return Ok(report(Axiom::RestrainedEjr, Some(violation), stats));
        }
    }
    Ok(report(Axiom::RestrainedEjr, None, stats))
}

/// Distinct weights of feasible `beta`-subsets of `pool`, increasing.
pub(super) fn subset_weights(e: &Election, pool: &CandSet, beta: usize) -> Vec<Rational> {
    let mut weights = std::collections::BTreeSet::new();
    set::any_subset_of_size(pool, beta, |x| {
        if e.is_feasible(&x) {
            weights.insert(e.weight_of(&x));
        }
        false
    });
    weights.into_iter().collect()
}

fn weighted_test(
    e: &Election,
    w: &CandSet,
    group: Vec<usize>,
    beta: usize,
    opts: &Options,
    stats: &mut SearchStats,
) -> Result<Option<Violation>> {
    stats.groups += 1;
    for alpha in subset_weights(e, &e.common_approvals(&group), beta) {
        let v = deserves_weighted(e, &group, &alpha, beta, opts)?;
        stats.t_sets += v.examined;
        if v.holds {
            return Ok(Some(Violation {
                utilities: utilities(e, &group, w),
                group,
                claim: Claim::StronglyCohesive { alpha, beta },
            }));
        }
    }
    Ok(None)
}

/// Audits `w` for EJR with weighted candidates: some `(α, β)`-strongly
/// cohesive group has every member approving fewer than `β` winners.
pub fn audit_ejr_weighted(e: &Election, w: &CandSet, opts: &Options) -> Result<AuditReport> {
    require_feasible(e, w)?;
    let mut stats = SearchStats::default();
    match opts.groups {
        GroupSearch::AllSubsets => {
            for group in subset_groups(e.n())? {
                let beta = group.iter().map(|&i| e.approval_count(i, w)).max().unwrap_or(0) + 1;
                if let Some(v) = weighted_test(e, w, group, beta, opts, &mut stats)? {
                    return Ok(report(Axiom::EjrWeighted, Some(v), stats));
                }
            }
        }
        GroupSearch::Reduced => {
            let closure = intersection_closure(e);
            let mut tried = HashSet::new();
            for beta in 1..=e.m() {
                for y in closure.iter().filter(|y| y.len() >= beta) {
                    let group: Vec<usize> = (0..e.n())
                        .filter(|&i| y.is_subset(e.approvals(i)) && e.approval_count(i, w) < beta)
                        .collect();
                    if group.is_empty() || !tried.insert((group.clone(), beta)) {
                        continue;
                    }
                    if let Some(v) = weighted_test(e, w, group, beta, opts, &mut stats)? {
                        return Ok(report(Axiom::EjrWeighted, Some(v), stats));
                    }
                }
            }
        }
    }
    Ok(report(Axiom::EjrWeighted, None, stats))
}

/// Audits `w` for PJR with weighted candidates: some `(α, β)`-strongly
/// cohesive group has fewer than `β` winners in the union of its ballots.
pub fn audit_pjr_weighted(e: &Election, w: &CandSet, opts: &Options) -> Result<AuditReport> {
    require_feasible(e, w)?;
    let mut stats = SearchStats::default();
    match opts.groups {
        GroupSearch::AllSubsets => {
            for group in subset_groups(e.n())? {
                let beta = e.union_approvals(&group).intersection_len(w) + 1;
                if let Some(v) = weighted_test(e, w, group, beta, opts, &mut stats)? {
                    return Ok(report(Axiom::PjrWeighted, Some(v), stats));
                }
            }
        }
        GroupSearch::Reduced => {
            for (group, beta) in pjr_groups(e, w, |y, beta| y.len() >= beta) {
                if let Some(v) = weighted_test(e, w, group, beta, opts, &mut stats)? {
                    return Ok(report(Axiom::PjrWeighted, Some(v), stats));
                }
            }
        }
    }
    Ok(report(Axiom::PjrWeighted, None, stats))
}

/// Runs the auditor for `axiom`. Restrained EJR uses the size of the
/// largest feasible set as `k`.
pub fn audit(e: &Election, w: &CandSet, axiom: Axiom, opts: &Options) -> Result<AuditReport> {
    match axiom {
        Axiom::Ejr => audit_ejr(e, w, opts),
        Axiom::Pjr => audit_pjr(e, w, opts),
        Axiom::Fjr => audit_fjr(e, w, FjrMode::Fixed, opts),
        Axiom::FjrAdaptive => audit_fjr(e, w, FjrMode::Adaptive, opts),
        Axiom::Core => audit_core(e, w, opts),
        Axiom::RestrainedEjr => {
            let k = e.system().max_feasible_size(opts.cap)?;
            audit_restrained_ejr(e, w, k, opts)
        }
        Axiom::EjrWeighted => audit_ejr_weighted(e, w, opts),
        Axiom::PjrWeighted => audit_pjr_weighted(e, w, opts),
    }
}

/// Re-derives a reported violation from scratch: the group's utilities from
/// `w` fall short of the claim, and the claim oracle confirms the claim.
/// Reports without a violation recheck trivially.
pub fn recheck(e: &Election, w: &CandSet, rep: &AuditReport, opts: &Options) -> Result<bool> {
    let Some(v) = &rep.violation else {
        return Ok(true);
    };
    let group = &v.group;
    if group.is_empty() || group.windows(2).any(|p| p[0] >= p[1]) || group.iter().any(|&i| i >= e.n()) {
        return Ok(false);
    }
    if utilities(e, group, w) != v.utilities {
        return Ok(false);
    }
    let counts = || group.iter().map(|&i| e.approval_count(i, w));
    let coverage = || e.union_approvals(group).intersection_len(w);
    Ok(match (&v.claim, rep.axiom) {
        (Claim::Deserves { ell }, Axiom::Ejr) => counts().all(|c| c < *ell) && deserves(e, group, *ell, opts)?.holds,
        (Claim::Deserves { ell }, Axiom::Pjr) => coverage() < *ell && deserves(e, group, *ell, opts)?.holds,
        (Claim::Cohesive { cohesion, beta }, Axiom::Fjr | Axiom::FjrAdaptive) => {
            let mode_ok = matches!(
                (cohesion, rep.axiom),
                (Cohesion::Fixed { .. }, Axiom::Fjr) | (Cohesion::Adaptive, Axiom::FjrAdaptive)
            );
            mode_ok
                && v.utilities.iter().all(|u| u < beta)
                && cohesive(e, group, *cohesion, beta, opts)?.holds
        }
        (Claim::CoreCohesive { alpha, beta }, Axiom::Core) => {
            beta.len() == group.len()
                && v.utilities.iter().zip(beta).all(|(u, b)| u < b)
                && cohesive_with(e, group, Cohesion::Fixed { alpha: *alpha }, beta, opts)?.holds
        }
        (Claim::Blocking { endowment, ell }, Axiom::RestrainedEjr) => {
            let k = e.system().max_feasible_size(opts.cap)?;
            *endowment == group.len() * k / e.n()
                && counts().all(|c| c < *ell)
                && blocking(e, group, w, k, *ell).0
        }
        (Claim::StronglyCohesive { alpha, beta }, Axiom::EjrWeighted) => {
            counts().all(|c| c < *beta) && deserves_weighted(e, group, alpha, *beta, opts)?.holds
        }
        (Claim::StronglyCohesive { alpha, beta }, Axiom::PjrWeighted) => {
            coverage() < *beta && deserves_weighted(e, group, alpha, *beta, opts)?.holds
        }
        _ => false,
    })
}

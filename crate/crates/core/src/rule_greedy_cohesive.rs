//! An outcome satisfying FJR, built from a greedy partition into cohesive
//! groups.
//!
//! Each round picks, among the voters still present, a group that is
//! `(α, β)`-cohesive (fixed reading) for the largest `β`, preferring the
//! smallest `α`, and removes it. Removed voters stay in the electorate as
//! far as `n` is concerned. Then one set of at most `α_r` candidates giving
//! every member of `S_r` utility `β_r` is chosen per group so that their
//! union is feasible; the union is extended to a maximal feasible set.

use crate::axioms::cohesive::minimal_good_sets;
use crate::axioms::{cohesive, Cohesion, Options};
use crate::error::{Error, Result};
use crate::model::{Election, Utility};
use crate::rational::{zero, Rational};
use crate::set::CandSet;

/// Voter types per round are combined into at most `2^MAX_TYPES` groups.
const MAX_TYPES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohesiveGroup {
    /// Voter indices, increasing.
    pub voters: Vec<usize>,
    pub alpha: usize,
    pub beta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohesivePartition {
    pub groups: Vec<CohesiveGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FjrOutcome {
    pub partition: CohesivePartition,
    /// The set chosen for each group, aligned with the partition.
    pub parts: Vec<CandSet>,
    pub outcome: CandSet,
}

/// Unions of voter types among `remaining`, as sorted voter lists in
/// lexicographic order.
fn type_unions(e: &Election, remaining: &[usize]) -> Result<Vec<Vec<usize>>> {
    let types: Vec<Vec<usize>> = e
        .voter_types()
        .into_iter()
        .map(|t| t.into_iter().filter(|i| remaining.contains(i)).collect::<Vec<_>>())
        .filter(|t| !t.is_empty())
        .collect();
    if types.len() > MAX_TYPES {
        return Err(Error::Precondition(format!(
            "greedy partition supports at most {MAX_TYPES} voter types"
        )));
    }
    let mut groups: Vec<Vec<usize>> = (1u64..1 << types.len())
        .map(|mask| {
            let mut g: Vec<usize> = (0..types.len())
                .filter(|&t| mask >> t & 1 == 1)
                .flat_map(|t| types[t].iter().copied())
                .collect();
            g.sort_unstable();
            g
        })
        .collect();
    groups.sort();
    Ok(groups)
}

pub fn greedy_cohesive_partition(e: &Election, opts: &Options) -> Result<CohesivePartition> {
    let max_alpha = e.system().max_feasible_size(opts.cap)?;
    let mut remaining: Vec<usize> = e.all_voters();
    let mut groups = Vec::new();
    while !remaining.is_empty() {
        let mut betas: Vec<Rational> = Vec::new();
        for &i in &remaining {
            betas.extend(e.achievable_values_of(i).into_iter().filter(|b| *b > zero()));
        }
        betas.sort();
        betas.dedup();
        let candidates = type_unions(e, &remaining)?;
        let mut found = None;
        'search: for beta in betas.iter().rev() {
            for alpha in 0..=max_alpha {
                for g in &candidates {
                    if cohesive(e, g, Cohesion::Fixed { alpha }, beta, opts)?.holds {
                        found = Some(CohesiveGroup {
                            voters: g.clone(),
                            alpha,
                            beta: beta.clone(),
                        });
                        break 'search;
                    }
                }
            }
        }
        // every nonempty group is (0, 0)-cohesive
        let group = found.unwrap_or_else(|| CohesiveGroup {
            voters: remaining.clone(),
            alpha: 0,
            beta: zero(),
        });
        remaining.retain(|i| !group.voters.contains(i));
        groups.push(group);
    }
    Ok(CohesivePartition { groups })
}

fn assemble(
    e: &Election,
    options: &[Vec<CandSet>],
    r: usize,
    acc: CandSet,
    chosen: &mut Vec<CandSet>,
) -> bool {
    if r == options.len() {
        return true;
    }
    for x in &options[r] {
        let next = acc.union(x);
        if e.is_feasible(&next) {
            chosen.push(*x);
            if assemble(e, options, r + 1, next, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Builds an FJR outcome from [`greedy_cohesive_partition`].
///
/// Fails with [`Error::SearchExhausted`] if the parts cannot be assembled,
/// which the existence argument rules out.
pub fn construct_fjr_outcome(e: &Election, opts: &Options) -> Result<FjrOutcome> {
    let partition = greedy_cohesive_partition(e, opts)?;
    let table = e.voters().iter().any(|v| matches!(v.utility, Utility::Table(_)));
    let mut options = Vec::new();
    for g in &partition.groups {
        let pool = if table {
            e.all_candidates()
        } else {
            e.union_approvals(&g.voters)
        };
        let good = |x: &CandSet| g.voters.iter().all(|&i| e.utility(i, x) >= g.beta);
        let mut sets = minimal_good_sets(&pool, g.alpha, opts.cap, &good)?;
        sets.retain(|x| e.is_feasible(x));
        options.push(sets);
    }
    let mut parts = Vec::new();
    if !assemble(e, &options, 0, CandSet::EMPTY, &mut parts) {
        return Err(Error::SearchExhausted);
    }
    let union = parts.iter().fold(CandSet::EMPTY, |acc, x| acc.union(x));
    Ok(FjrOutcome {
        partition,
        parts,
        outcome: e.system().complete(&union),
    })
}

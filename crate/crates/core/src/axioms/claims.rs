use super::audit::subset_weights;
use super::{deserves, deserves_weighted, Options};
use crate::error::{Error, Result};
use crate::model::Election;
use crate::rational::Rational;
use crate::set::CandSet;

const MAX_CLAIM_VOTERS: usize = 20;

/// Whether the members of `group` approve on average at least `(ℓ - 1) / 2`
/// winners of `w`.
pub fn check_avg_satisfaction(e: &Election, w: &CandSet, group: &[usize], ell: usize) -> bool {
    if group.is_empty() || ell == 0 {
        return true;
    }
    let total: usize = group.iter().map(|&i| e.approval_count(i, w)).sum();
    2 * total >= (ell - 1) * group.len()
}

fn all_groups(n: usize) -> Result<Vec<Vec<usize>>> {
    if n > MAX_CLAIM_VOTERS {
        return Err(Error::Precondition(format!(
            "claim search supports at most {MAX_CLAIM_VOTERS} voters"
        )));
    }
    Ok((1u64..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
        .collect())
}

/// For every voter group deserving at least one candidate, the largest `ℓ`
/// it deserves. Groups are listed by increasing voter bitmask.
pub fn deserving_claims(e: &Election, opts: &Options) -> Result<Vec<(Vec<usize>, usize)>> {
    let mut out = Vec::new();
    for group in all_groups(e.n())? {
        let top = e.common_approvals(&group).len();
        let mut best = 0;
        for ell in 1..=top {
            if !deserves(e, &group, ell, opts)?.holds {
                break;
            }
            best = ell;
        }
        if best > 0 {
            out.push((group, best));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedClaim {
    pub group: Vec<usize>,
    pub alpha: Rational,
    pub beta: usize,
}

/// Every `(S, α, β)` with `S` `(α, β)`-strongly cohesive, where `α` ranges
/// over the weights of feasible `β`-subsets of the common approvals (the
/// only values at which the verdict can change).
pub fn strongly_cohesive_claims(e: &Election, opts: &Options) -> Result<Vec<WeightedClaim>> {
    let mut out = Vec::new();
    for group in all_groups(e.n())? {
        let common = e.common_approvals(&group);
        for beta in 1..=common.len() {
            for alpha in subset_weights(e, &common, beta) {
                if deserves_weighted(e, &group, &alpha, beta, opts)?.holds {
                    out.push(WeightedClaim {
                        group: group.clone(),
                        alpha,
                        beta,
                    });
                }
            }
        }
    }
    Ok(out)
}

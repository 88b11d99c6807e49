use std::ops::ControlFlow;

use num_traits::Zero;

use super::{Options, Search, Verdict};
use crate::constraints::CountSpace;
use crate::error::{Error, Result};
use crate::model::Election;
use crate::rational::{self, Rational};
use crate::set::{self, CandSet};

/// Count-vector space refined by `refine`, when the options and the system
/// allow it.
pub(super) fn symmetric_space(e: &Election, opts: &Options, refine: &[CandSet]) -> Option<CountSpace> {
    if opts.search == Search::Plain || refine.len() > 64 {
        return None;
    }
    e.system().count_space(refine)
}

/// Largest `|T|` with `s (|T| + a) <= n a`, i.e. the counter-proposals that
/// the proportionality inequality does not dismiss.
pub(super) fn size_bound(n: usize, s: usize, a: usize) -> usize {
    a * (n - s) / s
}

/// Whether `group` deserves `ell` candidates.
///
/// Every feasible `T` must either be completable by `ell` commonly approved
/// candidates or satisfy `|S| / n > ℓ / (|T| + ℓ)`. An empty group or
/// `ell = 0` holds vacuously.
pub fn deserves(e: &Election, group: &[usize], ell: usize, opts: &Options) -> Result<Verdict> {
    if group.is_empty() || ell == 0 {
        return Ok(Verdict::holds(0));
    }
    let common = e.common_approvals(group);
    if common.len() < ell {
        return Ok(Verdict::refuted(CandSet::EMPTY, 1));
    }
    let bound = size_bound(e.n(), group.len(), ell);
    let system = e.system();

    if let Some(space) = symmetric_space(e, opts, &[common]) {
        let inside: Vec<bool> = space.classes().iter().map(|cl| cl.signature & 1 == 1).collect();
        let limit = vec![usize::MAX; inside.len()];
        let mut examined = 0;
        let mut refuting = None;
        space.for_each_vector(&limit, bound, opts.cap, |t| {
            examined += 1;
            let have: usize = t.iter().zip(&inside).filter(|(_, &i)| i).map(|(x, _)| x).sum();
            if have >= ell || space.max_extra(t, &inside) >= ell - have {
                ControlFlow::Continue(())
            } else {
                refuting = Some(space.materialize(t));
                ControlFlow::Break(())
            }
        })?;
        return Ok(match refuting {
            Some(t) => Verdict::refuted(t, examined),
            None => Verdict::holds(examined),
        });
    }

    let mut refuting = None;
    let run = system.for_each_feasible_in(&e.all_candidates(), bound, opts.cap, |t| {
        let have = t.intersection_len(&common);
        if have >= ell || system.can_add(t, &common, ell - have) {
            ControlFlow::Continue(())
        } else {
            refuting = Some(*t);
            ControlFlow::Break(())
        }
    })?;
    Ok(match refuting {
        Some(t) => Verdict::refuted(t, run.visited),
        None => Verdict::holds(run.visited),
    })
}

/// Whether `group` is `(alpha, beta)`-strongly cohesive: every feasible `T`
/// is answered by some `X ⊆ ∩ A_i` with `weight(X) <= alpha`, `|X| >= beta`
/// and `T ∪ X` feasible, unless `|S| / n > alpha / (weight(T) + alpha)`.
pub fn deserves_weighted(
    e: &Election,
    group: &[usize],
    alpha: &Rational,
    beta: usize,
    opts: &Options,
) -> Result<Verdict> {
    if group.is_empty() || beta == 0 {
        return Ok(Verdict::holds(0));
    }
    if *alpha <= rational::zero() {
        return Err(Error::Precondition("alpha must be positive".into()));
    }
    let common = e.common_approvals(group);
    let mut answers = Vec::new();
    set::any_subset_of_size(&common, beta, |x| {
        if e.weight_of(&x) <= *alpha && e.is_feasible(&x) {
            answers.push(x);
        }
        answers.len() > opts.cap
    });
    if answers.len() > opts.cap {
        return Err(Error::EnumerationCapExceeded { cap: opts.cap });
    }
    if answers.is_empty() {
        return Ok(Verdict::refuted(CandSet::EMPTY, 1));
    }

    let n = rational::from_usize(e.n());
    let s = rational::from_usize(group.len());
    // weight(T) <= (n - s) alpha / s are the counter-proposals to answer
    let budget = (&n - &s) * alpha / &s;
    let min_weight = e
        .candidates()
        .iter()
        .map(|c| c.weight.clone())
        .min()
        .unwrap_or_else(rational::one);
    let bound = if budget.is_zero() {
        0
    } else {
        rational::floor_to_usize(&(&budget / &min_weight)).unwrap_or(usize::MAX)
    };
    let system = e.system();
    let mut refuting = None;
    let run = system.for_each_feasible_in(&e.all_candidates(), bound, opts.cap, |t| {
        if e.weight_of(t) > budget || answers.iter().any(|x| system.is_feasible(&t.union(x))) {
            ControlFlow::Continue(())
        } else {
            refuting = Some(*t);
            ControlFlow::Break(())
        }
    })?;
    Ok(match refuting {
        Some(t) => Verdict::refuted(t, run.visited),
        None => Verdict::holds(run.visited),
    })
}

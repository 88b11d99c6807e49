use std::ops::ControlFlow;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::deserve::{size_bound, symmetric_space};
use super::{Cohesion, Options, Verdict};
use crate::constraints::CountSpace;
use crate::error::{Error, Result};
use crate::model::{Election, Utility};
use crate::rational::Rational;
use crate::set::CandSet;

/// Whether `group` is `(α, β)`-cohesive in the given reading.
///
/// Fixed reading: every feasible `T` is answered by some `X` with `|X| = α`,
/// `u_i(X) >= β` for all members and `T ∪ X` feasible, unless
/// `|S| / n > α / (|T| + α)`. Adaptive reading: `X` may have any size and the
/// inequality uses `|X|` in place of `α`.
pub fn cohesive(e: &Election, group: &[usize], cohesion: Cohesion, beta: &Rational, opts: &Options) -> Result<Verdict> {
    let thresholds = vec![beta.clone(); group.len()];
    cohesive_with(e, group, cohesion, &thresholds, opts)
}

/// [`cohesive`] with a per-voter threshold, aligned with `group`.
pub fn cohesive_with(
    e: &Election,
    group: &[usize],
    cohesion: Cohesion,
    thresholds: &[Rational],
    opts: &Options,
) -> Result<Verdict> {
    if thresholds.len() != group.len() {
        return Err(Error::Precondition("one threshold per group member".into()));
    }
    if group.is_empty() {
        return Ok(Verdict::holds(0));
    }
    if e.is_approval() {
        let mut refine: Vec<CandSet> = Vec::new();
        let mut need: Vec<usize> = Vec::new();
        for (&i, b) in group.iter().zip(thresholds) {
            let want = ceil_count(b);
            match refine.iter().position(|a| a == e.approvals(i)) {
                Some(r) => need[r] = need[r].max(want),
                None => {
                    refine.push(*e.approvals(i));
                    need.push(want);
                }
            }
        }
        if let Some(space) = symmetric_space(e, opts, &refine) {
            return symmetric(e, group.len(), &space, &need, cohesion, opts);
        }
    }
    plain(e, group, thresholds, cohesion, opts)
}

/// Smallest count meeting a threshold.
fn ceil_count(b: &Rational) -> usize {
    if !b.is_positive() {
        return 0;
    }
    let (q, r) = b.numer().div_rem(b.denom());
    let q = q.to_usize().unwrap_or(usize::MAX);
    if r.is_positive() {
        q.saturating_add(1)
    } else {
        q
    }
}

fn plain(e: &Election, group: &[usize], thresholds: &[Rational], cohesion: Cohesion, opts: &Options) -> Result<Verdict> {
    let system = e.system();
    let good = |x: &CandSet| group.iter().zip(thresholds).all(|(&i, b)| e.utility(i, x) >= *b);
    let table = group.iter().any(|&i| matches!(e.voters()[i].utility, Utility::Table(_)));
    let pool = if table {
        e.all_candidates()
    } else {
        e.union_approvals(group)
    };
    let limit = match cohesion {
        Cohesion::Fixed { alpha } => alpha,
        Cohesion::Adaptive => pool.len(),
    };
    let minimal = minimal_good_sets(&pool, limit, opts.cap, &good)?;
    let n = e.n();
    let s = group.len();

    let check = |t: &CandSet| -> bool {
        match cohesion {
            Cohesion::Fixed { alpha } => minimal.iter().any(|x| {
                let u = t.union(x);
                system.is_feasible(&u) && system.extends_to_size(&u, alpha)
            }),
            Cohesion::Adaptive => minimal
                .iter()
                .any(|x| x.len() * (n - s) < s * t.len() || system.is_feasible(&t.union(x))),
        }
    };
    let bound = match (cohesion, minimal.iter().map(|x| x.len()).min()) {
        (_, None) => return Ok(Verdict::refuted(CandSet::EMPTY, 1)),
        (Cohesion::Fixed { alpha }, Some(_)) => size_bound(n, s, alpha),
        (Cohesion::Adaptive, Some(g)) => size_bound(n, s, g),
    };
    let mut refuting = None;
    let run = system.for_each_feasible_in(&e.all_candidates(), bound, opts.cap, |t| {
        if check(t) {
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

/// Inclusion-minimal subsets of `pool` with at most `limit` elements on
/// which `good` holds. `good` must be monotone.
pub(crate) fn minimal_good_sets(pool: &CandSet, limit: usize, cap: usize, good: &dyn Fn(&CandSet) -> bool) -> Result<Vec<CandSet>> {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        items: &[usize],
        start: usize,
        acc: CandSet,
        limit: usize,
        cap: usize,
        visited: &mut usize,
        good: &dyn Fn(&CandSet) -> bool,
        out: &mut Vec<CandSet>,
    ) -> Result<()> {
        *visited += 1;
        if *visited > cap {
            return Err(Error::EnumerationCapExceeded { cap });
        }
        if good(&acc) {
            // every proper subset of a minimal set comes earlier on this path
            if acc.iter().all(|c| !good(&acc.without(c))) {
                out.push(acc);
            }
            return Ok(());
        }
        if acc.len() == limit {
            return Ok(());
        }
        for i in start..items.len() {
            rec(items, i + 1, acc.with(items[i]), limit, cap, visited, good, out)?;
        }
        Ok(())
    }
    let items = pool.to_vec();
    let mut out = Vec::new();
    let mut visited = 0;
    rec(&items, 0, CandSet::EMPTY, limit, cap, &mut visited, good, &mut out)?;
    Ok(out)
}

/// Cohesiveness over count vectors. Refining set `r` is the ballot of the
/// `r`-th voter type, which needs `need[r]` approved candidates.
fn symmetric(
    e: &Election,
    s: usize,
    space: &CountSpace,
    need: &[usize],
    cohesion: Cohesion,
    opts: &Options,
) -> Result<Verdict> {
    let classes = space.classes();
    let width = classes.len();
    let useful: Vec<usize> = (0..width).filter(|&j| classes[j].signature != 0).collect();
    let top = need.iter().copied().max().unwrap_or(0);
    let limit = match cohesion {
        Cohesion::Fixed { alpha } => alpha,
        Cohesion::Adaptive => usize::MAX,
    };
    let good = |x: &[usize]| {
        need.iter().enumerate().all(|(r, &want)| {
            let got: usize = space.inside(r).map(|j| x[j]).sum();
            got >= want
        })
    };

    // minimal good vectors over the useful classes
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    let mut x = vec![0; width];
    let mut visited = 0;
    minimal_vectors(
        &useful,
        0,
        &mut x,
        0,
        limit,
        &|j| classes[j].size().min(top),
        &good,
        &mut minimal,
        &mut visited,
        opts.cap,
    )?;
    let sizes: Vec<usize> = minimal.iter().map(|v| v.iter().sum()).collect();
    let Some(&smallest) = sizes.iter().min() else {
        return Ok(Verdict::refuted(CandSet::EMPTY, 1));
    };
    let n = e.n();
    let all = vec![true; width];
    let union = |t: &[usize], x: &[usize]| -> Vec<usize> { t.iter().zip(x).map(|(a, b)| *a.max(b)).collect() };
    let check = |t: &[usize]| -> bool {
        let t_len: usize = t.iter().sum();
        minimal.iter().zip(&sizes).any(|(x, &len)| match cohesion {
            Cohesion::Fixed { alpha } => {
                let u = union(t, x);
                space.feasible(&u) && u.iter().sum::<usize>() + space.max_extra(&u, &all) >= alpha
            }
            Cohesion::Adaptive => len * (n - s) < s * t_len || space.feasible(&union(t, x)),
        })
    };
    let bound = match cohesion {
        Cohesion::Fixed { alpha } => size_bound(n, s, alpha),
        Cohesion::Adaptive => size_bound(n, s, smallest),
    };
    let mut examined = 0;
    let mut refuting = None;
    space.for_each_vector(&vec![usize::MAX; width], bound, opts.cap, |t| {
        examined += 1;
        if check(t) {
            ControlFlow::Continue(())
        } else {
            refuting = Some(space.materialize(t));
            ControlFlow::Break(())
        }
    })?;
    Ok(match refuting {
        Some(t) => Verdict::refuted(t, examined),
        None => Verdict::holds(examined),
    })
}

#[allow(clippy::too_many_arguments)]
fn minimal_vectors(
    useful: &[usize],
    pos: usize,
    x: &mut Vec<usize>,
    total: usize,
    limit: usize,
    top: &dyn Fn(usize) -> usize,
    good: &dyn Fn(&[usize]) -> bool,
    out: &mut Vec<Vec<usize>>,
    visited: &mut usize,
    cap: usize,
) -> Result<()> {
    if pos == useful.len() {
        *visited += 1;
        if *visited > cap {
            return Err(Error::EnumerationCapExceeded { cap });
        }
        if good(x) {
            let minimal = useful.iter().all(|&j| {
                if x[j] == 0 {
                    return true;
                }
                x[j] -= 1;
                let still = good(x);
                x[j] += 1;
                !still
            });
            if minimal {
                out.push(x.clone());
            }
        }
        return Ok(());
    }
    let j = useful[pos];
    for v in 0..=top(j).min(limit - total) {
        x[j] = v;
        minimal_vectors(useful, pos + 1, x, total + v, limit, top, good, out, visited, cap)?;
    }
    x[j] = 0;
    Ok(())
}

//! Proportional Approval Voting over arbitrary feasibility systems.
//!
//! The score of `W` is `Σ_i H(|W ∩ A_i|)`. [`solve_pav_exact`] maximizes it by
//! branch and bound over the feasible sets and reports every inclusion-maximal
//! optimum. [`pav_swap_search`] is the single-swap local search.

use crate::error::{Error, Result};
use crate::model::Election;
use crate::rational::{from_usize, harmonic, ratio, zero, Rational};
use crate::set::CandSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PavStats {
    /// Search nodes (feasible sets) visited.
    pub visited: usize,
    /// Subtrees cut by the optimistic bound.
    pub pruned: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PavResult {
    pub score: Rational,
    /// All maximal feasible sets attaining `score`, in increasing order.
    pub winners: Vec<CandSet>,
    pub stats: PavStats,
}

pub fn pav_score(e: &Election, w: &CandSet) -> Rational {
    (0..e.n()).fold(zero(), |acc, i| acc + harmonic(e.approval_count(i, w)))
}

/// Approval ballots grouped by identical ballot, with multiplicities.
struct Profile {
    ballots: Vec<CandSet>,
    weight: Vec<Rational>,
}

impl Profile {
    fn new(e: &Election) -> Self {
        let mut ballots: Vec<CandSet> = Vec::new();
        let mut mult: Vec<usize> = Vec::new();
        for i in 0..e.n() {
            match ballots.iter().position(|b| b == e.approvals(i)) {
                Some(j) => mult[j] += 1,
                None => {
                    ballots.push(*e.approvals(i));
                    mult.push(1);
                }
            }
        }
        Profile {
            ballots,
            weight: mult.into_iter().map(from_usize).collect(),
        }
    }

    /// Score gain of adding `c` when ballot `j` already has `counts[j]` winners.
    fn gain(&self, counts: &[usize], c: usize) -> Rational {
        let mut g = zero();
        for (j, b) in self.ballots.iter().enumerate() {
            if b.contains(c) {
                g += &self.weight[j] * ratio(1, counts[j] as i64 + 1);
            }
        }
        g
    }
}

struct Search<'a> {
    e: &'a Election,
    profile: Profile,
    cap: usize,
    best: Option<Rational>,
    winners: Vec<CandSet>,
    stats: PavStats,
}

impl Search<'_> {
    fn run(&mut self, start: usize, acc: CandSet, counts: &mut Vec<usize>, score: Rational) -> Result<()> {
        self.stats.visited += 1;
        if self.stats.visited > self.cap {
            return Err(Error::EnumerationCapExceeded { cap: self.cap });
        }
        let system = self.e.system();
        let m = self.e.m();
        let later: Vec<usize> = (start..m).filter(|&c| system.is_feasible(&acc.with(c))).collect();

        // adding a set Z gains at most Σ_{c ∈ Z} gain(c) at the current counts
        let optimistic = later.iter().fold(score.clone(), |acc, &c| acc + self.profile.gain(counts, c));
        if let Some(best) = &self.best {
            if optimistic < *best {
                self.stats.pruned += 1;
                return Ok(());
            }
        }
        if system.is_maximal(&acc) {
            match &self.best {
                Some(best) if score < *best => {}
                Some(best) if score == *best => self.winners.push(acc),
                _ => {
                    self.best = Some(score.clone());
                    self.winners = vec![acc];
                }
            }
        }
        for c in later {
            let g = self.profile.gain(counts, c);
            for (j, b) in self.profile.ballots.iter().enumerate() {
                if b.contains(c) {
                    counts[j] += 1;
                }
            }
            self.run(c + 1, acc.with(c), counts, &score + g)?;
            for (j, b) in self.profile.ballots.iter().enumerate() {
                if b.contains(c) {
                    counts[j] -= 1;
                }
            }
        }
        Ok(())
    }
}

/// Maximizes the PAV score over the feasible sets. Ties are all reported.
pub fn solve_pav_exact(e: &Election, cap: usize) -> Result<PavResult> {
    if !e.is_approval() {
        return Err(Error::Precondition("PAV needs approval ballots".into()));
    }
    let profile = Profile::new(e);
    let width = profile.ballots.len();
    let mut search = Search {
        e,
        profile,
        cap,
        best: None,
        winners: Vec::new(),
        stats: PavStats::default(),
    };
    search.run(0, CandSet::EMPTY, &mut vec![0; width], zero())?;
    let mut winners = search.winners;
    winners.sort();
    Ok(PavResult {
        score: search.best.unwrap_or_else(zero),
        winners,
        stats: search.stats,
    })
}

/// Applies improving single swaps `(W \ {c}) ∪ {c'}` until none is left.
///
/// Swaps are tried with `c` in increasing order and, for each, `c'` in
/// increasing order; the first strictly improving feasible swap is taken.
pub fn pav_swap_search(e: &Election, start: &CandSet) -> Result<CandSet> {
    if !e.system().is_maximal(start) {
        return Err(Error::Precondition("swap search starts from a maximal feasible set".into()));
    }
    let system = e.system();
    let mut w = *start;
    let mut score = pav_score(e, &w);
    'outer: loop {
        for c in w.iter() {
            for d in (0..e.m()).filter(|&d| !w.contains(d)) {
                let next = w.without(c).with(d);
                if !system.is_feasible(&next) {
                    continue;
                }
                let s = pav_score(e, &next);
                if s > score {
                    w = next;
                    score = s;
                    continue 'outer;
                }
            }
        }
        return Ok(w);
    }
}

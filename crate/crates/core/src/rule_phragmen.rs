//! Phragmén's sequential method under feasibility constraints.
//!
//! Voters earn money at rate one. A candidate is bought the moment its
//! supporters jointly hold its price (one, or the candidate's weight in the
//! weighted variant); the buyers' budgets reset to zero and every candidate
//! that no longer fits is removed. The simulation is event driven and exact.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::model::Election;
use crate::rational::{from_usize, one, zero, Rational};
use crate::set::CandSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurchaseEvent {
    pub time: Rational,
    pub candidate: usize,
    /// What each supporter pays, in voter order. Payments sum to the price.
    pub payments: Vec<(usize, Rational)>,
    /// Voters whose budgets are reset; always the supporters of `candidate`.
    pub reset: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalReason {
    /// `W ∪ {c}` became infeasible.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Removal {
    pub time: Rational,
    pub candidate: usize,
    pub reason: RemovalReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhragmenTrace {
    pub weighted: bool,
    pub events: Vec<PurchaseEvent>,
    pub removals: Vec<Removal>,
    /// Candidates nobody approves; they are never bought.
    pub unsupported: Vec<usize>,
    pub outcome: CandSet,
    /// Time of the last purchase (zero if nothing was bought).
    pub end_time: Rational,
    /// Money each voter holds at `end_time` with nothing left to buy.
    pub stranded: Vec<Rational>,
}

fn price(e: &Election, weighted: bool, c: usize) -> Rational {
    if weighted {
        e.weight(c).clone()
    } else {
        one()
    }
}

fn simulate(e: &Election, weighted: bool) -> Result<PhragmenTrace> {
    if !e.is_approval() {
        return Err(Error::Precondition("Phragmén's method needs approval ballots".into()));
    }
    let system = e.system();
    let supporters: Vec<Vec<usize>> = (0..e.m()).map(|c| e.supporters(c)).collect();
    let unsupported: Vec<usize> = (0..e.m()).filter(|&c| supporters[c].is_empty()).collect();
    let mut available: Vec<usize> = (0..e.m()).filter(|&c| !supporters[c].is_empty()).collect();
    let mut reset_at: Vec<Rational> = vec![zero(); e.n()];
    let mut now = zero();
    let mut w = CandSet::EMPTY;
    let mut events = Vec::new();
    let mut removals = Vec::new();

    // candidates that already do not fit alone
    available.retain(|&c| {
        let fits = system.is_feasible(&CandSet::singleton(c));
        if !fits {
            removals.push(Removal {
                time: zero(),
                candidate: c,
                reason: RemovalReason::Infeasible,
            });
        }
        fits
    });

    while !available.is_empty() {
        let mut best: Option<(Rational, usize)> = None;
        for &c in &available {
            let held = supporters[c].iter().fold(zero(), |acc, &i| acc + (&now - &reset_at[i]));
            let t = &now + (price(e, weighted, c) - held) / from_usize(supporters[c].len());
            let better = match &best {
                None => true,
                Some((bt, bc)) => match t.cmp(bt) {
                    Ordering::Less => true,
                    Ordering::Equal => e.candidates()[c].id < e.candidates()[*bc].id,
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((t, c));
            }
        }
        let (t, c) = best.expect("available is nonempty");
        now = t;
        let payments: Vec<(usize, Rational)> = supporters[c].iter().map(|&i| (i, &now - &reset_at[i])).collect();
        for &i in &supporters[c] {
            reset_at[i] = now.clone();
        }
        w.insert(c);
        events.push(PurchaseEvent {
            time: now.clone(),
            candidate: c,
            payments,
            reset: supporters[c].clone(),
        });
        available.retain(|&d| {
            if d == c {
                return false;
            }
            let fits = system.is_feasible(&w.with(d));
            if !fits {
                removals.push(Removal {
                    time: now.clone(),
                    candidate: d,
                    reason: RemovalReason::Infeasible,
                });
            }
            fits
        });
    }
    let stranded = reset_at.iter().map(|r| &now - r).collect();
    Ok(PhragmenTrace {
        weighted,
        events,
        removals,
        unsupported,
        outcome: w,
        end_time: now,
        stranded,
    })
}

/// Runs the method with unit prices.
pub fn run_phragmen(e: &Election) -> Result<PhragmenTrace> {
    simulate(e, false)
}

/// Runs the method with each candidate priced at its weight.
pub fn run_phragmen_weighted(e: &Election) -> Result<PhragmenTrace> {
    simulate(e, true)
}

/// The first bookkeeping identity a trace violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFault {
    TimeOrder,
    PaymentSum,
    Payers,
    Budget,
    Reset,
    PrefixFeasibility,
    Removal,
    Coverage,
    Outcome,
}

impl TraceFault {
    pub fn name(self) -> &'static str {
        match self {
            TraceFault::TimeOrder => "time-order",
            TraceFault::PaymentSum => "payment-sum",
            TraceFault::Payers => "payers",
            TraceFault::Budget => "budget",
            TraceFault::Reset => "reset",
            TraceFault::PrefixFeasibility => "prefix-feasibility",
            TraceFault::Removal => "removal",
            TraceFault::Coverage => "coverage",
            TraceFault::Outcome => "outcome",
        }
    }
}

impl fmt::Display for TraceFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Replays a trace against the election and checks its internal consistency.
pub fn trace_audit(trace: &PhragmenTrace, e: &Election) -> Result<(), TraceFault> {
    let system = e.system();
    let mut reset_at: Vec<Rational> = vec![zero(); e.n()];
    let mut last = zero();
    let mut w = CandSet::EMPTY;
    // prefix of W purchased by each event time
    let mut prefixes: Vec<(Rational, CandSet)> = vec![(zero(), CandSet::EMPTY)];

    for ev in &trace.events {
        if ev.time < last || ev.time.is_negative() {
            return Err(TraceFault::TimeOrder);
        }
        last = ev.time.clone();
        if ev.candidate >= e.m() || w.contains(ev.candidate) {
            return Err(TraceFault::Outcome);
        }
        let supporters = e.supporters(ev.candidate);
        let total = ev.payments.iter().fold(zero(), |acc, (_, p)| acc + p);
        if total != price(e, trace.weighted, ev.candidate) {
            return Err(TraceFault::PaymentSum);
        }
        let payers: Vec<usize> = ev.payments.iter().map(|(i, _)| *i).collect();
        if payers.iter().any(|i| !supporters.contains(i)) {
            return Err(TraceFault::Payers);
        }
        for (i, p) in &ev.payments {
            // a buyer spends exactly what she accrued since her last reset
            if p.is_negative() || *p != &ev.time - &reset_at[*i] {
                return Err(TraceFault::Budget);
            }
        }
        if ev.reset != supporters || payers != supporters {
            return Err(TraceFault::Reset);
        }
        for &i in &ev.reset {
            reset_at[i] = ev.time.clone();
        }
        w.insert(ev.candidate);
        if !system.is_feasible(&w) {
            return Err(TraceFault::PrefixFeasibility);
        }
        prefixes.push((ev.time.clone(), w));
    }

    for r in &trace.removals {
        let bought_by = prefixes
            .iter()
            .filter(|(t, _)| *t <= r.time)
            .map(|(_, s)| *s)
            .next_back()
            .unwrap_or(CandSet::EMPTY);
        if w.contains(r.candidate) || system.is_feasible(&bought_by.with(r.candidate)) {
            return Err(TraceFault::Removal);
        }
    }

    let removed: CandSet = trace.removals.iter().map(|r| r.candidate).collect();
    let unsupported: CandSet = trace.unsupported.iter().copied().collect();
    let expect_unsupported: CandSet = (0..e.m()).filter(|&c| e.supporters(c).is_empty()).collect();
    if unsupported != expect_unsupported
        || removed.len() != trace.removals.len()
        || !removed.is_disjoint(&w)
        || w.union(&removed).union(&unsupported) != e.all_candidates()
    {
        return Err(TraceFault::Coverage);
    }
    if trace.outcome != w || trace.end_time != last {
        return Err(TraceFault::Outcome);
    }
    if trace.stranded.len() != e.n() || trace.stranded.iter().zip(&reset_at).any(|(s, r)| *s != &last - r) {
        return Err(TraceFault::Budget);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::ConstraintSpec;
    use crate::model::{Candidate, VoterSpec};
    use crate::rational::ratio;

    fn election(cands: &[&str], ballots: &[&[&str]], spec: ConstraintSpec) -> Election {
        let c = cands.iter().map(|s| Candidate::new(*s)).collect();
        let v = ballots
            .iter()
            .enumerate()
            .map(|(i, b)| VoterSpec::approving(format!("v{i}"), b.iter().copied()))
            .collect();
        Election::new(c, v, spec).unwrap()
    }

    #[test]
    fn three_against_one() {
        let e = election(&["a", "b"], &[&["a"], &["a"], &["a"], &["b"]], ConstraintSpec::Committee { k: 2 });
        let tr = run_phragmen(&e).unwrap();
        assert_eq!(tr.events.len(), 2);
        assert_eq!((tr.events[0].candidate, tr.events[0].time.clone()), (0, ratio(1, 3)));
        assert_eq!((tr.events[1].candidate, tr.events[1].time.clone()), (1, one()));
        assert_eq!(tr.events[1].payments, vec![(3, one())]);
        assert_eq!(tr.outcome, e.all_candidates());
        assert_eq!(trace_audit(&tr, &e), Ok(()));
        assert_eq!(tr.stranded, vec![ratio(2, 3), ratio(2, 3), ratio(2, 3), zero()]);
    }

    #[test]
    fn ties_go_to_the_smaller_id() {
        let e = election(&["b", "a"], &[&["a", "b"]], ConstraintSpec::Committee { k: 1 });
        let tr = run_phragmen(&e).unwrap();
        assert_eq!(tr.outcome, e.set_of(&["a"]).unwrap());
        assert_eq!(tr.removals.len(), 1);
        assert_eq!(trace_audit(&tr, &e), Ok(()));
    }

    #[test]
    fn empty_ballot() {
        let e = election(&["a"], &[&[]], ConstraintSpec::Committee { k: 1 });
        let tr = run_phragmen(&e).unwrap();
        assert!(tr.events.is_empty() && tr.outcome.is_empty());
        assert_eq!(tr.unsupported, vec![0]);
        assert_eq!(trace_audit(&tr, &e), Ok(()));
    }

    #[test]
    fn tampering_is_detected() {
        let e = election(&["a", "b"], &[&["a"], &["a"], &["a"], &["b"]], ConstraintSpec::Committee { k: 2 });
        let tr = run_phragmen(&e).unwrap();

        let mut bad = tr.clone();
        bad.events[0].payments[0].1 += ratio(1, 100);
        assert_eq!(trace_audit(&bad, &e), Err(TraceFault::PaymentSum));

        let mut bad = tr.clone();
        bad.events.swap(0, 1);
        assert_eq!(trace_audit(&bad, &e), Err(TraceFault::TimeOrder));

        let small = election(&["a", "b"], &[&["a"], &["a"], &["a"], &["b"]], ConstraintSpec::Committee { k: 1 });
        assert_eq!(trace_audit(&tr, &small), Err(TraceFault::PrefixFeasibility));
    }
}

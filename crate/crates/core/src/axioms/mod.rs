//! Exhaustive auditors for the proportionality axioms.
//!
//! The building blocks are claim oracles: [`deserves`] (a group deserves `ℓ`
//! candidates), [`deserves_weighted`] (strong cohesiveness with candidate
//! weights) and [`cohesive`] / [`cohesive_with`] (cohesiveness for general
//! utilities). Each returns a [`Verdict`] carrying the first refuting
//! counter-proposal `T` when the claim fails.
//!
//! The `audit_*` functions search for a group whose claim is not honoured by
//! an outcome `W` and report it as an [`AuditReport`].
//!
//! On disjoint-attribute systems with approval ballots the counter-proposals
//! are enumerated as count vectors over symmetry classes (see
//! [`CountSpace`](crate::constraints::CountSpace)); [`Search::Plain`] forces
//! the set-by-set enumeration.

mod audit;
mod claims;
pub(crate) mod cohesive;
mod deserve;

pub use audit::{
    audit, audit_core, audit_ejr, audit_ejr_weighted, audit_fjr, audit_pjr, audit_pjr_weighted, audit_restrained_ejr,
    recheck,
};
pub use claims::{check_avg_satisfaction, deserving_claims, strongly_cohesive_claims, WeightedClaim};
pub use cohesive::{cohesive, cohesive_with};
pub use deserve::{deserves, deserves_weighted};

use serde::{Deserialize, Serialize};

use crate::constraints::DEFAULT_CAP;
use crate::rational::Rational;
use crate::set::CandSet;

/// How counter-proposals are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Search {
    /// Count vectors when the system admits them, sets otherwise.
    #[default]
    Auto,
    Plain,
}

/// How candidate groups are chosen by the auditors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroupSearch {
    /// Maximal groups per common-approval set (EJR, PJR and weighted
    /// variants) or unions of voter types (FJR, core, restrained EJR).
    #[default]
    Reduced,
    /// Every nonempty voter subset.
    AllSubsets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub cap: usize,
    pub search: Search,
    pub groups: GroupSearch,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cap: DEFAULT_CAP,
            search: Search::Auto,
            groups: GroupSearch::Reduced,
        }
    }
}

impl Options {
    pub fn plain() -> Self {
        Options {
            search: Search::Plain,
            ..Options::default()
        }
    }

    pub fn with_cap(cap: usize) -> Self {
        Options {
            cap,
            ..Options::default()
        }
    }
}

/// Which reading of the FJR cohesiveness condition to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum Cohesion {
    /// `|X| = α` and the threshold `α / (|T| + α)`.
    Fixed { alpha: usize },
    /// `X` of any size and the threshold `|X| / (|T| + |X|)`.
    Adaptive,
}

/// Which FJR reading an audit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FjrMode {
    #[default]
    Fixed,
    Adaptive,
}

/// Outcome of a single claim check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// The first counter-proposal the group cannot answer.
    pub refuting: Option<CandSet>,
    /// Counter-proposals examined.
    pub examined: usize,
}

impl Verdict {
    fn holds(examined: usize) -> Self {
        Verdict {
            holds: true,
            refuting: None,
            examined,
        }
    }

    fn refuted(t: CandSet, examined: usize) -> Self {
        Verdict {
            holds: false,
            refuting: Some(t),
            examined,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Ejr,
    Pjr,
    Fjr,
    FjrAdaptive,
    Core,
    RestrainedEjr,
    EjrWeighted,
    PjrWeighted,
}

impl Axiom {
    pub const ALL: [Axiom; 8] = [
        Axiom::Ejr,
        Axiom::Pjr,
        Axiom::Fjr,
        Axiom::FjrAdaptive,
        Axiom::Core,
        Axiom::RestrainedEjr,
        Axiom::EjrWeighted,
        Axiom::PjrWeighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Ejr => "ejr",
            Axiom::Pjr => "pjr",
            Axiom::Fjr => "fjr",
            Axiom::FjrAdaptive => "fjr-adaptive",
            Axiom::Core => "core",
            Axiom::RestrainedEjr => "restrained-ejr",
            Axiom::EjrWeighted => "ejr-weighted",
            Axiom::PjrWeighted => "pjr-weighted",
        }
    }

    pub fn parse(s: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name() == s)
    }
}

/// The entitlement a violating group was found to hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    /// The group deserves `ell` candidates.
    Deserves { ell: usize },
    /// `(α, β)`-cohesive in the given mode.
    Cohesive { cohesion: Cohesion, beta: Rational },
    /// `(α, β(i))`-cohesive with a per-voter threshold, aligned with the group.
    CoreCohesive { alpha: usize, beta: Vec<Rational> },
    /// A blocking coalition with endowment `endowment` claiming `ell` common
    /// approvals.
    Blocking { endowment: usize, ell: usize },
    /// `(α, β)`-strongly cohesive.
    StronglyCohesive { alpha: Rational, beta: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Voter indices, increasing.
    pub group: Vec<usize>,
    pub claim: Claim,
    /// `u_i(W)` for each voter of the group.
    pub utilities: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub groups: usize,
    pub t_sets: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub axiom: Axiom,
    pub violation: Option<Violation>,
    pub stats: SearchStats,
}

impl AuditReport {
    pub fn satisfied(&self) -> bool {
        self.violation.is_none()
    }
}

#[cfg(test)]
mod tests;

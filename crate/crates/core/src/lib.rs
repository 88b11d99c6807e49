//! Proportional selection under feasibility constraints.
//!
//! Elections pair approval (or general monotone) utilities with a
//! downward-closed [`FeasibilitySystem`]. The crate provides the constrained
//! PAV and Phragmén rules, stable-priceability checks, a constructive FJR
//! rule, exact brute-force auditors for the proportionality axioms, and
//! generators for the standard counterexample constructions.
//!
//! All numbers are exact [`Rational`]s. Auditors are exhaustive and meant
//! for small instances; enumerations are bounded by a cap and fail with
//! [`Error::EnumerationCapExceeded`] beyond it.

pub mod axioms;
pub mod constraints;
pub mod error;
pub mod fixtures;
pub mod lp;
pub mod model;
pub mod priceability;
pub mod rational;
pub mod rule_greedy_cohesive;
pub mod rule_pav;
pub mod rule_phragmen;
pub mod set;

pub use constraints::{ConstraintSpec, ExchangeCheck, FeasibilitySystem, MatroidWitness, DEFAULT_CAP};
pub use error::{Error, ErrorClass, Result};
pub use model::{BallotSpec, Candidate, Election, UtilityMode, VoterSpec};
pub use rational::Rational;
pub use set::CandSet;

use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::class`] groups variants into the coarse classes the CLI maps onto
/// exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate candidate id {0:?}")]
    DuplicateCandidate(String),
    #[error("duplicate voter id {0:?}")]
    DuplicateVoter(String),
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(String),
    #[error("unknown voter {0:?}")]
    UnknownVoter(String),
    #[error("candidate {0:?} has a non-positive weight")]
    NonPositiveWeight(String),
    #[error("voter {voter:?} has a non-monotone utility table")]
    NonMonotone { voter: String },
    #[error("invalid utility profile: {0}")]
    InvalidUtilities(String),
    #[error("election needs at least one voter and one candidate")]
    EmptyElection,
    #[error("too many candidates: {got} (limit {limit})")]
    TooManyCandidates { got: usize, limit: usize },

    #[error("quotas are unsatisfiable: {0}")]
    UnsatisfiableQuotas(String),
    #[error("attribute groups overlap at candidate {0:?}")]
    OverlappingGroups(String),
    #[error("groups do not cover candidate {0:?}")]
    UncoveredCandidate(String),
    #[error("committee size must be positive")]
    NonPositiveK,
    #[error("clause set has no satisfying assignment")]
    UnsatisfiableClauses,
    #[error("invalid constraint specification: {0}")]
    InvalidConstraints(String),

    #[error("enumeration cap of {cap} sets exceeded")]
    EnumerationCapExceeded { cap: usize },
    #[error("outcome is not feasible")]
    InfeasibleOutcome,
    #[error("feasibility system is not a matroid")]
    NotAMatroid,
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("n = {n} is too small: the PAV score gap is {gap}")]
    NTooSmall { n: usize, gap: String },
    #[error("bad n = {0}: {1}")]
    BadN(usize, String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("no outcome assembled from the cohesive partition; search exhausted")]
    SearchExhausted,
}

/// Coarse error classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Precondition,
    Generator,
    Cap,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            DuplicateCandidate(_)
            | DuplicateVoter(_)
            | UnknownCandidate(_)
            | UnknownVoter(_)
            | NonPositiveWeight(_)
            | NonMonotone { .. }
            | InvalidUtilities(_)
            | EmptyElection
            | TooManyCandidates { .. }
            | UnsatisfiableQuotas(_)
            | OverlappingGroups(_)
            | UncoveredCandidate(_)
            | NonPositiveK
            | UnsatisfiableClauses
            | InvalidConstraints(_) => ErrorClass::Input,
            InfeasibleOutcome | NotAMatroid | Precondition(_) => ErrorClass::Precondition,
            InvalidWitness(_) | NTooSmall { .. } | BadN(..) | InvalidParameters(_) | UnknownFixture(_) => {
                ErrorClass::Generator
            }
            EnumerationCapExceeded { .. } => ErrorClass::Cap,
            SearchExhausted => ErrorClass::Internal,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

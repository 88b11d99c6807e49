//! Encoders that turn structured decision domains into feasibility systems
//! over auxiliary candidates.

use serde::{Deserialize, Serialize};

use super::{ConstraintSpec, Family, FeasibilitySystem};
use crate::error::{Error, Result};
use crate::model::Candidate;
use crate::rational;

/// Largest number of ranked items or judgment variables.
const MAX_ITEMS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub value: bool,
}

/// What an auxiliary candidate stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AuxMeaning {
    Above { above: String, below: String },
    Elect { item: String },
    Reject { item: String },
    Assign { variable: String, value: bool },
}

#[derive(Debug, Clone)]
pub struct Encoding {
    pub candidates: Vec<Candidate>,
    pub system: FeasibilitySystem,
    pub aux: Vec<AuxMeaning>,
}

impl Encoding {
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c.id == id)
    }
}

fn check_items(items: &[String]) -> Result<()> {
    if items.len() > MAX_ITEMS {
        return Err(Error::InvalidConstraints(format!("at most {MAX_ITEMS} items are supported")));
    }
    for (i, a) in items.iter().enumerate() {
        if items[..i].contains(a) {
            return Err(Error::DuplicateCandidate(a.clone()));
        }
    }
    Ok(())
}

fn unit(id: String) -> Candidate {
    Candidate {
        id,
        weight: rational::one(),
    }
}

/// Encodes a ranking, negative-vote, or judgment domain.
///
/// * ranking over items `I`: one candidate `"a>b"` per ordered pair, in row
///   major order; feasible sets are asymmetric acyclic relations.
/// * negative votes: candidates `"c"` for every item, then `"~c"`; feasible
///   sets never hold both, and hold at most `k` of the first and `|I| - k` of
///   the second kind.
/// * judgment: candidates `"x=T"`, `"x=F"` per variable; feasible sets are
///   consistent with some satisfying assignment of the clauses.
pub fn encode_domain(spec: &ConstraintSpec) -> Result<Encoding> {
    match spec {
        ConstraintSpec::Ranking { items } => {
            check_items(items)?;
            let mut candidates = Vec::new();
            let mut pairs = Vec::new();
            let mut aux = Vec::new();
            for (a, above) in items.iter().enumerate() {
                for (b, below) in items.iter().enumerate() {
                    if a != b {
                        candidates.push(unit(format!("{above}>{below}")));
                        pairs.push((a, b));
                        aux.push(AuxMeaning::Above {
                            above: above.clone(),
                            below: below.clone(),
                        });
                    }
                }
            }
            let system = FeasibilitySystem::from_family(
                candidates.len(),
                Family::Ranking {
                    items: items.len(),
                    pairs,
                },
            );
            Ok(Encoding { candidates, system, aux })
        }
        ConstraintSpec::NegativeVotes { items, k } => {
            check_items(items)?;
            if *k > items.len() {
                return Err(Error::InvalidConstraints(format!(
                    "k = {k} exceeds the {} items",
                    items.len()
                )));
            }
            let mut candidates = Vec::new();
            let mut literal = Vec::new();
            let mut aux = Vec::new();
            for positive in [true, false] {
                for (i, item) in items.iter().enumerate() {
                    if positive {
                        candidates.push(unit(item.clone()));
                        aux.push(AuxMeaning::Elect { item: item.clone() });
                    } else {
                        candidates.push(unit(format!("~{item}")));
                        aux.push(AuxMeaning::Reject { item: item.clone() });
                    }
                    literal.push((i, positive));
                }
            }
            let system = FeasibilitySystem::from_family(
                candidates.len(),
                Family::NegativeVotes {
                    items: items.len(),
                    k: *k,
                    literal,
                },
            );
            Ok(Encoding { candidates, system, aux })
        }
        ConstraintSpec::Judgment { variables, clauses } => {
            check_items(variables)?;
            let parsed: Vec<Vec<Literal>> = clauses
                .iter()
                .map(|clause| clause.iter().map(|lit| parse_literal(lit, variables)).collect())
                .collect::<Result<_>>()?;
            let v = variables.len();
            let models: Vec<u64> = (0..1u64 << v)
                .filter(|&m| {
                    parsed
                        .iter()
                        .all(|clause| clause.iter().any(|l| (m >> l.var & 1 == 1) == l.value))
                })
                .collect();
            if models.is_empty() {
                return Err(Error::UnsatisfiableClauses);
            }
            let mut candidates = Vec::new();
            let mut literal = Vec::new();
            let mut aux = Vec::new();
            for (i, name) in variables.iter().enumerate() {
                for value in [true, false] {
                    let tag = if value { "T" } else { "F" };
                    candidates.push(unit(format!("{name}={tag}")));
                    literal.push((i, value));
                    aux.push(AuxMeaning::Assign {
                        variable: name.clone(),
                        value,
                    });
                }
            }
            let system = FeasibilitySystem::from_family(
                candidates.len(),
                Family::Judgment {
                    variables: v,
                    clauses: parsed,
                    models,
                    literal,
                },
            );
            Ok(Encoding { candidates, system, aux })
        }
        _ => Err(Error::InvalidConstraints(
            "only ranking, negative-votes and judgment domains are encoded".into(),
        )),
    }
}

/// Parses `"x"`, `"-x"`, `"!x"` or `"~x"`.
fn parse_literal(text: &str, variables: &[String]) -> Result<Literal> {
    let t = text.trim();
    let (name, value) = match t.strip_prefix(['-', '!', '~']) {
        Some(rest) => (rest.trim(), false),
        None => (t, true),
    };
    let var = variables
        .iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::InvalidConstraints(format!("unknown variable {name:?} in clause")))?;
    Ok(Literal { var, value })
}

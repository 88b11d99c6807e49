//! JSON file formats. Rationals are strings in lowest terms (`"3"`, `"15/2"`).

use std::collections::BTreeMap;

use propsel::model::BallotSpec;
use propsel::priceability::PriceSystem;
use propsel::rational::{self, one, zero, Rational};
use propsel::{CandSet, Candidate, ConstraintSpec, Election, MatroidWitness, UtilityMode, VoterSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateEntry {
    pub id: String,
    /// Omitted for weight one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub set: Vec<String>,
    pub value: String,
}

/// Exactly one of `approves`, `utilities` and `table` is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approves: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utilities: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureInfo {
    pub id: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PriceTable {
    pub prices: BTreeMap<String, String>,
    /// Voter id to candidate id to amount; zero payments are omitted.
    pub payments: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessEntry {
    pub x: Vec<String>,
    pub y: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prices: Option<PriceTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionFile {
    pub schema: u32,
    pub candidates: Vec<CandidateEntry>,
    pub voters: Vec<VoterEntry>,
    pub constraints: ConstraintSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utility_mode: Option<UtilityMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<FixtureInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

/// A standalone price system, optionally with the outcome it prices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Vec<String>>,
    pub prices: BTreeMap<String, String>,
    pub payments: BTreeMap<String, BTreeMap<String, String>>,
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, CliError> {
    rational::parse(s).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

fn check_schema(schema: u32) -> Result<(), CliError> {
    if schema != SCHEMA {
        return Err(CliError::Parse(format!("unsupported schema {schema}, expected {SCHEMA}")));
    }
    Ok(())
}

/// Parses JSON, reporting the location of syntax and shape errors.
pub fn from_json<T: serde::de::DeserializeOwned>(text: &str, source: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{source}: {e}")))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

impl ElectionFile {
    pub fn from_election(e: &Election) -> Self {
        let candidates = e
            .candidates()
            .iter()
            .map(|c| CandidateEntry {
                id: c.id.clone(),
                weight: (c.weight != one()).then(|| rational::format(&c.weight)),
            })
            .collect();
        let voters = e
            .voter_specs()
            .into_iter()
            .map(|v| {
                let mut entry = VoterEntry {
                    id: v.id,
                    approves: None,
                    utilities: None,
                    table: None,
                };
                match v.ballot {
                    BallotSpec::Approves(a) => entry.approves = Some(a),
                    BallotSpec::Additive(per) => {
                        entry.utilities = Some(per.iter().map(|(c, u)| (c.clone(), rational::format(u))).collect())
                    }
                    BallotSpec::Table(rows) => {
                        entry.table = Some(
                            rows.iter()
                                .map(|(set, u)| TableEntry {
                                    set: set.clone(),
                                    value: rational::format(u),
                                })
                                .collect(),
                        )
                    }
                }
                entry
            })
            .collect();
        ElectionFile {
            schema: SCHEMA,
            candidates,
            voters,
            constraints: e.constraints().clone(),
            utility_mode: (e.mode() != UtilityMode::Approval).then_some(e.mode()),
            fixture: None,
            reference: None,
        }
    }

    pub fn to_election(&self) -> Result<Election, CliError> {
        check_schema(self.schema)?;
        let mut candidates = Vec::with_capacity(self.candidates.len());
        for c in &self.candidates {
            let weight = match &c.weight {
                Some(w) => parse_rational(w, &format!("weight of {}", c.id))?,
                None => one(),
            };
            candidates.push(Candidate::weighted(c.id.clone(), weight));
        }
        let mut voters = Vec::with_capacity(self.voters.len());
        for v in &self.voters {
            let ballot = match (&v.approves, &v.utilities, &v.table) {
                (Some(a), None, None) => BallotSpec::Approves(a.clone()),
                (None, Some(u), None) => {
                    let mut per = Vec::with_capacity(u.len());
                    for (c, val) in u {
                        per.push((c.clone(), parse_rational(val, &format!("utility of {} for {c}", v.id))?));
                    }
                    BallotSpec::Additive(per)
                }
                (None, None, Some(rows)) => {
                    let mut out = Vec::with_capacity(rows.len());
                    for r in rows {
                        out.push((r.set.clone(), parse_rational(&r.value, &format!("table of {}", v.id))?));
                    }
                    BallotSpec::Table(out)
                }
                _ => {
                    return Err(CliError::Parse(format!(
                        "voter {:?} needs exactly one of approves, utilities, table",
                        v.id
                    )))
                }
            };
            voters.push(VoterSpec {
                id: v.id.clone(),
                ballot,
            });
        }
        let e = Election::new(candidates, voters, self.constraints.clone())?;
        if let Some(mode) = self.utility_mode {
            if mode != e.mode() {
                return Err(CliError::Parse(format!(
                    "utility_mode {mode:?} does not match the ballots ({:?})",
                    e.mode()
                )));
            }
        }
        Ok(e)
    }
}

pub fn price_table(e: &Election, ps: &PriceSystem) -> PriceTable {
    let prices = (0..e.m())
        .map(|c| (e.candidates()[c].id.clone(), rational::format(&ps.prices[c])))
        .collect();
    let payments = (0..e.n())
        .map(|i| {
            let row = (0..e.m())
                .filter(|&c| ps.payments[i][c] != zero())
                .map(|c| (e.candidates()[c].id.clone(), rational::format(&ps.payments[i][c])))
                .collect();
            (e.voters()[i].id.clone(), row)
        })
        .collect();
    PriceTable { prices, payments }
}

/// Rebuilds a price system. Candidates without a listed price fail; voters
/// and candidates without a listed payment pay zero.
pub fn price_system(e: &Election, table: &PriceTable) -> Result<PriceSystem, CliError> {
    let mut prices = vec![zero(); e.m()];
    let mut listed = CandSet::EMPTY;
    for (id, p) in &table.prices {
        let c = e.candidate_index(id)?;
        prices[c] = parse_rational(p, &format!("price of {id}"))?;
        listed.insert(c);
    }
    if listed != e.all_candidates() {
        let missing = e.ids_of(&(e.all_candidates() - listed));
        return Err(CliError::Parse(format!("missing prices for {missing:?}")));
    }
    let mut payments = vec![vec![zero(); e.m()]; e.n()];
    for (voter, row) in &table.payments {
        let i = e.voter_index(voter)?;
        for (id, p) in row {
            let c = e.candidate_index(id)?;
            payments[i][c] = parse_rational(p, &format!("payment of {voter} for {id}"))?;
        }
    }
    Ok(PriceSystem { prices, payments })
}

pub fn witness_entry(e: &Election, w: &MatroidWitness) -> WitnessEntry {
    WitnessEntry {
        x: e.ids_of(&w.x),
        y: e.ids_of(&w.y),
    }
}

pub fn witness(e: &Election, w: &WitnessEntry) -> Result<MatroidWitness, CliError> {
    Ok(MatroidWitness {
        x: e.set_of(&w.x)?,
        y: e.set_of(&w.y)?,
    })
}

impl PriceFile {
    pub fn table(&self) -> Result<PriceTable, CliError> {
        check_schema(self.schema)?;
        Ok(PriceTable {
            prices: self.prices.clone(),
            payments: self.payments.clone(),
        })
    }
}

/// Parses a comma-separated id list; the empty string is the empty set.
pub fn parse_set(e: &Election, list: &str) -> Result<CandSet, CliError> {
    let ids: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(e.set_of(&ids)?)
}

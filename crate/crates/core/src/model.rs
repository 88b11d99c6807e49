//! Elections: candidates, voters and their utilities, and a feasibility system.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::constraints::{encode_domain, ConstraintSpec, FeasibilitySystem};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::set::{CandSet, MAX_CANDIDATES};

/// Explicit utility tables are limited to this many candidates.
pub const MAX_TABLE_CANDIDATES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: String,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

impl Candidate {
    pub fn new(id: impl Into<String>) -> Self {
        Candidate {
            id: id.into(),
            weight: rational::one(),
        }
    }

    pub fn weighted(id: impl Into<String>, weight: Rational) -> Self {
        Candidate { id: id.into(), weight }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UtilityMode {
    #[default]
    Approval,
    Additive,
    Table,
}

/// A voter's ballot as given by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BallotSpec {
    Approves(Vec<String>),
    /// Per-candidate values; unlisted candidates are worth zero.
    Additive(Vec<(String, Rational)>),
    /// One value per subset; every subset must be listed.
    Table(Vec<(Vec<String>, Rational)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterSpec {
    pub id: String,
    pub ballot: BallotSpec,
}

impl VoterSpec {
    pub fn approving<S: Into<String>>(id: impl Into<String>, approves: impl IntoIterator<Item = S>) -> Self {
        VoterSpec {
            id: id.into(),
            ballot: BallotSpec::Approves(approves.into_iter().map(Into::into).collect()),
        }
    }
}

/// A validated utility function over candidate indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Utility {
    Approval,
    Additive(Vec<Rational>),
    /// Indexed by the subset bitmask.
    Table(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Voter {
    pub id: String,
    /// The approval ballot. For additive and table voters, the candidates
    /// with positive singleton utility.
    pub approvals: CandSet,
    pub utility: Utility,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Election {
    candidates: Vec<Candidate>,
    voters: Vec<Voter>,
    mode: UtilityMode,
    constraints: ConstraintSpec,
    system: FeasibilitySystem,
}

impl Election {
    /// Validates and builds an election.
    ///
    /// When `constraints` is a domain encoding and `candidates` is empty, the
    /// candidates are the encoder's auxiliary candidates.
    pub fn new(candidates: Vec<Candidate>, voters: Vec<VoterSpec>, constraints: ConstraintSpec) -> Result<Self> {
        let candidates = if candidates.is_empty() && constraints.is_encoding() {
            encode_domain(&constraints)?.candidates
        } else {
            candidates
        };
        let m = candidates.len();
        if m == 0 || voters.is_empty() {
            return Err(Error::EmptyElection);
        }
        if m > MAX_CANDIDATES {
            return Err(Error::TooManyCandidates {
                got: m,
                limit: MAX_CANDIDATES,
            });
        }
        for (i, c) in candidates.iter().enumerate() {
            if candidates[..i].iter().any(|d| d.id == c.id) {
                return Err(Error::DuplicateCandidate(c.id.clone()));
            }
            if c.weight <= rational::zero() {
                return Err(Error::NonPositiveWeight(c.id.clone()));
            }
        }
        let lookup = |id: &str| -> Result<usize> {
            candidates
                .iter()
                .position(|c| c.id == id)
                .ok_or_else(|| Error::UnknownCandidate(id.to_string()))
        };

        let mut mode = None;
        let mut built = Vec::with_capacity(voters.len());
        for (j, v) in voters.iter().enumerate() {
            if voters[..j].iter().any(|w| w.id == v.id) {
                return Err(Error::DuplicateVoter(v.id.clone()));
            }
            let this_mode = match v.ballot {
                BallotSpec::Approves(_) => UtilityMode::Approval,
                BallotSpec::Additive(_) => UtilityMode::Additive,
                BallotSpec::Table(_) => UtilityMode::Table,
            };
            match mode {
                None => mode = Some(this_mode),
                Some(md) if md != this_mode => {
                    return Err(Error::InvalidUtilities("voters mix utility modes".into()));
                }
                _ => {}
            }
            let voter = match &v.ballot {
                BallotSpec::Approves(ids) => {
                    let mut approvals = CandSet::EMPTY;
                    for id in ids {
                        approvals.insert(lookup(id)?);
                    }
                    Voter {
                        id: v.id.clone(),
                        approvals,
                        utility: Utility::Approval,
                    }
                }
                BallotSpec::Additive(values) => {
                    let mut per = vec![rational::zero(); m];
                    let mut seen = CandSet::EMPTY;
                    for (id, value) in values {
                        let c = lookup(id)?;
                        if seen.contains(c) {
                            return Err(Error::InvalidUtilities(format!(
                                "voter {:?} lists {id:?} twice",
                                v.id
                            )));
                        }
                        if *value < rational::zero() {
                            return Err(Error::NonMonotone { voter: v.id.clone() });
                        }
                        seen.insert(c);
                        per[c] = value.clone();
                    }
                    let approvals = (0..m).filter(|&c| per[c] > rational::zero()).collect();
                    Voter {
                        id: v.id.clone(),
                        approvals,
                        utility: Utility::Additive(per),
                    }
                }
                BallotSpec::Table(rows) => {
                    if m > MAX_TABLE_CANDIDATES {
                        return Err(Error::InvalidUtilities(format!(
                            "utility tables need at most {MAX_TABLE_CANDIDATES} candidates"
                        )));
                    }
                    let mut table: Vec<Option<Rational>> = vec![None; 1 << m];
                    for (ids, value) in rows {
                        let mut mask = 0usize;
                        for id in ids {
                            mask |= 1 << lookup(id)?;
                        }
                        if table[mask].replace(value.clone()).is_some() {
                            return Err(Error::InvalidUtilities(format!(
                                "voter {:?} lists a subset twice",
                                v.id
                            )));
                        }
                    }
                    let table: Vec<Rational> = table
                        .into_iter()
                        .map(|x| x.ok_or_else(|| Error::InvalidUtilities(format!("voter {:?} misses a subset", v.id))))
                        .collect::<Result<_>>()?;
                    if table[0] < rational::zero() {
                        return Err(Error::NonMonotone { voter: v.id.clone() });
                    }
                    for mask in 0..table.len() {
                        for c in 0..m {
                            if mask & 1 << c == 0 && table[mask | 1 << c] < table[mask] {
                                return Err(Error::NonMonotone { voter: v.id.clone() });
                            }
                        }
                    }
                    let approvals = (0..m).filter(|&c| table[1 << c] > table[0]).collect();
                    Voter {
                        id: v.id.clone(),
                        approvals,
                        utility: Utility::Table(table),
                    }
                }
            };
            built.push(voter);
        }
        let system = FeasibilitySystem::build(&constraints, &candidates)?;
        Ok(Election {
            candidates,
            voters: built,
            mode: mode.unwrap_or_default(),
            constraints,
            system,
        })
    }

    /// Approval election with index-based ballots; voters are named `v1, v2, ...`.
    pub fn from_approvals(candidates: Vec<Candidate>, ballots: &[CandSet], constraints: ConstraintSpec) -> Result<Self> {
        let voters = ballots
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let ids: Vec<String> = b
                    .iter()
                    .map(|c| {
                        candidates
                            .get(c)
                            .map(|x| x.id.clone())
                            .ok_or_else(|| Error::UnknownCandidate(format!("#{c}")))
                    })
                    .collect::<Result<_>>()?;
                Ok(VoterSpec::approving(format!("v{}", i + 1), ids))
            })
            .collect::<Result<Vec<_>>>()?;
        Election::new(candidates, voters, constraints)
    }

    pub fn n(&self) -> usize {
        self.voters.len()
    }

    pub fn m(&self) -> usize {
        self.candidates.len()
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn voters(&self) -> &[Voter] {
        &self.voters
    }

    pub fn mode(&self) -> UtilityMode {
        self.mode
    }

    pub fn constraints(&self) -> &ConstraintSpec {
        &self.constraints
    }

    pub fn system(&self) -> &FeasibilitySystem {
        &self.system
    }

    pub fn all_candidates(&self) -> CandSet {
        CandSet::full(self.m())
    }

    pub fn all_voters(&self) -> Vec<usize> {
        (0..self.n()).collect()
    }

    pub fn is_feasible(&self, w: &CandSet) -> bool {
        self.system.is_feasible(w)
    }

    pub fn candidate_index(&self, id: &str) -> Result<usize> {
        self.candidates
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::UnknownCandidate(id.to_string()))
    }

    pub fn voter_index(&self, id: &str) -> Result<usize> {
        self.voters
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVoter(id.to_string()))
    }

    pub fn set_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<CandSet> {
        ids.iter().map(|id| self.candidate_index(id.as_ref())).collect()
    }

    pub fn ids_of(&self, set: &CandSet) -> Vec<String> {
        set.iter().map(|c| self.candidates[c].id.clone()).collect()
    }

    pub fn voter_ids(&self, voters: &[usize]) -> Vec<String> {
        voters.iter().map(|&i| self.voters[i].id.clone()).collect()
    }

    pub fn approvals(&self, i: usize) -> &CandSet {
        &self.voters[i].approvals
    }

    /// `|A_i ∩ W|`.
    pub fn approval_count(&self, i: usize, w: &CandSet) -> usize {
        self.voters[i].approvals.intersection_len(w)
    }

    /// `u_i(W)`.
    pub fn utility(&self, i: usize, w: &CandSet) -> Rational {
        match &self.voters[i].utility {
            Utility::Approval => rational::from_usize(self.approval_count(i, w)),
            Utility::Additive(values) => w.iter().fold(rational::zero(), |acc, c| acc + &values[c]),
            Utility::Table(table) => {
                let mask = w.as_mask().expect("table utilities cover at most 16 candidates");
                table[mask as usize].clone()
            }
        }
    }

    /// Voters approving `c`.
    pub fn supporters(&self, c: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.voters[i].approvals.contains(c)).collect()
    }

    pub fn supporters_of(&self, id: &str) -> Result<Vec<usize>> {
        Ok(self.supporters(self.candidate_index(id)?))
    }

    /// `∩_{i∈S} A_i`; the full universe for an empty group.
    pub fn common_approvals(&self, group: &[usize]) -> CandSet {
        group
            .iter()
            .fold(self.all_candidates(), |acc, &i| acc.intersection(&self.voters[i].approvals))
    }

    /// `∪_{i∈S} A_i`.
    pub fn union_approvals(&self, group: &[usize]) -> CandSet {
        group
            .iter()
            .fold(CandSet::EMPTY, |acc, &i| acc.union(&self.voters[i].approvals))
    }

    pub fn weight(&self, c: usize) -> &Rational {
        &self.candidates[c].weight
    }

    pub fn weight_of(&self, set: &CandSet) -> Rational {
        set.iter().fold(rational::zero(), |acc, c| acc + &self.candidates[c].weight)
    }

    pub fn unit_weights(&self) -> bool {
        self.candidates.iter().all(|c| c.weight == rational::one())
    }

    /// Voters partitioned into classes with identical utility functions,
    /// each class listed in increasing voter order, classes ordered by their
    /// first voter.
    pub fn voter_types(&self) -> Vec<Vec<usize>> {
        let mut types: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.n() {
            let v = &self.voters[i];
            match types.iter_mut().find(|t| {
                let r = &self.voters[t[0]];
                r.approvals == v.approvals && r.utility == v.utility
            }) {
                Some(t) => t.push(i),
                None => types.push(vec![i]),
            }
        }
        types
    }

    /// Sorted distinct values of `u_i(X)` over all subsets `X`.
    pub fn achievable_values_of(&self, i: usize) -> Vec<Rational> {
        let v = &self.voters[i];
        match &v.utility {
            Utility::Approval => (0..=v.approvals.len()).map(rational::from_usize).collect(),
            Utility::Additive(per) => {
                let mut sums = BTreeSet::from([rational::zero()]);
                for c in v.approvals.iter() {
                    let shifted: Vec<Rational> = sums.iter().map(|s| s + &per[c]).collect();
                    sums.extend(shifted);
                }
                sums.into_iter().collect()
            }
            Utility::Table(table) => table.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect(),
        }
    }

    /// Sorted distinct values of `u_i(X)` over all voters and subsets.
    pub fn achievable_values(&self) -> Vec<Rational> {
        let mut values = BTreeSet::new();
        for t in self.voter_types() {
            values.extend(self.achievable_values_of(t[0]));
        }
        values.into_iter().collect()
    }

    /// Whether every utility function is the approval count.
    pub fn is_approval(&self) -> bool {
        self.mode == UtilityMode::Approval
    }

    /// Copy of the election restricted to the given voters, in order.
    pub fn restrict_voters(&self, keep: &[usize]) -> Election {
        Election {
            candidates: self.candidates.clone(),
            voters: keep.iter().map(|&i| self.voters[i].clone()).collect(),
            mode: self.mode,
            constraints: self.constraints.clone(),
            system: self.system.clone(),
        }
    }

    /// The id-based voter specs this election was built from.
    pub fn voter_specs(&self) -> Vec<VoterSpec> {
        self.voters
            .iter()
            .map(|v| {
                let ballot = match &v.utility {
                    Utility::Approval => BallotSpec::Approves(self.ids_of(&v.approvals)),
                    Utility::Additive(per) => BallotSpec::Additive(
                        (0..self.m())
                            .filter(|&c| per[c] > rational::zero())
                            .map(|c| (self.candidates[c].id.clone(), per[c].clone()))
                            .collect(),
                    ),
                    Utility::Table(table) => BallotSpec::Table(
                        (0..table.len())
                            .map(|mask| {
                                let set = CandSet::from_mask(mask as u64);
                                (self.ids_of(&set), table[mask].clone())
                            })
                            .collect(),
                    ),
                };
                VoterSpec {
                    id: v.id.clone(),
                    ballot,
                }
            })
            .collect()
    }
}

//! Feasibility systems.
//!
//! A [`FeasibilitySystem`] is a downward-closed family of candidate subsets
//! given by a membership oracle. Families whose natural statement uses
//! equalities ("exactly `k`", "one per issue", lower quotas) are stored in
//! normalized form: a set is feasible iff it extends to a set meeting the
//! equality form.

mod encode;
mod enumerate;
mod symmetry;

pub use encode::{encode_domain, AuxMeaning, Encoding, Literal};
pub use enumerate::{Enumeration, DEFAULT_CAP};
pub use symmetry::CountSpace;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Candidate;
use crate::rational::{self, Rational};
use crate::set::{CandSet, MAX_CANDIDATES};

/// Universes up to this size get a precomputed membership table.
const TABLE_LIMIT: usize = 16;

/// Id-based description of a feasibility system, as found in election files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConstraintSpec {
    Committee {
        k: usize,
    },
    PublicDecisions {
        issues: Vec<[String; 2]>,
    },
    DisjointAttributes {
        k: usize,
        groups: Vec<AttributeGroupSpec>,
    },
    Budget {
        #[serde(default, with = "rational::serde_str_opt", skip_serializing_if = "Option::is_none")]
        limit: Option<Rational>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        groups: Vec<BudgetGroupSpec>,
    },
    Explicit {
        sets: Vec<Vec<String>>,
    },
    Ranking {
        items: Vec<String>,
    },
    NegativeVotes {
        items: Vec<String>,
        k: usize,
    },
    Judgment {
        variables: Vec<String>,
        clauses: Vec<Vec<String>>,
    },
}

impl ConstraintSpec {
    pub fn is_encoding(&self) -> bool {
        matches!(
            self,
            ConstraintSpec::Ranking { .. } | ConstraintSpec::NegativeVotes { .. } | ConstraintSpec::Judgment { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeGroupSpec {
    pub members: Vec<String>,
    #[serde(default)]
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetGroupSpec {
    pub members: Vec<String>,
    #[serde(with = "rational::serde_str")]
    pub cap: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeGroup {
    pub members: CandSet,
    pub lower: usize,
    pub upper: usize,
}

impl AttributeGroup {
    /// Upper quota clipped to the group size.
    pub fn capacity(&self) -> usize {
        self.upper.min(self.members.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetGroup {
    pub members: CandSet,
    pub cap: Rational,
}

/// The structural family of a system, with kind-specific parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Committee {
        k: usize,
    },
    PublicDecisions {
        issues: Vec<[usize; 2]>,
    },
    DisjointAttributes {
        k: usize,
        groups: Vec<AttributeGroup>,
    },
    Budget {
        weights: Vec<Rational>,
        limit: Option<Rational>,
        groups: Vec<BudgetGroup>,
    },
    /// Downward closure of the listed sets.
    Explicit {
        sets: Vec<CandSet>,
    },
    /// Candidate `c` stands for "item `pairs[c].0` ranked above item `pairs[c].1`".
    Ranking {
        items: usize,
        pairs: Vec<(usize, usize)>,
    },
    /// Candidate `c` stands for item `literal[c].0`, elected when `literal[c].1` is true.
    NegativeVotes {
        items: usize,
        k: usize,
        literal: Vec<(usize, bool)>,
    },
    /// Candidate `c` sets variable `literal[c].0` to `literal[c].1`.
    Judgment {
        variables: usize,
        clauses: Vec<Vec<Literal>>,
        models: Vec<u64>,
        literal: Vec<(usize, bool)>,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Committee { .. } => "committee",
            Family::PublicDecisions { .. } => "public-decisions",
            Family::DisjointAttributes { .. } => "disjoint-attributes",
            Family::Budget { .. } => "budget",
            Family::Explicit { .. } => "explicit",
            Family::Ranking { .. } => "ranking",
            Family::NegativeVotes { .. } => "negative-votes",
            Family::Judgment { .. } => "judgment",
        }
    }
}

/// A downward-closed feasibility oracle over candidates `0..universe`.
#[derive(Debug)]
pub struct FeasibilitySystem {
    universe: usize,
    family: Family,
    table: OnceLock<Vec<bool>>,
}

impl Clone for FeasibilitySystem {
    fn clone(&self) -> Self {
        FeasibilitySystem::from_family(self.universe, self.family.clone())
    }
}

impl PartialEq for FeasibilitySystem {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.family == other.family
    }
}

/// Result of [`FeasibilitySystem::check_exchange_property`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExchangeCheck {
    IsMatroid,
    Witness(MatroidWitness),
}

/// Two feasible sets with `|x| < |y|` such that no element of `y \ x`
/// extends `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidWitness {
    pub x: CandSet,
    pub y: CandSet,
}

impl MatroidWitness {
    pub fn validate(&self, system: &FeasibilitySystem) -> Result<()> {
        if !system.is_feasible(&self.x) || !system.is_feasible(&self.y) {
            return Err(Error::InvalidWitness("witness sets must be feasible".into()));
        }
        if self.x.len() >= self.y.len() {
            return Err(Error::InvalidWitness("need |X| < |Y|".into()));
        }
        if let Some(c) = (self.y - self.x).iter().find(|&c| system.is_feasible(&self.x.with(c))) {
            return Err(Error::InvalidWitness(format!("candidate {c} of Y \\ X extends X")));
        }
        Ok(())
    }
}

impl FeasibilitySystem {
    pub fn from_family(universe: usize, family: Family) -> Self {
        FeasibilitySystem {
            universe,
            family,
            table: OnceLock::new(),
        }
    }

    /// Builds a system over `candidates` from an id-based spec.
    pub fn build(spec: &ConstraintSpec, candidates: &[Candidate]) -> Result<Self> {
        let m = candidates.len();
        if m > MAX_CANDIDATES {
            return Err(Error::TooManyCandidates {
                got: m,
                limit: MAX_CANDIDATES,
            });
        }
        let lookup = |id: &str| -> Result<usize> {
            candidates
                .iter()
                .position(|c| c.id == id)
                .ok_or_else(|| Error::UnknownCandidate(id.to_string()))
        };
        let family = match spec {
            ConstraintSpec::Committee { k } => {
                if *k == 0 {
                    return Err(Error::NonPositiveK);
                }
                Family::Committee { k: *k }
            }
            ConstraintSpec::PublicDecisions { issues } => {
                let mut seen = CandSet::EMPTY;
                let mut pairs = Vec::with_capacity(issues.len());
                for [yes, no] in issues {
                    let (a, b) = (lookup(yes)?, lookup(no)?);
                    for (c, id) in [(a, yes), (b, no)] {
                        if seen.contains(c) {
                            return Err(Error::OverlappingGroups(id.clone()));
                        }
                        seen.insert(c);
                    }
                    pairs.push([a, b]);
                }
                if let Some(c) = (0..m).find(|&c| !seen.contains(c)) {
                    return Err(Error::UncoveredCandidate(candidates[c].id.clone()));
                }
                Family::PublicDecisions { issues: pairs }
            }
            ConstraintSpec::DisjointAttributes { k, groups } => {
                if *k == 0 {
                    return Err(Error::NonPositiveK);
                }
                let mut seen = CandSet::EMPTY;
                let mut built = Vec::with_capacity(groups.len());
                for g in groups {
                    let mut members = CandSet::EMPTY;
                    for id in &g.members {
                        let c = lookup(id)?;
                        if seen.contains(c) {
                            return Err(Error::OverlappingGroups(id.clone()));
                        }
                        seen.insert(c);
                        members.insert(c);
                    }
                    if g.lower > g.upper {
                        return Err(Error::UnsatisfiableQuotas(format!(
                            "lower quota {} exceeds upper quota {}",
                            g.lower, g.upper
                        )));
                    }
                    built.push(AttributeGroup {
                        members,
                        lower: g.lower,
                        upper: g.upper,
                    });
                }
                if let Some(c) = (0..m).find(|&c| !seen.contains(c)) {
                    return Err(Error::UncoveredCandidate(candidates[c].id.clone()));
                }
                check_quotas(*k, &built)?;
                Family::DisjointAttributes { k: *k, groups: built }
            }
            ConstraintSpec::Budget { limit, groups } => {
                let mut seen = CandSet::EMPTY;
                let mut built = Vec::with_capacity(groups.len());
                for g in groups {
                    let mut members = CandSet::EMPTY;
                    for id in &g.members {
                        let c = lookup(id)?;
                        if seen.contains(c) {
                            return Err(Error::OverlappingGroups(id.clone()));
                        }
                        seen.insert(c);
                        members.insert(c);
                    }
                    if g.cap < rational::zero() {
                        return Err(Error::InvalidConstraints("negative budget cap".into()));
                    }
                    built.push(BudgetGroup {
                        members,
                        cap: g.cap.clone(),
                    });
                }
                if let Some(l) = limit {
                    if *l < rational::zero() {
                        return Err(Error::InvalidConstraints("negative budget limit".into()));
                    }
                }
                Family::Budget {
                    weights: candidates.iter().map(|c| c.weight.clone()).collect(),
                    limit: limit.clone(),
                    groups: built,
                }
            }
            ConstraintSpec::Explicit { sets } => {
                let mut built = Vec::with_capacity(sets.len());
                for s in sets {
                    let mut set = CandSet::EMPTY;
                    for id in s {
                        set.insert(lookup(id)?);
                    }
                    built.push(set);
                }
                Family::Explicit { sets: built }
            }
            ConstraintSpec::Ranking { .. } | ConstraintSpec::NegativeVotes { .. } | ConstraintSpec::Judgment { .. } => {
                let enc = encode_domain(spec)?;
                let expected: Vec<&str> = enc.candidates.iter().map(|c| c.id.as_str()).collect();
                let got: Vec<&str> = candidates.iter().map(|c| c.id.as_str()).collect();
                if expected != got {
                    return Err(Error::InvalidConstraints(format!(
                        "candidates must be exactly the encoder universe {expected:?}"
                    )));
                }
                return Ok(enc.system);
            }
        };
        Ok(FeasibilitySystem::from_family(m, family))
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Membership test. Sets mentioning candidates outside the universe are
    /// infeasible.
    pub fn is_feasible(&self, w: &CandSet) -> bool {
        if self.universe <= TABLE_LIMIT {
            match w.as_mask() {
                Some(mask) if mask >> self.universe == 0 => {
                    let table = self.table.get_or_init(|| self.build_table());
                    table[mask as usize]
                }
                _ => false,
            }
        } else {
            if !w.is_subset(&CandSet::full(self.universe)) {
                return false;
            }
            self.oracle(w)
        }
    }

    fn build_table(&self) -> Vec<bool> {
        (0..1u64 << self.universe)
            .map(|mask| self.oracle(&CandSet::from_mask(mask)))
            .collect()
    }

    /// Evaluates membership from the family definition.
    fn oracle(&self, w: &CandSet) -> bool {
        match &self.family {
            Family::Committee { k } => w.len() <= *k,
            Family::PublicDecisions { issues } => issues.iter().all(|[a, b]| !(w.contains(*a) && w.contains(*b))),
            Family::DisjointAttributes { k, groups } => {
                let counts: Vec<usize> = groups.iter().map(|g| w.intersection_len(&g.members)).collect();
                attribute_counts_feasible(*k, groups, &counts)
            }
            Family::Budget { weights, limit, groups } => {
                let total = |s: &CandSet| s.iter().fold(rational::zero(), |acc, c| acc + &weights[c]);
                if let Some(l) = limit {
                    if total(w) > *l {
                        return false;
                    }
                }
                groups.iter().all(|g| total(&w.intersection(&g.members)) <= g.cap)
            }
            Family::Explicit { sets } => sets.iter().any(|s| w.is_subset(s)),
            Family::Ranking { items, pairs } => ranking_acyclic(*items, pairs, w),
            Family::NegativeVotes { items, k, literal } => {
                let mut elected = 0u64;
                let mut rejected = 0u64;
                for c in w.iter() {
                    let (item, positive) = literal[c];
                    if positive {
                        elected |= 1 << item;
                    } else {
                        rejected |= 1 << item;
                    }
                }
                elected & rejected == 0
                    && elected.count_ones() as usize <= *k
                    && rejected.count_ones() as usize <= items - k
            }
            Family::Judgment { models, literal, .. } => {
                let mut t = 0u64;
                let mut f = 0u64;
                for c in w.iter() {
                    let (var, value) = literal[c];
                    if value {
                        t |= 1 << var;
                    } else {
                        f |= 1 << var;
                    }
                }
                t & f == 0 && models.iter().any(|&m| m & t == t && m & f == 0)
            }
        }
    }

    /// Whether `w ∪ {c}` is feasible, for a feasible `w`.
    pub fn can_extend(&self, w: &CandSet, c: usize) -> Result<bool> {
        if !self.is_feasible(w) {
            return Err(Error::InfeasibleOutcome);
        }
        Ok(self.is_feasible(&w.with(c)))
    }

    /// Candidates `c ∉ w` with `w ∪ {c}` feasible.
    pub fn extenders(&self, w: &CandSet) -> CandSet {
        (0..self.universe)
            .filter(|&c| !w.contains(c) && self.is_feasible(&w.with(c)))
            .collect()
    }

    pub fn is_maximal(&self, w: &CandSet) -> bool {
        self.is_feasible(w) && self.extenders(w).is_empty()
    }

    /// Extends a feasible set greedily (index order) to an inclusion-maximal one.
    pub fn complete(&self, w: &CandSet) -> CandSet {
        let mut out = *w;
        for c in 0..self.universe {
            if !out.contains(c) && self.is_feasible(&out.with(c)) {
                out.insert(c);
            }
        }
        out
    }

    /// Checks the exchange property over all feasible pairs.
    ///
    /// On failure returns a canonical witness: `|X|` minimal first, then
    /// `|Y \ X|` minimal, then the lexicographically first pair.
    pub fn check_exchange_property(&self, cap: usize) -> Result<ExchangeCheck> {
        let mut all = self.enumerate_feasible(cap)?;
        all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let mut best: Option<(usize, MatroidWitness)> = None;
        let mut i = 0;
        while i < all.len() {
            let size = all[i].len();
            let mut j = i;
            while j < all.len() && all[j].len() == size {
                let x = all[j];
                let ext = self.extenders(&x);
                for y in all.iter().filter(|y| y.len() > size) {
                    let fresh = *y - x;
                    if fresh.is_disjoint(&ext) {
                        let key = fresh.len();
                        let better = match &best {
                            None => true,
                            Some((k, w)) => key < *k || (key == *k && (x, *y) < (w.x, w.y)),
                        };
                        if better {
                            best = Some((key, MatroidWitness { x, y: *y }));
                        }
                    }
                }
                j += 1;
            }
            if let Some((_, w)) = best {
                return Ok(ExchangeCheck::Witness(w));
            }
            i = j;
        }
        Ok(ExchangeCheck::IsMatroid)
    }

    /// The single-swap exchange: for `w' ⊆ w` nonempty and `c ∉ w` with
    /// `(w \ w') ∪ {c}` feasible, the first `c' ∈ w'` such that
    /// `(w \ {c'}) ∪ {c}` is feasible. Fails with [`Error::NotAMatroid`] when
    /// no such `c'` exists, which cannot happen on a matroid.
    pub fn one_swap(&self, w: &CandSet, sub: &CandSet, c: usize) -> Result<usize> {
        if sub.is_empty() || !sub.is_subset(w) {
            return Err(Error::Precondition("W' must be a nonempty subset of W".into()));
        }
        if w.contains(c) {
            return Err(Error::Precondition("c must lie outside W".into()));
        }
        if !self.is_feasible(&(*w - *sub).with(c)) {
            return Err(Error::Precondition("(W \\ W') ∪ {c} must be feasible".into()));
        }
        sub.iter()
            .find(|&d| self.is_feasible(&w.without(d).with(c)))
            .ok_or(Error::NotAMatroid)
    }

    /// Whether some `count` candidates from `pool \ base` can be added to the
    /// feasible set `base` while staying feasible.
    pub fn can_add(&self, base: &CandSet, pool: &CandSet, count: usize) -> bool {
        if count == 0 {
            return self.is_feasible(base);
        }
        let items: Vec<usize> = (*pool - *base).iter().filter(|&c| c < self.universe).collect();
        self.add_rec(&items, 0, *base, count)
    }

    fn add_rec(&self, items: &[usize], start: usize, acc: CandSet, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        if items.len() - start < left {
            return false;
        }
        (start..items.len()).any(|i| {
            let next = acc.with(items[i]);
            self.is_feasible(&next) && self.add_rec(items, i + 1, next, left - 1)
        })
    }

    /// Whether the feasible set `base` has a feasible superset with at least
    /// `size` elements.
    pub fn extends_to_size(&self, base: &CandSet, size: usize) -> bool {
        size <= base.len() || self.can_add(base, &CandSet::full(self.universe), size - base.len())
    }

    /// Size of the largest feasible set.
    pub fn max_feasible_size(&self, cap: usize) -> Result<usize> {
        Ok(self.enumerate_maximal(cap)?.iter().map(|s| s.len()).max().unwrap_or(0))
    }

    /// Symmetry classes for count-vector enumeration; only disjoint-attribute
    /// systems admit them.
    pub fn count_space(&self, refine: &[CandSet]) -> Option<CountSpace> {
        match &self.family {
            Family::DisjointAttributes { k, groups } => Some(CountSpace::new(*k, groups, refine)),
            _ => None,
        }
    }
}

fn check_quotas(k: usize, groups: &[AttributeGroup]) -> Result<()> {
    for g in groups {
        if g.lower > g.capacity() {
            return Err(Error::UnsatisfiableQuotas(format!(
                "lower quota {} exceeds available {}",
                g.lower,
                g.capacity()
            )));
        }
    }
    let lower: usize = groups.iter().map(|g| g.lower).sum();
    let upper: usize = groups.iter().map(|g| g.capacity()).sum();
    if lower > k {
        return Err(Error::UnsatisfiableQuotas(format!("lower quotas sum to {lower} > k = {k}")));
    }
    if upper < k {
        return Err(Error::UnsatisfiableQuotas(format!("at most {upper} selectable < k = {k}")));
    }
    Ok(())
}

/// Whether per-group counts extend to a size-`k` selection meeting all quotas.
pub(crate) fn attribute_counts_feasible(k: usize, groups: &[AttributeGroup], counts: &[usize]) -> bool {
    let mut needed = 0;
    for (g, &c) in groups.iter().zip(counts) {
        if c > g.capacity() {
            return false;
        }
        needed += c.max(g.lower);
    }
    needed <= k
}

fn ranking_acyclic(items: usize, pairs: &[(usize, usize)], w: &CandSet) -> bool {
    let mut adj = vec![0u64; items];
    for c in w.iter() {
        let (a, b) = pairs[c];
        if adj[b] & (1 << a) != 0 {
            return false;
        }
        adj[a] |= 1 << b;
    }
    // transitive closure; a cycle shows up as a self-loop
    for via in 0..items {
        for a in 0..items {
            if adj[a] & (1 << via) != 0 {
                adj[a] |= adj[via];
            }
        }
    }
    (0..items).all(|a| adj[a] & (1 << a) == 0)
}

#[cfg(test)]
mod tests;

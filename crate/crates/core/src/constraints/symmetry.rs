//! Count-vector view of disjoint-attribute systems.
//!
//! Inside one attribute group, candidates that agree on membership in a
//! fixed list of "refining" sets are interchangeable for every question the
//! auditors ask. A set is then described by how many members of each class
//! it takes.

use std::ops::ControlFlow;

use super::{attribute_counts_feasible, AttributeGroup};
use crate::error::{Error, Result};
use crate::set::CandSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub members: CandSet,
    pub group: usize,
    /// Bit `r` is set when the class lies inside refining set `r`.
    pub signature: u64,
}

impl Class {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone)]
pub struct CountSpace {
    k: usize,
    groups: Vec<AttributeGroup>,
    classes: Vec<Class>,
}

impl CountSpace {
    pub(crate) fn new(k: usize, groups: &[AttributeGroup], refine: &[CandSet]) -> Self {
        assert!(refine.len() <= 64, "at most 64 refining sets");
        let mut classes: Vec<Class> = Vec::new();
        for (g, group) in groups.iter().enumerate() {
            let first = classes.len();
            for c in group.members.iter() {
                let signature = refine
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.contains(c))
                    .fold(0u64, |acc, (r, _)| acc | 1 << r);
                match classes[first..].iter_mut().find(|cl| cl.signature == signature) {
                    Some(cl) => cl.members.insert(c),
                    None => classes.push(Class {
                        members: CandSet::singleton(c),
                        group: g,
                        signature,
                    }),
                }
            }
        }
        CountSpace {
            k,
            groups: groups.to_vec(),
            classes,
        }
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Classes lying inside refining set `r`.
    pub fn inside(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.classes.len()).filter(move |&j| self.classes[j].signature >> r & 1 == 1)
    }

    pub fn feasible(&self, counts: &[usize]) -> bool {
        let mut per_group = vec![0; self.groups.len()];
        for (cl, &t) in self.classes.iter().zip(counts) {
            if t > cl.size() {
                return false;
            }
            per_group[cl.group] += t;
        }
        attribute_counts_feasible(self.k, &self.groups, &per_group)
    }

    pub fn counts_of(&self, set: &CandSet) -> Vec<usize> {
        self.classes.iter().map(|cl| cl.members.intersection_len(set)).collect()
    }

    /// Largest number of elements that can be added to the feasible count
    /// vector `counts`, drawing only from classes with `allowed[j]`.
    pub fn max_extra(&self, counts: &[usize], allowed: &[bool]) -> usize {
        let mut per_group = vec![0; self.groups.len()];
        let mut avail = vec![0; self.groups.len()];
        for (j, cl) in self.classes.iter().enumerate() {
            per_group[cl.group] += counts[j];
            if allowed[j] {
                avail[cl.group] += cl.size() - counts[j];
            }
        }
        let mut used = 0;
        let mut free = 0;
        let mut paid = 0;
        for (r, g) in self.groups.iter().enumerate() {
            let c = per_group[r];
            used += c.max(g.lower);
            let room = avail[r].min(g.capacity().saturating_sub(c));
            // additions up to the lower quota are already paid for
            let slack = g.lower.saturating_sub(c).min(room);
            free += slack;
            paid += room - slack;
        }
        free + paid.min(self.k.saturating_sub(used))
    }

    /// A concrete set with the given counts: the first members of each class.
    pub fn materialize(&self, counts: &[usize]) -> CandSet {
        let mut out = CandSet::EMPTY;
        for (cl, &t) in self.classes.iter().zip(counts) {
            for c in cl.members.iter().take(t) {
                out.insert(c);
            }
        }
        out
    }

    /// Visits feasible count vectors with total at most `max_total` in
    /// lexicographic order. `limit[j]` further bounds class `j`.
    pub fn for_each_vector(
        &self,
        limit: &[usize],
        max_total: usize,
        cap: usize,
        mut f: impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<bool> {
        let mut counts = vec![0; self.classes.len()];
        let mut visited = 0;
        self.rec(0, &mut counts, limit, max_total, cap, &mut visited, &mut f)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        j: usize,
        counts: &mut Vec<usize>,
        limit: &[usize],
        left: usize,
        cap: usize,
        visited: &mut usize,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<bool> {
        if j == self.classes.len() {
            *visited += 1;
            if *visited > cap {
                return Err(Error::EnumerationCapExceeded { cap });
            }
            return Ok(f(counts).is_break());
        }
        let top = self.classes[j].size().min(limit[j]).min(left);
        for t in 0..=top {
            counts[j] = t;
            if !self.feasible(counts) {
                break;
            }
            if self.rec(j + 1, counts, limit, left - t, cap, visited, f)? {
                counts[j] = 0;
                return Ok(true);
            }
        }
        counts[j] = 0;
        Ok(false)
    }
}

use std::ops::ControlFlow;

use super::FeasibilitySystem;
use crate::error::{Error, Result};
use crate::set::CandSet;

/// Default limit on the number of sets a single enumeration may visit.
pub const DEFAULT_CAP: usize = 1 << 20;

/// Summary of a finished enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    pub visited: usize,
    /// Whether the callback broke out early.
    pub stopped: bool,
}

impl FeasibilitySystem {
    /// Visits every feasible subset of `pool` with at most `max_size`
    /// elements in lexicographic order (depth-first preorder). Downward
    /// closure guarantees that pruning at infeasible prefixes loses nothing.
    pub fn for_each_feasible_in(
        &self,
        pool: &CandSet,
        max_size: usize,
        cap: usize,
        mut f: impl FnMut(&CandSet) -> ControlFlow<()>,
    ) -> Result<Enumeration> {
        let items: Vec<usize> = pool.iter().filter(|&c| c < self.universe()).collect();
        let mut visited = 0;
        let stopped = self.dfs(&items, 0, CandSet::EMPTY, max_size, cap, &mut visited, &mut f)?;
        Ok(Enumeration { visited, stopped })
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        items: &[usize],
        start: usize,
        prefix: CandSet,
        max_size: usize,
        cap: usize,
        visited: &mut usize,
        f: &mut dyn FnMut(&CandSet) -> ControlFlow<()>,
    ) -> Result<bool> {
        *visited += 1;
        if *visited > cap {
            return Err(Error::EnumerationCapExceeded { cap });
        }
        if f(&prefix).is_break() {
            return Ok(true);
        }
        if prefix.len() >= max_size {
            return Ok(false);
        }
        for i in start..items.len() {
            let next = prefix.with(items[i]);
            if self.is_feasible(&next) && self.dfs(items, i + 1, next, max_size, cap, visited, f)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn for_each_feasible(&self, cap: usize, f: impl FnMut(&CandSet) -> ControlFlow<()>) -> Result<Enumeration> {
        self.for_each_feasible_in(&CandSet::full(self.universe()), usize::MAX, cap, f)
    }

    /// All feasible sets in lexicographic order.
    pub fn enumerate_feasible(&self, cap: usize) -> Result<Vec<CandSet>> {
        let mut out = Vec::new();
        self.for_each_feasible(cap, |s| {
            out.push(*s);
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// All inclusion-maximal feasible sets in lexicographic order.
    pub fn enumerate_maximal(&self, cap: usize) -> Result<Vec<CandSet>> {
        let mut out = Vec::new();
        self.for_each_feasible(cap, |s| {
            if self.extenders(s).is_empty() {
                out.push(*s);
            }
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }
}

//! A small exact simplex solver.
//!
//! Dense two-phase tableau over [`Rational`] with Bland's rule (lowest index
//! enters, ties in the ratio test go to the lowest basic index), so it always
//! terminates and gives the same answer on every run. All variables are
//! nonnegative.

use num_traits::{Signed, Zero};

use crate::rational::{one, zero, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `Σ coeffs · x  rel  rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, Rational)>, rel: Relation, rhs: Rational) -> Self {
        Row { coeffs, rel, rhs }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearProgram {
    pub vars: usize,
    pub rows: Vec<Row>,
    /// Maximized when present.
    pub objective: Option<Vec<(usize, Rational)>>,
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        LinearProgram {
            vars,
            ..Default::default()
        }
    }

    pub fn add_var(&mut self) -> usize {
        self.vars += 1;
        self.vars - 1
    }

    pub fn push(&mut self, coeffs: Vec<(usize, Rational)>, rel: Relation, rhs: Rational) {
        self.rows.push(Row::new(coeffs, rel, rhs));
    }

    /// Whether `x` satisfies every row.
    pub fn satisfies(&self, x: &[Rational]) -> bool {
        x.len() == self.vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|r| {
                let lhs = r.coeffs.iter().fold(zero(), |acc, (j, a)| acc + a * &x[*j]);
                match r.rel {
                    Relation::Le => lhs <= r.rhs,
                    Relation::Ge => lhs >= r.rhs,
                    Relation::Eq => lhs == r.rhs,
                }
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// An optimal vertex (any feasible vertex when there is no objective).
    Optimal { point: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.a[r][j].clone();
        for v in self.a[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        self.b[r] /= &p;
        let (row, rhs) = (self.a[r].clone(), self.b[r].clone());
        for i in 0..self.a.len() {
            if i == r || self.a[i][j].is_zero() {
                continue;
            }
            let f = self.a[i][j].clone();
            for (k, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    self.a[i][k] -= &f * v;
                }
            }
            self.b[i] -= &f * &rhs;
        }
        self.basis[r] = j;
    }

    /// Maximizes `cost · x` over the columns marked `allowed`.
    /// Returns `false` when the objective is unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.cols).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && {
                    let z = self
                        .basis
                        .iter()
                        .enumerate()
                        .fold(zero(), |acc, (i, &bi)| acc + &cost[bi] * &self.a[i][j]);
                    cost[j] > z
                }
            });
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return false,
            }
        }
    }

    fn value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.b)
            .fold(zero(), |acc, (&j, v)| acc + &cost[j] * v)
    }
}

/// Solves `program` exactly.
pub fn solve(program: &LinearProgram) -> LpOutcome {
    let n = program.vars;
    let rows = program.rows.len();
    let slack_count = program.rows.iter().filter(|r| r.rel != Relation::Eq).count();
    let cols = n + slack_count + rows;
    let mut t = Tableau {
        a: vec![vec![zero(); cols]; rows],
        b: vec![zero(); rows],
        basis: vec![0; rows],
        cols,
    };
    let mut slack = n;
    let mut artificial = Vec::new();
    for (i, row) in program.rows.iter().enumerate() {
        let flip = row.rhs.is_negative();
        let sign = if flip { -one() } else { one() };
        for (j, v) in &row.coeffs {
            t.a[i][*j] += &sign * v;
        }
        t.b[i] = &sign * &row.rhs;
        let rel = match (row.rel, flip) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (rel, _) => rel,
        };
        match rel {
            Relation::Le => {
                t.a[i][slack] = one();
                t.basis[i] = slack;
                slack += 1;
            }
            Relation::Ge | Relation::Eq => {
                if rel == Relation::Ge {
                    t.a[i][slack] = -one();
                    slack += 1;
                }
                let col = n + slack_count + i;
                t.a[i][col] = one();
                t.basis[i] = col;
                artificial.push(col);
            }
        }
    }
    let is_artificial = |j: usize| j >= n + slack_count;

    // phase 1: drive the artificials to zero
    if !artificial.is_empty() {
        let mut cost = vec![zero(); cols];
        for &j in &artificial {
            cost[j] = -one();
        }
        let allowed = vec![true; cols];
        t.optimize(&cost, &allowed);
        if t.value(&cost).is_negative() {
            return LpOutcome::Infeasible;
        }
        // pivot remaining (zero-valued) artificials out, dropping redundant rows
        let mut i = 0;
        while i < t.a.len() {
            if is_artificial(t.basis[i]) {
                match (0..n + slack_count).find(|&j| !t.a[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.a.remove(i);
                        t.b.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![zero(); cols];
    if let Some(obj) = &program.objective {
        for (j, v) in obj {
            cost[*j] += v;
        }
    }
    let allowed: Vec<bool> = (0..cols).map(|j| !is_artificial(j)).collect();
    if !t.optimize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![zero(); n];
    for (i, &j) in t.basis.iter().enumerate() {
        if j < n {
            point[j] = t.b[i].clone();
        }
    }
    let value = point
        .iter()
        .enumerate()
        .fold(zero(), |acc, (j, v)| acc + &cost[j] * v);
    LpOutcome::Optimal { point, value }
}

/// A feasible point, or `None` when the constraints are infeasible.
pub fn lp_feasible(program: &LinearProgram) -> Option<Vec<Rational>> {
    let plain = LinearProgram {
        objective: None,
        ..program.clone()
    };
    match solve(&plain) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

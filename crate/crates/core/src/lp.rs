//! Exact two-phase simplex (dense tableau, Bland's rule).
//!
//! Small problems only: every LP in this crate has at most a few dozen rows.
//! Bland's rule makes the returned basic solution a deterministic function
//! of the input, which the region decomposition relies on.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rational::{zeros, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Rel,
    pub rhs: Q,
}

/// `maximize objective·x` subject to linear constraints. Variables are free
/// unless flagged nonnegative.
#[derive(Debug, Clone)]
pub struct Lp {
    pub nvars: usize,
    pub nonneg: Vec<bool>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Q>,
        value: Q,
    },
    Infeasible,
    /// Objective unbounded above; `ray` is a recession direction along which
    /// it increases.
    Unbounded {
        x: Vec<Q>,
        ray: Vec<Q>,
    },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl Lp {
    pub fn new(nvars: usize) -> Self {
        Lp {
            nvars,
            nonneg: vec![false; nvars],
            constraints: Vec::new(),
            objective: zeros(nvars),
        }
    }

    pub fn nonnegative(mut self) -> Self {
        self.nonneg = vec![true; self.nvars];
        self
    }

    pub fn add(&mut self, coeffs: Vec<Q>, rel: Rel, rhs: Q) {
        debug_assert_eq!(coeffs.len(), self.nvars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn maximize(&mut self, objective: Vec<Q>) {
        self.objective = objective;
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }

    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        let mut p = self.clone();
        p.objective = zeros(self.nvars);
        match p.solve() {
            LpOutcome::Optimal { x, .. } | LpOutcome::Unbounded { x, .. } => Some(x),
            LpOutcome::Infeasible => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    /// For each original variable: (positive column, optional negative column).
    var_cols: Vec<(usize, Option<usize>)>,
    ncols: usize,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &Lp) -> Self {
        let mut var_cols = Vec::with_capacity(lp.nvars);
        let mut col = 0;
        for v in 0..lp.nvars {
            if lp.nonneg[v] {
                var_cols.push((col, None));
                col += 1;
            } else {
                var_cols.push((col, Some(col + 1)));
                col += 2;
            }
        }
        let slack_start = col;
        let nslack = lp.constraints.iter().filter(|c| c.rel != Rel::Eq).count();
        let first_artificial = slack_start + nslack;
        let m = lp.constraints.len();
        let ncols = first_artificial + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = slack_start;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = zeros(ncols + 1);
            for (v, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (p, n) = var_cols[v];
                row[p] = a.clone();
                if let Some(n) = n {
                    row[n] = -a.clone();
                }
            }
            match c.rel {
                Rel::Le => {
                    row[slack] = Q::one();
                    slack += 1;
                }
                Rel::Ge => {
                    row[slack] = -Q::one();
                    slack += 1;
                }
                Rel::Eq => {}
            }
            row[ncols] = c.rhs.clone();
            if row[ncols].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[first_artificial + i] = Q::one();
            basis.push(first_artificial + i);
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            var_cols,
            ncols,
            first_artificial,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(prow.iter()) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · cols` over columns `< limit`. Returns the entering
    /// column on unboundedness.
    fn optimize(&mut self, cost: &[Q], limit: usize) -> Result<(), usize> {
        loop {
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut r = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    if !row[j].is_zero() {
                        let cb = &cost[self.basis[i]];
                        if !cb.is_zero() {
                            r -= cb * &row[j];
                        }
                    }
                }
                if r.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[j].is_positive() {
                    let ratio = &row[self.ncols] / &row[j];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, j),
                None => return Err(j),
            }
        }
    }

    fn column_values(&self) -> Vec<Q> {
        let mut vals = zeros(self.ncols);
        for (i, &b) in self.basis.iter().enumerate() {
            vals[b] = self.rows[i][self.ncols].clone();
        }
        vals
    }

    fn to_vars(&self, cols: &[Q]) -> Vec<Q> {
        self.var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &cols[p] - &cols[n],
                None => cols[p].clone(),
            })
            .collect()
    }

    fn run(mut self, lp: &Lp) -> LpOutcome {
        let fa = self.first_artificial;
        let mut phase1 = zeros(self.ncols);
        for c in phase1.iter_mut().skip(fa) {
            *c = -Q::one();
        }
        if self.optimize(&phase1, self.ncols).is_err() {
            unreachable!("phase one is bounded");
        }
        let infeasible = self
            .basis
            .iter()
            .enumerate()
            .any(|(i, &b)| b >= fa && !self.rows[i][self.ncols].is_zero());
        if infeasible {
            return LpOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= fa {
                if let Some(j) = (0..fa).find(|&j| !self.rows[i][j].is_zero()) {
                    self.pivot(i, j);
                    i += 1;
                } else {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
        let mut cost = zeros(self.ncols);
        for (v, &(p, n)) in self.var_cols.iter().enumerate() {
            cost[p] = lp.objective[v].clone();
            if let Some(n) = n {
                cost[n] = -lp.objective[v].clone();
            }
        }
        match self.optimize(&cost, fa) {
            Ok(()) => {
                let cols = self.column_values();
                let x = self.to_vars(&cols);
                let value = crate::rational::dot(&lp.objective, &x);
                LpOutcome::Optimal { x, value }
            }
            Err(j) => {
                let cols = self.column_values();
                let mut dir = zeros(self.ncols);
                dir[j] = Q::one();
                for (i, &b) in self.basis.iter().enumerate() {
                    dir[b] = -self.rows[i][j].clone();
                }
                LpOutcome::Unbounded {
                    x: self.to_vars(&cols),
                    ray: self.to_vars(&dir),
                }
            }
        }
    }
}

/// Whether `point` is a convex combination of `points` (exact LP).
pub fn in_convex_hull(points: &[Vec<Q>], point: &[Q]) -> bool {
    if points.is_empty() {
        return false;
    }
    let k = points.len();
    let mut lp = Lp::new(k).nonnegative();
    for (d, target) in point.iter().enumerate() {
        lp.add(points.iter().map(|p| p[d].clone()).collect(), Rel::Eq, target.clone());
    }
    lp.add(vec![Q::one(); k], Rel::Eq, Q::one());
    lp.feasible_point().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_ints, q, qf};

    #[test]
    fn simple_max() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0  → (8/5, 6/5), 14/5
        let mut lp = Lp::new(2).nonnegative();
        lp.add(from_ints(&[1, 2]), Rel::Le, q(4));
        lp.add(from_ints(&[3, 1]), Rel::Le, q(6));
        lp.maximize(from_ints(&[1, 1]));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, qf(14, 5));
                assert_eq!(x, vec![qf(8, 5), qf(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = Lp::new(1);
        lp.add(from_ints(&[1]), Rel::Ge, q(1));
        lp.add(from_ints(&[1]), Rel::Le, q(0));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = Lp::new(2);
        lp.add(from_ints(&[1, -1]), Rel::Eq, q(0));
        lp.maximize(from_ints(&[1, 0]));
        match lp.solve() {
            LpOutcome::Unbounded { ray, .. } => {
                assert!(ray[0] > q(0));
                assert_eq!(ray[0], ray[1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_variables_and_redundant_equalities() {
        let mut lp = Lp::new(2);
        lp.add(from_ints(&[1, 1]), Rel::Eq, q(-2));
        lp.add(from_ints(&[2, 2]), Rel::Eq, q(-4));
        lp.add(from_ints(&[1, 0]), Rel::Ge, q(-5));
        lp.maximize(from_ints(&[-1, 0]));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, q(5));
                assert_eq!(x, from_ints(&[-5, 3]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hull_membership() {
        let tri = vec![from_ints(&[0, 0]), from_ints(&[2, 0]), from_ints(&[0, 2])];
        assert!(in_convex_hull(&tri, &from_ints(&[1, 1])));
        assert!(!in_convex_hull(&tri, &[qf(3, 2), qf(3, 4)]));
    }
}

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{rank, solve_unique, Matrix};
use crate::lp::{Lp, LpOutcome, Rel};
use crate::rational::{dot, q, unit, zeros, Q};

use super::VPolytope;

/// One row `normal·v + offset ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Q>,
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: Vec<Q>, offset: Q) -> Self {
        Halfspace { normal, offset }
    }

    pub fn value(&self, v: &[Q]) -> Q {
        dot(&self.normal, v) + &self.offset
    }
}

/// Polyhedron `{v : normal_i·v + offset_i ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    pub dim: usize,
    pub rows: Vec<Halfspace>,
}

impl HPolyhedron {
    pub fn new(dim: usize) -> Self {
        HPolyhedron { dim, rows: Vec::new() }
    }

    pub fn from_rows(dim: usize, rows: Vec<Halfspace>) -> Result<Self> {
        for r in &rows {
            check_dim(dim, r.normal.len())?;
        }
        Ok(HPolyhedron { dim, rows })
    }

    pub fn push(&mut self, normal: Vec<Q>, offset: Q) {
        debug_assert_eq!(normal.len(), self.dim);
        self.rows.push(Halfspace { normal, offset });
    }

    /// Adds `normal·v + offset = 0` as two rows.
    pub fn push_eq(&mut self, normal: Vec<Q>, offset: Q) {
        let neg: Vec<Q> = normal.iter().map(|x| -x).collect();
        self.rows.push(Halfspace {
            normal,
            offset: offset.clone(),
        });
        self.rows.push(Halfspace {
            normal: neg,
            offset: -offset,
        });
    }

    /// Axis box `lo ≤ v ≤ hi`.
    pub fn cube(lo: &[Q], hi: &[Q]) -> Self {
        let d = lo.len();
        let mut h = HPolyhedron::new(d);
        for i in 0..d {
            h.push(unit(d, i), -lo[i].clone());
            h.push(unit(d, i).iter().map(|x| -x).collect(), hi[i].clone());
        }
        h
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.rows.iter().all(|r| !r.value(v).is_negative())
    }

    /// Strictly inside every row.
    pub fn strictly_contains(&self, v: &[Q]) -> bool {
        self.rows.iter().all(|r| r.value(v).is_positive())
    }

    /// Indices of rows tight at `v`.
    pub fn tight_set(&self, v: &[Q]) -> BTreeSet<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.value(v).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub(crate) fn base_lp(&self, extra: usize) -> Lp {
        let mut lp = Lp::new(self.dim + extra);
        for r in &self.rows {
            let mut c = r.normal.clone();
            c.extend(zeros(extra));
            lp.add(c, Rel::Ge, -r.offset.clone());
        }
        lp
    }

    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        self.base_lp(0).feasible_point()
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    /// Maximizes `f·v` over the polyhedron.
    pub fn maximize(&self, f: &[Q]) -> LpOutcome {
        let mut lp = self.base_lp(0);
        lp.maximize(f.to_vec());
        lp.solve()
    }

    /// Point maximizing the common slack `t ≤ 1` over all rows; returns the
    /// point and the slack. Positive slack means full-dimensional interior.
    pub fn chebyshev_like_point(&self) -> Option<(Vec<Q>, Q)> {
        let d = self.dim;
        let mut lp = Lp::new(d + 1);
        for r in &self.rows {
            let mut c = r.normal.clone();
            c.push(-Q::one());
            lp.add(c, Rel::Ge, -r.offset.clone());
        }
        lp.add(unit(d + 1, d), Rel::Le, Q::one());
        lp.maximize(unit(d + 1, d));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => Some((x[..d].to_vec(), value)),
            LpOutcome::Unbounded { .. } => None,
            LpOutcome::Infeasible => None,
        }
    }

    /// A point strictly inside every row, if the interior is nonempty.
    pub fn interior_point(&self) -> Option<Vec<Q>> {
        match self.chebyshev_like_point() {
            Some((x, t)) if t.is_positive() => Some(x),
            _ => None,
        }
    }

    pub fn has_interior(&self) -> bool {
        self.interior_point().is_some()
    }

    /// Rows that hold with equality on the whole polyhedron.
    pub fn implicit_equalities(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for (i, r) in self.rows.iter().enumerate() {
            match self.maximize(&r.normal) {
                LpOutcome::Optimal { ref value, .. } if (value + &r.offset).is_zero() => {
                    out.insert(i);
                }
                _ => {}
            }
        }
        out
    }

    /// A nonzero direction of the recession cone, if any.
    pub fn recession_ray(&self) -> Option<Vec<Q>> {
        let d = self.dim;
        for i in 0..d {
            for sign in [1i64, -1] {
                let mut lp = Lp::new(d);
                for r in &self.rows {
                    lp.add(r.normal.clone(), Rel::Ge, Q::zero());
                }
                let mut e = zeros(d);
                e[i] = q(sign);
                lp.add(e, Rel::Ge, Q::one());
                if let Some(ray) = lp.feasible_point() {
                    return Some(ray);
                }
            }
        }
        None
    }

    /// Exact extreme points by basis enumeration, sorted.
    ///
    /// Empty when infeasible; an error carrying a recession ray when
    /// unbounded.
    pub fn vertices(&self) -> Result<VPolytope> {
        if !self.is_feasible() {
            return Ok(VPolytope::empty(self.dim));
        }
        if let Some(ray) = self.recession_ray() {
            return Err(Error::Unbounded { ray });
        }
        let pts = self.basic_points();
        Ok(VPolytope::from_extreme_points(self.dim, pts.into_iter().collect()))
    }

    fn basic_points(&self) -> BTreeSet<Vec<Q>> {
        let d = self.dim;
        let mut found = BTreeSet::new();
        if d == 0 {
            found.insert(Vec::new());
            return found;
        }
        // Drop duplicate rows and rows with zero normal.
        let mut uniq: Vec<&Halfspace> = Vec::new();
        let mut seen = BTreeSet::new();
        for r in &self.rows {
            if r.normal.iter().all(Zero::is_zero) {
                continue;
            }
            if seen.insert((r.normal.clone(), r.offset.clone())) {
                uniq.push(r);
            }
        }
        let n = uniq.len();
        if n < d {
            return found;
        }
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            let a: Matrix = idx.iter().map(|&i| uniq[i].normal.clone()).collect();
            if rank(&a) == d {
                let b: Vec<Q> = idx.iter().map(|&i| -uniq[i].offset.clone()).collect();
                if let Some(v) = solve_unique(&a, &b, d) {
                    if self.contains(&v) {
                        found.insert(v);
                    }
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        found
    }
}

/// Advances `idx` to the next k-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

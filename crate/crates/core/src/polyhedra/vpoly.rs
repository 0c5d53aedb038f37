use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{inverse, mat_mul, mat_vec, nullspace, span_basis, transpose, Matrix};
use crate::lp::in_convex_hull;
use crate::rational::{add_vec, dot, normalize_direction, sub_vec, Q};

use super::hpoly::next_combination;
use super::HPolyhedron;

/// Bounded polytope as the list of its extreme points (sorted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<Q>>,
}

impl VPolytope {
    pub fn empty(dim: usize) -> Self {
        VPolytope {
            dim,
            vertices: Vec::new(),
        }
    }

    pub fn point(p: Vec<Q>) -> Self {
        VPolytope {
            dim: p.len(),
            vertices: alloc::vec![p],
        }
    }

    /// Trusts that `pts` are already extreme; only sorts and dedups.
    pub fn from_extreme_points(dim: usize, pts: Vec<Vec<Q>>) -> Self {
        let set: BTreeSet<Vec<Q>> = pts.into_iter().collect();
        VPolytope {
            dim,
            vertices: set.into_iter().collect(),
        }
    }

    /// Hull of arbitrary points, reduced to extreme points by LP.
    pub fn from_points(dim: usize, pts: Vec<Vec<Q>>) -> Result<Self> {
        for p in &pts {
            check_dim(dim, p.len())?;
        }
        let set: Vec<Vec<Q>> = pts.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut keep = Vec::new();
        for (i, p) in set.iter().enumerate() {
            let others: Vec<Vec<Q>> = set
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v.clone())
                .collect();
            if !in_convex_hull(&others, p) {
                keep.push(p.clone());
            }
        }
        Ok(VPolytope { dim, vertices: keep })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Basis of the linear space parallel to the affine span.
    pub fn span_directions(&self) -> Matrix {
        if self.vertices.len() < 2 {
            return Vec::new();
        }
        let v0 = &self.vertices[0];
        let diffs: Matrix = self.vertices[1..].iter().map(|v| sub_vec(v, v0)).collect();
        span_basis(&diffs)
    }

    /// Dimension of the affine span (`-1` encoded as `None` when empty).
    pub fn affine_dim(&self) -> Option<usize> {
        if self.is_empty() {
            None
        } else {
            Some(self.span_directions().len())
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == Some(self.dim)
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        in_convex_hull(&self.vertices, p)
    }

    /// `max f·v` over the polytope.
    pub fn support(&self, f: &[Q]) -> Option<Q> {
        self.vertices.iter().map(|v| dot(f, v)).max()
    }

    pub fn translate(&self, t: &[Q]) -> Self {
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| add_vec(v, t)).collect(),
        }
    }

    pub fn centroid(&self) -> Option<Vec<Q>> {
        let n = self.vertices.len();
        if n == 0 {
            return None;
        }
        let mut acc = crate::rational::zeros(self.dim);
        for v in &self.vertices {
            acc = add_vec(&acc, v);
        }
        let inv = crate::rational::qf(1, n as i64);
        Some(crate::rational::scale_vec(&inv, &acc))
    }

    /// H-representation: equalities for the affine span (as row pairs)
    /// followed by facet inequalities, in canonical order.
    pub fn to_h(&self) -> HPolyhedron {
        let d = self.dim;
        let mut h = HPolyhedron::new(d);
        if self.is_empty() {
            // 0·v − 1 ≥ 0 is never satisfied.
            h.push(crate::rational::zeros(d), -Q::from_integer(1.into()));
            return h;
        }
        let v0 = self.vertices[0].clone();
        let dirs = self.span_directions();
        let k = dirs.len();
        let normals = nullspace(&dirs, d);
        for n in normals {
            let n = normalize_direction(&n);
            let off = -dot(&n, &v0);
            h.push_eq(n, off);
        }
        if k == 0 {
            return h;
        }
        // Local coordinates u = L (v − v0) with L = (B Bᵀ)⁻¹ B, B = dirs.
        let bbt = mat_mul(&dirs, &transpose(&dirs));
        let l = mat_mul(&inverse(&bbt).expect("independent directions"), &dirs);
        let local: Vec<Vec<Q>> = self.vertices.iter().map(|v| mat_vec(&l, &sub_vec(v, &v0))).collect();
        let mut facets: BTreeSet<(Vec<Q>, Q)> = BTreeSet::new();
        if k == 1 {
            let vals: Vec<&Q> = local.iter().map(|u| &u[0]).collect();
            let lo = vals.iter().min().cloned().cloned().unwrap();
            let hi = vals.iter().max().cloned().cloned().unwrap();
            facets.insert((alloc::vec![Q::from_integer(1.into())], -lo));
            facets.insert((alloc::vec![-Q::from_integer(1.into())], hi));
        } else {
            let m = local.len();
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let base = &local[idx[0]];
                let diffs: Matrix = idx[1..].iter().map(|&i| sub_vec(&local[i], base)).collect();
                let ns = nullspace(&diffs, k);
                if ns.len() == 1 {
                    let mut n = ns[0].clone();
                    let c = -dot(&n, base);
                    let vals: Vec<Q> = local.iter().map(|u| dot(&n, u) + &c).collect();
                    let pos = vals.iter().any(|x| x.is_positive());
                    let neg = vals.iter().any(|x| x.is_negative());
                    if pos != neg {
                        let mut c = c;
                        if neg {
                            n = n.iter().map(|x| -x).collect();
                            c = -c;
                        }
                        let s = n.iter().find(|x| !x.is_zero()).unwrap().abs().recip();
                        let n: Vec<Q> = n.iter().map(|x| x * &s).collect();
                        facets.insert((n, c * s));
                    }
                }
                if !next_combination(&mut idx, m) {
                    break;
                }
            }
        }
        for (n, c) in facets {
            // n·L(v − v0) + c ≥ 0
            let amb = crate::linalg::vec_mat(&n, &l);
            let off = c - dot(&amb, &v0);
            let s = amb
                .iter()
                .find(|x| !x.is_zero())
                .map(|x| x.abs().recip())
                .unwrap_or_else(|| Q::from_integer(1.into()));
            h.push(amb.iter().map(|x| x * &s).collect(), off * s);
        }
        h
    }
}

/// `a + b`, reduced to extreme points.
pub fn minkowski_sum(a: &VPolytope, b: &VPolytope) -> Result<VPolytope> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    let mut pts = Vec::with_capacity(a.len() * b.len());
    for u in &a.vertices {
        for v in &b.vertices {
            pts.push(add_vec(u, v));
        }
    }
    VPolytope::from_points(a.dim, pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_ints, q};

    fn square() -> VPolytope {
        VPolytope::from_points(
            2,
            vec![
                from_ints(&[0, 0]),
                from_ints(&[1, 0]),
                from_ints(&[0, 1]),
                from_ints(&[1, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn reduces_interior_points() {
        let p = VPolytope::from_points(
            2,
            vec![
                from_ints(&[0, 0]),
                from_ints(&[2, 0]),
                from_ints(&[0, 2]),
                from_ints(&[1, 0]),
            ],
        )
        .unwrap();
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn round_trip_square() {
        let s = square();
        let h = s.to_h();
        assert_eq!(h.len(), 4);
        assert_eq!(h.vertices().unwrap(), s);
    }

    #[test]
    fn lower_dimensional_round_trip() {
        let seg = VPolytope::from_points(3, vec![from_ints(&[0, 0, 0]), from_ints(&[1, 2, 3])]).unwrap();
        let h = seg.to_h();
        assert_eq!(h.vertices().unwrap(), seg);
        assert_eq!(seg.affine_dim(), Some(1));
    }

    #[test]
    fn minkowski_identity_and_parallelogram() {
        let s = square();
        let zero = VPolytope::point(from_ints(&[0, 0]));
        assert_eq!(minkowski_sum(&s, &zero).unwrap(), s);
        let a = VPolytope::from_points(2, vec![from_ints(&[0, 0]), from_ints(&[1, 0])]).unwrap();
        let b = VPolytope::from_points(2, vec![from_ints(&[0, 0]), from_ints(&[1, 1])]).unwrap();
        let p = minkowski_sum(&a, &b).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.support(&from_ints(&[1, 1])), Some(q(3)));
    }
}

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{check_dim, Result};
use crate::linalg::{mat_mul, transpose, Matrix};
use crate::polyhedra::HPolyhedron;
use crate::rational::{dot, unit, zeros, LinearForm, RationalVector, Q};
use crate::rootspace::{Parabolic, RootDatum, WeightSet};

/// `Ψ_π = Δ ∪ Π`, deduplicated and sorted.
pub fn psi_pi(d: &RootDatum, weights: &WeightSet) -> Vec<LinearForm> {
    let mut s: BTreeSet<LinearForm> = d.simple_roots().into_iter().collect();
    s.extend(weights.weights.iter().filter(|w| !w.is_zero()).cloned());
    s.into_iter().collect()
}

/// Coordinates on `𝔞_P`: `y_β = β(X)` for `β ∈ Δ_P`, i.e. the basis of
/// fundamental coweights `ϖ_β^∨`. Volumes are Lebesgue measure in `y`.
#[derive(Debug, Clone)]
pub struct Frame {
    pub datum: RootDatum,
    pub p: Parabolic,
    /// `Δ_P` indices, in order.
    pub roots: Vec<usize>,
    /// Columns `ϖ_β^∨` in coroot coordinates (`n × dim`).
    pub basis: Matrix,
    /// Inner product in `y` coordinates.
    pub gram: Matrix,
}

impl Frame {
    pub fn new(datum: &RootDatum, p: &Parabolic) -> Self {
        let n = datum.rank();
        let roots = p.complement();
        let cols: Vec<Vec<Q>> = roots
            .iter()
            .map(|&b| datum.vector_with_root_values(&unit(n, b)).0)
            .collect();
        let basis = transpose(&cols);
        let gram = if roots.is_empty() {
            Vec::new()
        } else {
            mat_mul(&mat_mul(&cols, datum.gram()), &basis)
        };
        Frame {
            datum: datum.clone(),
            p: *p,
            roots,
            basis,
            gram,
        }
    }

    pub fn dim(&self) -> usize {
        self.roots.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// Restriction of an ambient form to `𝔞_P`, in `y` coordinates.
    pub fn form(&self, f: &LinearForm) -> Vec<Q> {
        (0..self.dim())
            .map(|k| (0..self.rank()).map(|i| &f[i] * &self.basis[i][k]).sum())
            .collect()
    }

    /// `y` coordinates of `X_P`.
    pub fn local(&self, x: &RationalVector) -> Vec<Q> {
        let xp = self.datum.lower(x, &self.p);
        self.roots
            .iter()
            .map(|&b| self.datum.simple_root(b).eval(&xp))
            .collect()
    }

    pub fn ambient(&self, y: &[Q]) -> RationalVector {
        RationalVector(self.basis.iter().map(|row| dot(row, y)).collect())
    }

    pub fn norm2(&self, y: &[Q]) -> Q {
        let gy: Vec<Q> = self.gram.iter().map(|r| dot(r, y)).collect();
        dot(y, &gy)
    }

    /// Forms in `y` coordinates induced by a linear map `f ∘ M` where `M`
    /// is given in coroot coordinates; used for projections.
    pub fn form_through(&self, f: &LinearForm, m: &Matrix) -> Vec<Q> {
        let mt = transpose(m);
        let pulled = LinearForm(mt.iter().map(|r| dot(r, f)).collect());
        self.form(&pulled)
    }
}

/// `Π_P`: nonzero restrictions of the weights to `𝔞_P`, deduplicated and
/// sorted, in `y` coordinates.
pub fn pi_forms(frame: &Frame, weights: &WeightSet) -> Vec<Vec<Q>> {
    let s: BTreeSet<Vec<Q>> = weights
        .weights
        .iter()
        .map(|w| frame.form(w))
        .filter(|f| f.iter().any(|c| !c.is_zero()))
        .collect();
    s.into_iter().collect()
}

/// A polytope in `y` coordinates whose inequalities `a·y ≥ c·(T;S)` have
/// right-hand sides linear in the parameters `(T;S) ∈ 𝔞 × 𝔞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicPolytope {
    pub dim: usize,
    pub nparams: usize,
    pub rows: Vec<SymRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SymRow {
    pub normal: Vec<Q>,
    pub rhs: Vec<Q>,
    pub kind: RowKind,
}

/// Provenance of an inequality, for dumps and tight-set labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowKind {
    /// `β(X) ≥ 0`, `β ∈ Δ_P`.
    SimpleRoot(usize),
    /// `ϖ̂_β(X) ≤ ϖ̂_β(T)`, `β ∈ Δ^Q \ Δ^P`.
    HatP(usize),
    /// `β(X_Q) ≥ β(T_Q)`, `β ∈ Δ_Q`.
    RootQ(usize),
    /// `ϖ_β(X) ≤ ϖ_β(T+S)`, `β ∈ Δ_Q`.
    WeightQ(usize),
    /// `(sgn λ)λ(X) ≥ 0`.
    Sign(usize),
    /// `(sgn λ)λ(X) ≥ δ_i B(T)` (lower) or `≤` (upper), with level `i`.
    Level { weight: usize, level: usize, upper: bool },
    /// `λ_𝓑(X) ≤ δ′B(T)`.
    Cut,
    /// `j(F) Σ d_λ λ(X) ≥ 0` for a problematic hyperplane.
    Problematic(usize),
    /// Anything supplied directly.
    Free(usize),
}

pub type Params = Vec<Q>;

/// `(T;S)` as one parameter vector.
pub fn params(t: &RationalVector, s: &RationalVector) -> Params {
    let mut p = t.0.clone();
    p.extend(s.0.iter().cloned());
    p
}

impl SymbolicPolytope {
    pub fn new(dim: usize, nparams: usize) -> Self {
        SymbolicPolytope {
            dim,
            nparams,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, normal: Vec<Q>, rhs: Vec<Q>, kind: RowKind) {
        debug_assert_eq!(normal.len(), self.dim);
        debug_assert_eq!(rhs.len(), self.nparams);
        self.rows.push(SymRow { normal, rhs, kind });
    }

    /// `a·y ≤ c·p` stored as `−a·y ≥ −c·p`.
    pub fn push_le(&mut self, normal: Vec<Q>, rhs: Vec<Q>, kind: RowKind) {
        self.push(
            normal.iter().map(|x| -x).collect(),
            rhs.iter().map(|x| -x).collect(),
            kind,
        );
    }

    pub fn instantiate(&self, p: &[Q]) -> Result<HPolyhedron> {
        check_dim(self.nparams, p.len())?;
        let mut h = HPolyhedron::new(self.dim);
        for r in &self.rows {
            h.push(r.normal.clone(), -dot(&r.rhs, p));
        }
        Ok(h)
    }

    pub fn extended(&self, extra: &[SymRow]) -> Self {
        let mut s = self.clone();
        s.rows.extend(extra.iter().cloned());
        s
    }
}

/// Linear form on parameters picking `f(T)`.
pub fn on_t(f: &[Q], n: usize) -> Vec<Q> {
    let mut v = f.to_vec();
    v.extend(zeros(n));
    v
}

/// Linear form on parameters picking `f(T) + f(S)`.
pub fn on_t_plus_s(f: &[Q]) -> Vec<Q> {
    let mut v = f.to_vec();
    v.extend(f.iter().cloned());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_ints, q};
    use crate::rootspace::{build_root_datum, weights_of, RepSpec};

    #[test]
    fn psi_sizes() {
        let d = build_root_datum("A", 2).unwrap();
        let triv = weights_of(&d, &RepSpec::Trivial).unwrap();
        let mut roots = d.simple_roots();
        roots.sort();
        assert_eq!(psi_pi(&d, &triv), roots);
        let adj = weights_of(&d, &RepSpec::Adjoint).unwrap();
        assert_eq!(psi_pi(&d, &adj).len(), 6);
    }

    #[test]
    fn frame_round_trip() {
        let d = build_root_datum("A", 3).unwrap();
        let p = Parabolic::parse(3, "a2").unwrap();
        let f = Frame::new(&d, &p);
        assert_eq!(f.dim(), 2);
        let y = from_ints(&[3, -2]);
        let x = f.ambient(&y);
        assert_eq!(d.lower(&x, &p), x);
        assert_eq!(f.local(&x), y);
        let a1 = d.simple_root(0);
        assert_eq!(dot(&f.form(&a1), &y), a1.eval(&x));
        assert_eq!(f.norm2(&y), d.norm2(&x));
        let t = RationalVector(from_ints(&[1, 2, 3]));
        assert_eq!(params(&t, &t).len(), 6);
        assert_eq!(on_t(&[q(1)], 1), alloc::vec![q(1), q(0)]);
    }
}

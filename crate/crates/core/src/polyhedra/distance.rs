use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{greedy_basis, inverse, mat_mul, mat_vec, transpose, Matrix};
use crate::lp::{Lp, Rel};
use crate::rational::{dot, sub_vec, zeros, Q};

use super::faces::face_lattice;
use super::VPolytope;

/// `K = Λᵀ (Λ G⁻¹ Λᵀ)⁻¹ Λ`: `xᵀKx` is the squared distance from `x` to
/// `ker Λ` under the form with Gram matrix `gram` (forms evaluate by dot).
pub fn kernel_distance_matrix(forms: &[Vec<Q>], gram: &[Vec<Q>]) -> Matrix {
    let n = gram.len();
    let idx = greedy_basis(forms);
    if idx.is_empty() {
        return (0..n).map(|_| zeros(n)).collect();
    }
    let lam: Matrix = idx.iter().map(|&i| forms[i].clone()).collect();
    let ginv = inverse(gram).expect("positive-definite form");
    let m = mat_mul(&mat_mul(&lam, &ginv), &transpose(&lam));
    let minv = inverse(&m).expect("independent forms");
    mat_mul(&mat_mul(&transpose(&lam), &minv), &lam)
}

fn quad(k: &Matrix, x: &[Q]) -> Q {
    dot(x, &mat_vec(k, x))
}

/// Exact squared distance between `ker Λ` and a polytope.
///
/// For every face `F` the minimizers of `xᵀKx` over `aff F` satisfy
/// `Eᵀ K x = 0` (`E` spanning the directions of `F`); an LP decides whether
/// such a point lies in `F`. The minimum over faces is the answer.
pub fn squared_distance(forms: &[Vec<Q>], gram: &[Vec<Q>], poly: &VPolytope) -> Result<Q> {
    if poly.is_empty() {
        return Err(Error::InvalidArgument("empty polytope".into()));
    }
    let k = kernel_distance_matrix(forms, gram);
    if poly.len() == 1 {
        return Ok(quad(&k, &poly.vertices[0]));
    }
    let lat = face_lattice(&poly.to_h())?;
    let mut best: Option<Q> = None;
    // Process faces from low to high dimension; vertices give a quick bound.
    let mut keys: Vec<_> = lat.faces.iter().collect();
    keys.sort_by_key(|(key, f)| (f.dim, (*key).clone()));
    for (_, face) in keys {
        let pts: Vec<Vec<Q>> = face.vertices.iter().map(|&i| lat.vertices[i].clone()).collect();
        if let Some(val) = face_minimum(&k, &pts) {
            if best.as_ref().is_none_or(|b| &val < b) {
                best = Some(val);
            }
        }
    }
    best.ok_or_else(|| Error::Internal("no face attained the minimum".into()))
}

fn face_minimum(k: &Matrix, pts: &[Vec<Q>]) -> Option<Q> {
    if pts.len() == 1 {
        return Some(quad(k, &pts[0]));
    }
    let n = pts[0].len();
    let dirs: Matrix = pts[1..].iter().map(|p| sub_vec(p, &pts[0])).collect();
    let ek: Matrix = dirs.iter().map(|e| mat_vec(k, e)).collect();
    // weights w ≥ 0, Σw = 1, x = Σ w_i p_i, (Ke_j)·x = 0.
    let m = pts.len();
    let mut lp = Lp::new(m).nonnegative();
    for row in &ek {
        let coeffs: Vec<Q> = pts.iter().map(|p| dot(row, p)).collect();
        lp.add(coeffs, Rel::Eq, Q::from_integer(0.into()));
    }
    lp.add(
        (0..m).map(|_| Q::from_integer(1.into())).collect(),
        Rel::Eq,
        Q::from_integer(1.into()),
    );
    let w = lp.feasible_point()?;
    let mut x = zeros(n);
    for (wi, p) in w.iter().zip(pts) {
        for (xj, pj) in x.iter_mut().zip(p) {
            *xj += wi * pj;
        }
    }
    Some(quad(k, &x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use crate::rational::{from_ints, q, qf};

    #[test]
    fn line_to_point() {
        let g = identity(2);
        let p = VPolytope::point(from_ints(&[1, 0]));
        assert_eq!(squared_distance(&[from_ints(&[1, -1])], &g, &p).unwrap(), qf(1, 2));
    }

    #[test]
    fn meeting_gives_zero_and_translation_invariance() {
        let g = identity(2);
        let seg = VPolytope::from_points(2, vec![from_ints(&[-1, 1]), from_ints(&[2, 1])]).unwrap();
        let f = [from_ints(&[1, -1])];
        assert_eq!(squared_distance(&f, &g, &seg).unwrap(), q(0));
        let tri = VPolytope::from_points(2, vec![from_ints(&[3, 0]), from_ints(&[5, 0]), from_ints(&[4, 1])]).unwrap();
        let d0 = squared_distance(&f, &g, &tri).unwrap();
        let d1 = squared_distance(&f, &g, &tri.translate(&from_ints(&[7, 7]))).unwrap();
        assert_eq!(d0, d1);
        // nearest point (4,1): (4−1)²/2
        assert_eq!(d0, qf(9, 2));
    }

    #[test]
    fn empty_form_set_is_whole_space() {
        let g = identity(3);
        let p = VPolytope::point(from_ints(&[5, 5, 5]));
        assert_eq!(squared_distance(&[], &g, &p).unwrap(), q(0));
    }
}

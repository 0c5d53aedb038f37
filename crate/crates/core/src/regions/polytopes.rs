use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polyhedra::{face_lattice, minkowski_sum, VPolytope};
use crate::rational::{unit, zeros, LinearForm, RationalVector, Q};
use crate::rootspace::{Parabolic, RootDatum};

use super::frame::{on_t, on_t_plus_s, Frame, RowKind, SymbolicPolytope};

/// `R′_P^Q(T) = cvx(T_R)_{P⊆R⊆Q}` in coroot coordinates.
pub fn r_prime(d: &RootDatum, p: &Parabolic, q: &Parabolic, t: &RationalVector) -> Result<VPolytope> {
    if !p.contained_in(q) {
        return Err(Error::NotContained);
    }
    d.check_vector(t)?;
    let pts: Vec<Vec<Q>> = p.interval(q).iter().map(|r| d.lower(t, r).0).collect();
    VPolytope::from_points(d.rank(), pts)
}

/// Sorted vertex lists keyed by `(P_1, P_2)`.
pub type FaceMap = BTreeMap<(Parabolic, Parabolic), Vec<Vec<Q>>>;

/// The predicted faces `(P_1, P_2) ↦ cvx(T_R)_{P_1⊆R⊆P_2}`.
pub fn face_map(d: &RootDatum, p: &Parabolic, q: &Parabolic, t: &RationalVector) -> Result<FaceMap> {
    if !p.contained_in(q) {
        return Err(Error::NotContained);
    }
    let mut out = BTreeMap::new();
    for p1 in p.interval(q) {
        for p2 in p1.interval(q) {
            let pts: BTreeSet<Vec<Q>> = p1.interval(&p2).iter().map(|r| d.lower(t, r).0).collect();
            out.insert((p1, p2), pts.into_iter().collect());
        }
    }
    Ok(out)
}

/// Outcome of matching the predicted face map against the computed face lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceCensus {
    pub pairs: usize,
    pub lattice_faces: usize,
    pub matched: usize,
    pub dimension_ok: bool,
}

impl FaceCensus {
    pub fn is_bijection(&self) -> bool {
        self.pairs == self.lattice_faces && self.matched == self.pairs && self.dimension_ok
    }
}

pub fn face_census(d: &RootDatum, p: &Parabolic, q: &Parabolic, t: &RationalVector) -> Result<FaceCensus> {
    let poly = r_prime(d, p, q, t)?;
    let lat = face_lattice(&poly.to_h())?;
    let lattice_sets: BTreeSet<Vec<Vec<Q>>> = lat
        .faces
        .values()
        .map(|f| {
            let s: BTreeSet<Vec<Q>> = f.vertices.iter().map(|&i| lat.vertices[i].clone()).collect();
            s.into_iter().collect()
        })
        .collect();
    let predicted = face_map(d, p, q, t)?;
    let mut matched = 0;
    let mut dimension_ok = true;
    let mut distinct = BTreeSet::new();
    for ((p1, p2), pts) in &predicted {
        if lattice_sets.contains(pts) && distinct.insert(pts.clone()) {
            matched += 1;
        }
        let face = VPolytope::from_extreme_points(d.rank(), pts.clone());
        if face.affine_dim() != Some(p2.levi_size() - p1.levi_size()) {
            dimension_ok = false;
        }
    }
    Ok(FaceCensus {
        pairs: predicted.len(),
        lattice_faces: lattice_sets.len(),
        matched,
        dimension_ok,
    })
}

/// `R_P^Q(T,S) = R′_P^Q(T) + R′_Q(S)` in coroot coordinates.
pub fn r_region(
    d: &RootDatum,
    p: &Parabolic,
    q: &Parabolic,
    t: &RationalVector,
    s: &RationalVector,
) -> Result<VPolytope> {
    let g = Parabolic::group(d.rank());
    let a = r_prime(d, p, q, t)?;
    let b = r_prime(d, q, &g, s)?;
    minkowski_sum(&a, &b)
}

/// Linear form `X ↦ f(M X)` for a coroot-coordinate matrix `M`, in weight
/// coordinates.
fn pull(f: &LinearForm, m: &Matrix) -> Vec<Q> {
    let n = m.len();
    (0..n).map(|j| (0..n).map(|i| &f[i] * &m[i][j]).sum()).collect()
}

/// Symbolic H-representation of `R_P^Q(T,S)` in the frame of `𝔞_P`:
/// `β(X) ≥ 0` (`Δ_P`), `ϖ̂_β(X) ≤ ϖ̂_β(T)` (`Δ^Q \ Δ^P`),
/// `β(X_Q) ≥ β(T_Q)` and `ϖ_β(X) ≤ ϖ_β(T+S)` (`Δ_Q`).
pub fn region_system(frame: &Frame, q: &Parabolic) -> Result<SymbolicPolytope> {
    let d = &frame.datum;
    let p = &frame.p;
    if !p.contained_in(q) {
        return Err(Error::NotContained);
    }
    let n = d.rank();
    let g = Parabolic::group(n);
    let mut sys = SymbolicPolytope::new(frame.dim(), 2 * n);
    for (k, &b) in frame.roots.iter().enumerate() {
        sys.push(unit(frame.dim(), k), zeros(2 * n), RowKind::SimpleRoot(b));
    }
    // ϖ̂_β for β ∈ Δ^Q \ Δ^P: the α_β^∨ coefficient of X^Q.
    let between = p.between(q);
    if !between.is_empty() {
        let qlevi = q.levi();
        let cols: Vec<Vec<(usize, Q)>> = (0..n).map(|j| d.hat_coords(&d.coroot(j), p, q)).collect();
        for &b in &between {
            let f: Vec<Q> = (0..n)
                .map(|j| {
                    cols[j]
                        .iter()
                        .find(|(i, _)| *i == b)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(Q::zero)
                })
                .collect();
            debug_assert!(qlevi.contains(&b));
            let form = LinearForm(f);
            sys.push_le(frame.form(&form), on_t(&form, n), RowKind::HatP(b));
        }
    }
    let to_q = d.projection_matrix(q, &g);
    for b in q.complement() {
        let a = pull(&d.simple_root(b), &to_q);
        let af = LinearForm(a);
        sys.push(frame.form(&af), on_t(&af, n), RowKind::RootQ(b));
        let w = d.fundamental_weight(b);
        sys.push_le(frame.form(&w), on_t_plus_s(&w), RowKind::WeightQ(b));
    }
    Ok(sys)
}

/// Vertices of a V-polytope of `𝔞_P` in frame coordinates, sorted.
pub fn to_frame(frame: &Frame, poly: &VPolytope) -> Vec<Vec<Q>> {
    let mut v: Vec<Vec<Q>> = poly
        .vertices
        .iter()
        .map(|x| frame.local(&RationalVector(x.clone())))
        .collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::squared_distance;
    use crate::rational::{from_ints, q, qf};
    use crate::regions::frame::params;
    use crate::rootspace::{build_root_datum, gamma, GammaValue};

    fn regular(d: &RootDatum, vals: &[i64]) -> RationalVector {
        d.vector_with_root_values(&from_ints(vals))
    }

    #[test]
    fn r_prime_shapes() {
        let d = build_root_datum("A", 2).unwrap();
        let t = regular(&d, &[3, 5]);
        let p0 = Parabolic::minimal(2);
        let g = Parabolic::group(2);
        let quad = r_prime(&d, &p0, &g, &t).unwrap();
        assert_eq!(quad.len(), 4);
        assert_eq!(quad.affine_dim(), Some(2));
        let a1 = Parabolic::parse(2, "a1").unwrap();
        let pt = r_prime(&d, &a1, &a1, &t).unwrap();
        assert_eq!(pt.vertices, alloc::vec![d.lower(&t, &a1).0]);
        assert!(r_prime(&d, &g, &a1, &t).is_err());
    }

    #[test]
    fn census_a2() {
        let d = build_root_datum("A", 2).unwrap();
        let t = regular(&d, &[2, 7]);
        for qq in Parabolic::all(2) {
            for p in Parabolic::minimal(2).interval(&qq) {
                let c = face_census(&d, &p, &qq, &t).unwrap();
                assert!(c.is_bijection(), "{:?} {:?} {c:?}", p, qq);
            }
        }
    }

    #[test]
    fn symbolic_matches_minkowski() {
        for (ty, rank) in [("A", 2), ("A", 3), ("B", 2)] {
            let d = build_root_datum(ty, rank).unwrap();
            let vals: Vec<i64> = (0..rank as i64).map(|i| 6 + 3 * i).collect();
            let t = regular(&d, &vals);
            let s = d.vector_with_root_values(&alloc::vec![qf(1, 3); rank]);
            for qq in Parabolic::all(rank) {
                if qq == Parabolic::group(rank) {
                    continue;
                }
                for p in Parabolic::minimal(rank).interval(&qq) {
                    let frame = Frame::new(&d, &p);
                    let sys = region_system(&frame, &qq).unwrap();
                    let h = sys.instantiate(&params(&t, &s)).unwrap();
                    let mut sym = h.vertices().unwrap().vertices;
                    sym.sort();
                    let mk = to_frame(&frame, &r_region(&d, &p, &qq, &t, &s).unwrap());
                    assert_eq!(sym, mk, "{ty}{rank} {:?} {:?}", p, qq);
                }
            }
        }
    }

    #[test]
    fn unit_distance_and_gamma_consistency() {
        let d = build_root_datum("A", 2).unwrap();
        let t = regular(&d, &[5, 4]);
        let s = d.vector_with_root_values(&[qf(1, 2), qf(1, 3)]);
        assert!(d.norm2(&s) <= q(1));
        let p = Parabolic::minimal(2);
        let qq = Parabolic::parse(2, "a1").unwrap();
        let g = Parabolic::group(2);
        let r = r_region(&d, &p, &qq, &t, &s).unwrap();
        let rp = r_prime(&d, &p, &qq, &t).unwrap();
        for v in &r.vertices {
            let shifted =
                VPolytope::from_extreme_points(2, rp.vertices.iter().map(|w| crate::rational::sub_vec(w, v)).collect());
            assert!(squared_distance(&[], d.gram(), &shifted).unwrap() <= q(1));
        }
        let frame = Frame::new(&d, &p);
        let h = region_system(&frame, &qq)
            .unwrap()
            .instantiate(&params(&t, &s))
            .unwrap();
        for i in -10..40 {
            for j in -10..40 {
                let y = alloc::vec![qf(i, 3) + qf(1, 97), qf(j, 3) + qf(1, 89)];
                let x = frame.ambient(&y);
                let a = gamma(&d, &p, &qq, &x, &t).unwrap();
                let xt = &x - &t;
                let b = gamma(&d, &qq, &g, &xt, &s).unwrap();
                let inside = h.contains(&y);
                let prod = a == GammaValue::One && b == GammaValue::One;
                if a != GammaValue::Boundary && b != GammaValue::Boundary {
                    assert_eq!(inside, prod, "at {:?}", y);
                }
            }
        }
    }
}

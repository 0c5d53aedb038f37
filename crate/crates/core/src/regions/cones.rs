//! The distance function `d`, π-dependent cones, `κ` and `B`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{inverse, mat_mul, mat_vec, nullspace, span_basis, transpose, Matrix};
use crate::polyhedra::{squared_distance, HPolyhedron, VPolytope};
use crate::rational::{dot, normalize_direction, q, sqrt_lower, sqrt_upper, LinearForm, RationalVector, Q};
use crate::rootspace::{Parabolic, RootDatum};

/// Distinct nonzero spans of subsets of `forms`, as canonical bases.
pub fn flats(forms: &[LinearForm]) -> Vec<Matrix> {
    let mut seen: BTreeSet<Matrix> = BTreeSet::new();
    let mut queue: VecDeque<Matrix> = VecDeque::new();
    for f in forms {
        if f.is_zero() {
            continue;
        }
        let b = span_basis(core::slice::from_ref(&f.0));
        if seen.insert(b.clone()) {
            queue.push_back(b);
        }
    }
    while let Some(b) = queue.pop_front() {
        for f in forms {
            let mut rows = b.clone();
            rows.push(f.0.clone());
            let nb = span_basis(&rows);
            if nb.len() > b.len() && seen.insert(nb.clone()) {
                queue.push_back(nb);
            }
        }
    }
    seen.into_iter().collect()
}

/// Basis of `span(F_P) ∩ 𝔞_Q*` in weight coordinates.
pub fn admissible_span(d: &RootDatum, flat: &Matrix, p: &Parabolic, q: &Parabolic) -> Vec<Vec<Q>> {
    let g = Parabolic::group(d.rank());
    let projected: Vec<Vec<Q>> = flat
        .iter()
        .map(|f| d.project_form(&LinearForm(f.clone()), p, &g).expect("P ⊆ G").0)
        .collect();
    let b = span_basis(&projected);
    if b.is_empty() {
        return Vec::new();
    }
    let levi = q.levi();
    if levi.is_empty() {
        return b;
    }
    // Σ c_k b_k must vanish at every Levi coordinate of Q.
    let m: Matrix = levi
        .iter()
        .map(|&j| b.iter().map(|bk| bk[j].clone()).collect())
        .collect();
    let cs = nullspace(&m, b.len());
    let w: Vec<Vec<Q>> = cs
        .iter()
        .map(|c| {
            (0..d.rank())
                .map(|i| c.iter().zip(&b).map(|(ck, bk)| ck * &bk[i]).sum())
                .collect()
        })
        .collect();
    span_basis(&w)
}

/// All pairs `P ⊆ Q ⊊ G`.
pub fn proper_pairs(rank: usize) -> Vec<(Parabolic, Parabolic)> {
    let g = Parabolic::group(rank);
    let mut out = Vec::new();
    for q in Parabolic::all(rank) {
        if q == g {
            continue;
        }
        for p in Parabolic::minimal(rank).interval(&q) {
            out.push((p, q));
        }
    }
    out
}

/// `d(X)²`, with the admissible `(P, Q, span 𝒮)` triples precomputed.
#[derive(Debug, Clone)]
pub struct DistanceFunction {
    pub datum: RootDatum,
    pub terms: Vec<DistanceTerm>,
}

#[derive(Debug, Clone)]
pub struct DistanceTerm {
    pub p: Parabolic,
    pub q: Parabolic,
    /// Basis of `span 𝒮`.
    pub flat: Matrix,
    /// Basis of `span(𝒮_P) ∩ 𝔞_Q*`.
    pub witness_span: Vec<Vec<Q>>,
}

impl DistanceFunction {
    pub fn new(d: &RootDatum, psi: &[LinearForm]) -> Self {
        let fl = flats(psi);
        let mut terms = Vec::new();
        for (p, q) in proper_pairs(d.rank()) {
            for f in &fl {
                let w = admissible_span(d, f, &p, &q);
                if !w.is_empty() {
                    terms.push(DistanceTerm {
                        p,
                        q,
                        flat: f.clone(),
                        witness_span: w,
                    });
                }
            }
        }
        DistanceFunction {
            datum: d.clone(),
            terms,
        }
    }

    pub fn term_value(&self, term: &DistanceTerm, x: &RationalVector) -> Result<Q> {
        let pts: Vec<Vec<Q>> = term
            .p
            .interval(&term.q)
            .iter()
            .map(|r| self.datum.lower(x, r).0)
            .collect();
        let hull = VPolytope::from_points(self.datum.rank(), pts)?;
        squared_distance(&term.flat, self.datum.gram(), &hull)
    }

    /// `d_value_squared(X, ψ)`.
    pub fn value(&self, x: &RationalVector) -> Result<Q> {
        self.datum.check_vector(x)?;
        let mut best: Option<Q> = None;
        for t in &self.terms {
            let v = self.term_value(t, x)?;
            if v.is_zero() {
                return Ok(v);
            }
            if best.as_ref().is_none_or(|b| &v < b) {
                best = Some(v);
            }
        }
        best.ok_or_else(|| Error::Internal("no admissible term in d".into()))
    }
}

/// One open cell of the arrangement inside `𝔞⁺`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    /// `±1` per arrangement hyperplane.
    pub signs: Vec<i8>,
    pub witness: RationalVector,
}

#[derive(Debug, Clone)]
pub struct ConeFamily {
    pub hyperplanes: Vec<LinearForm>,
    pub cones: Vec<Cone>,
}

impl ConeFamily {
    /// Index of the open cone containing `x`, if any.
    pub fn cone_of(&self, d: &RootDatum, x: &RationalVector) -> Option<usize> {
        if !d.is_regular_dominant(x) {
            return None;
        }
        let signs: Option<Vec<i8>> = self
            .hyperplanes
            .iter()
            .map(|h| {
                let v = h.eval(x);
                if v.is_positive() {
                    Some(1)
                } else if v.is_negative() {
                    Some(-1)
                } else {
                    None
                }
            })
            .collect();
        let signs = signs?;
        self.cones.iter().position(|c| c.signs == signs)
    }
}

/// `C_ε` membership: `x` in cone `k` and `d(x)² > ε²‖x‖²`.
pub fn in_c_eps(family: &ConeFamily, dist: &DistanceFunction, k: usize, eps: &Q, x: &RationalVector) -> Result<bool> {
    if family.cone_of(&dist.datum, x) != Some(k) {
        return Ok(false);
    }
    Ok(dist.value(x)? > eps * eps * dist.datum.norm2(x))
}

/// `pi_cones(ψ)`: cells in `𝔞⁺` of the walls `ker μ`, `μ` running over
/// bases of the nonzero spaces `span(𝒮_P) ∩ 𝔞_Q*`.
pub fn pi_cones(dist: &DistanceFunction) -> Result<ConeFamily> {
    let d = &dist.datum;
    let n = d.rank();
    let mut chamber = HPolyhedron::new(n);
    for a in d.simple_roots() {
        chamber.push(a.0, Q::zero());
    }
    let mut walls: BTreeSet<Vec<Q>> = BTreeSet::new();
    for t in &dist.terms {
        for mu in &t.witness_span {
            walls.insert(normalize_direction(mu));
        }
    }
    // Keep only walls meeting the open chamber.
    let hyperplanes: Vec<LinearForm> = walls
        .into_iter()
        .filter(|mu| {
            let mut plus = chamber.clone();
            plus.push(mu.clone(), Q::zero());
            let mut minus = chamber.clone();
            minus.push(mu.iter().map(|x| -x).collect(), Q::zero());
            plus.has_interior() && minus.has_interior()
        })
        .map(LinearForm)
        .collect();
    let mut cones = Vec::new();
    let mut stack: Vec<(HPolyhedron, Vec<i8>)> = alloc::vec![(chamber, Vec::new())];
    while let Some((h, signs)) = stack.pop() {
        if signs.len() == hyperplanes.len() {
            let w = h
                .interior_point()
                .ok_or_else(|| Error::Internal("cell lost its interior".into()))?;
            let witness = RationalVector(w);
            if dist.value(&witness)?.is_zero() {
                return Err(Error::Internal("d vanishes inside an arrangement cell".into()));
            }
            cones.push(Cone { signs, witness });
            continue;
        }
        let mu = &hyperplanes[signs.len()];
        for s in [-1i8, 1] {
            let mut next = h.clone();
            next.push(mu.iter().map(|x| x * q(s as i64)).collect(), Q::zero());
            if next.has_interior() {
                let mut sg = signs.clone();
                sg.push(s);
                stack.push((next, sg));
            }
        }
    }
    cones.sort_by(|a, b| a.signs.cmp(&b.signs));
    Ok(ConeFamily { hyperplanes, cones })
}

/// `κ²` for forms on a space with Gram matrix `gram` (forms evaluate by
/// dot product), by chaining the rhombus bound along every independent
/// index-increasing sequence. The bound is an upper certificate: rational
/// lower bounds on `sin²(θ/2)` are used throughout.
pub fn kappa_squared(forms: &[Vec<Q>], gram: &Matrix) -> Q {
    let n = gram.len();
    let ginv = inverse(gram).expect("positive-definite form");
    let fnorm2 = |f: &[Q]| dot(f, &mat_vec(&ginv, f));
    let forms: Vec<&Vec<Q>> = forms.iter().filter(|f| f.iter().any(|c| !c.is_zero())).collect();
    let mut best = Q::one();
    // (chosen indices, current bound b², next start)
    let mut stack: Vec<(Vec<usize>, Q)> = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        stack.push((alloc::vec![i], fnorm2(f).recip()));
    }
    while let Some((chain, b2)) = stack.pop() {
        if b2 > best {
            best = b2.clone();
        }
        if chain.len() == n {
            continue;
        }
        let rows: Matrix = chain.iter().map(|&i| forms[i].clone()).collect();
        let s_basis = nullspace(&rows, n);
        let v = transpose(&s_basis);
        let m = mat_mul(&mat_mul(&s_basis, gram), &v);
        let minv = inverse(&m).expect("subspace Gram is definite");
        for j in chain[chain.len() - 1] + 1..forms.len() {
            let lam = forms[j];
            let a: Vec<Q> = s_basis.iter().map(|sv| dot(sv, lam)).collect();
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            let proj2 = dot(&a, &mat_vec(&minv, &a));
            let sin2 = proj2 / fnorm2(lam);
            let cos_up = sqrt_upper(&(Q::one() - &sin2), 48);
            let half = (Q::one() - cos_up) / q(2);
            let lam_b2 = fnorm2(lam).recip();
            let base = if lam_b2 > b2 { lam_b2 } else { b2.clone() };
            let mut next = chain.clone();
            next.push(j);
            stack.push((next, base / half));
        }
    }
    best
}

/// `B = ε r α_1` with `r ≤ 1/(2κ‖α_1‖)` rational, so `0 < B(T) ≤ (ε/2κ)‖T‖`
/// on `𝔞⁺`.
pub fn b_functional(d: &RootDatum, eps: &Q, kappa2: &Q) -> Result<LinearForm> {
    if !eps.is_positive() || !kappa2.is_positive() {
        return Err(Error::InvalidArgument("ε and κ² must be positive".into()));
    }
    let a = d.simple_root(0);
    let r2 = (q(4) * kappa2 * d.form_norm2(&a)).recip();
    let r = sqrt_lower(&r2, 48);
    Ok(a.scale(&(eps * r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use crate::rational::{from_ints, qf};
    use crate::regions::psi_pi;
    use crate::rootspace::{build_root_datum, weights_of, RepSpec};

    fn setup(rep: RepSpec) -> DistanceFunction {
        let d = build_root_datum("A", 2).unwrap();
        let w = weights_of(&d, &rep).unwrap();
        DistanceFunction::new(&d, &psi_pi(&d, &w))
    }

    #[test]
    fn homogeneity_and_zeros() {
        let df = setup(RepSpec::Adjoint);
        let x = RationalVector(from_ints(&[3, 5]));
        let v = df.value(&x).unwrap();
        assert!(v.is_positive());
        let x3 = RationalVector(from_ints(&[9, 15]));
        assert_eq!(df.value(&x3).unwrap(), v * q(9));
        // On the wall α_1 = 0 the term (P_0, P_0, {α_1}) vanishes.
        let w = df.datum.vector_with_root_values(&from_ints(&[0, 4]));
        assert!(df.value(&w).unwrap().is_zero());
    }

    #[test]
    fn rank_two_full_span_term_is_norm_of_projection() {
        let df = setup(RepSpec::Adjoint);
        let x = RationalVector(from_ints(&[3, 5]));
        for t in &df.terms {
            if t.flat.len() == 2 {
                let xq = df.datum.lower(&x, &t.q);
                assert_eq!(df.term_value(t, &x).unwrap(), df.datum.norm2(&xq));
            }
        }
    }

    #[test]
    fn cone_counts() {
        assert_eq!(pi_cones(&setup(RepSpec::Adjoint)).unwrap().cones.len(), 1);
        assert_eq!(pi_cones(&setup(RepSpec::Trivial)).unwrap().cones.len(), 1);
        let std = setup(RepSpec::Standard);
        let fam = pi_cones(&std).unwrap();
        assert_eq!(fam.cones.len(), 2);
        // d is positive on both sides of the interior wall c_1 = c_2.
        for c in &fam.cones {
            assert!(std.value(&c.witness).unwrap().is_positive());
        }
        let on_wall = RationalVector(from_ints(&[2, 2]));
        assert_eq!(fam.cone_of(&std.datum, &on_wall), None);
        assert!(std.value(&on_wall).unwrap().is_zero());
    }

    #[test]
    fn kappa_examples() {
        let id = identity(2);
        assert_eq!(kappa_squared(&[from_ints(&[1, 0])], &id), q(1));
        assert_eq!(kappa_squared(&[from_ints(&[1, 0]), from_ints(&[0, 1])], &id), q(2));
    }

    #[test]
    fn kappa_certificate_holds_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let id = identity(3);
        for _ in 0..20 {
            let forms: Vec<Vec<Q>> = (0..3)
                .map(|_| (0..3).map(|_| q(rng.gen_range(-3..=3))).collect())
                .collect();
            if crate::linalg::det(&forms).is_zero() {
                continue;
            }
            let k2 = kappa_squared(&forms, &id);
            let inv = inverse(&forms).unwrap();
            // The thickened intersection is a parallelepiped; its farthest
            // points from ker = {0} are corners.
            for mask in 0..8u32 {
                let v: Vec<Q> = (0..3).map(|i| if mask >> i & 1 == 1 { q(1) } else { q(-1) }).collect();
                let x = mat_vec(&inv, &v);
                assert!(dot(&x, &x) <= k2, "corner escapes κ");
            }
        }
    }

    #[test]
    fn b_scales_and_bounds() {
        let d = build_root_datum("A", 1).unwrap();
        let b = b_functional(&d, &qf(1, 2), &q(1)).unwrap();
        // ε/(2κ‖α‖) α with ‖α‖² = 2 is not rational; r is a lower bound.
        let a = d.simple_root(0);
        let ratio = &b[0] / &a[0];
        assert!(&ratio * &ratio * q(4) * q(2) <= qf(1, 4));
        let b2 = b_functional(&d, &q(1), &q(1)).unwrap();
        assert_eq!(b2, b.scale(&q(2)));
        let d2 = build_root_datum("A", 2).unwrap();
        let bb = b_functional(&d2, &qf(1, 3), &q(3)).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let vals = [q(rng.gen_range(1..50)), q(rng.gen_range(1..50))];
            let t = d2.vector_with_root_values(&vals);
            let bt = bb.eval(&t);
            // B(T)² ≤ ε²‖T‖²/(4κ²)
            assert!(bt.is_positive());
            assert!(&bt * &bt <= qf(1, 9) * d2.norm2(&t) / q(12));
        }
    }
}

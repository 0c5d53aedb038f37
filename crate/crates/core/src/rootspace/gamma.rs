use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::in_convex_hull;
use crate::rational::RationalVector;

use super::parabolic::require_contained;
use super::{Parabolic, RootDatum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaValue {
    Zero,
    One,
    /// `X` sits on one of the hyperplanes the indicators are built from.
    Boundary,
}

impl GammaValue {
    pub fn as_int(self) -> Option<u8> {
        match self {
            GammaValue::Zero => Some(0),
            GammaValue::One => Some(1),
            GammaValue::Boundary => None,
        }
    }
}

/// `τ_P^R(X)`: every `β ∈ Δ_P^R` is strictly positive on `X_P`.
/// `None` when some value is exactly zero.
pub fn tau(d: &RootDatum, p: &Parabolic, r: &Parabolic, x: &RationalVector) -> Option<bool> {
    let xp = d.lower(x, p);
    let mut all = true;
    for b in p.between(r) {
        let v = d.simple_root(b).eval(&xp);
        if v.is_zero() {
            return None;
        }
        all &= v.is_positive();
    }
    Some(all)
}

/// `τ̂_R^Q(Y)`: every `ϖ̂_β(Y_R^Q)`, `β ∈ Δ̂_R^Q`, is strictly positive.
pub fn tau_hat(d: &RootDatum, r: &Parabolic, q: &Parabolic, y: &RationalVector) -> Option<bool> {
    let mut all = true;
    for (_, v) in d.hat_coords(y, r, q) {
        if v.is_zero() {
            return None;
        }
        all &= v.is_positive();
    }
    Some(all)
}

/// Arthur's alternating sum
/// `Γ_P^Q(X,T) = Σ_{P⊆R⊆Q} (−1)^{dim 𝔞_R^Q} τ_P^R(X) τ̂_R^Q(X − T)`.
///
/// For `T` in the positive chamber this is the indicator of the hull of
/// the `T_R` (projected to `𝔞_P^Q`).
pub fn gamma(
    d: &RootDatum,
    p: &Parabolic,
    q: &Parabolic,
    x: &RationalVector,
    t: &RationalVector,
) -> Result<GammaValue> {
    require_contained(p, q)?;
    d.check_vector(x)?;
    d.check_vector(t)?;
    let y = x - t;
    let mut sum: i64 = 0;
    for r in p.interval(q) {
        let a = tau(d, p, &r, x).ok_or(Error::Boundary);
        let b = tau_hat(d, &r, q, &y).ok_or(Error::Boundary);
        let (a, b) = match (a, b) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Ok(GammaValue::Boundary),
        };
        if a && b {
            let sign = if (q.levi_size() - r.levi_size()).is_multiple_of(2) {
                1
            } else {
                -1
            };
            sum += sign;
        }
    }
    match sum {
        0 => Ok(GammaValue::Zero),
        1 => Ok(GammaValue::One),
        other => Err(Error::Internal(alloc::format!(
            "alternating sum evaluated to {other}; T is probably not dominant"
        ))),
    }
}

/// The points `(T_R)_P^Q`, `P ⊆ R ⊆ Q`, whose hull `Γ_P^Q(·,T)` cuts out.
pub fn hull_points(d: &RootDatum, p: &Parabolic, q: &Parabolic, t: &RationalVector) -> Result<Vec<RationalVector>> {
    require_contained(p, q)?;
    p.interval(q).iter().map(|r| d.project(&d.lower(t, r), p, q)).collect()
}

/// LP oracle: whether `X_P^Q` lies in `cvx (T_R)_P^Q`.
pub fn hull_membership(
    d: &RootDatum,
    p: &Parabolic,
    q: &Parabolic,
    x: &RationalVector,
    t: &RationalVector,
) -> Result<bool> {
    let pts: Vec<Vec<_>> = hull_points(d, p, q, t)?.into_iter().map(|v| v.0).collect();
    let xpq = d.project(x, p, q)?;
    Ok(in_convex_hull(&pts, &xpq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use crate::rootspace::build_root_datum;

    #[test]
    fn rank_one_interval() {
        let d = build_root_datum("A", 1).unwrap();
        let p = Parabolic::minimal(1);
        let g = Parabolic::group(1);
        let t = RationalVector(vec![q(4)]);
        let at = |x: i64| gamma(&d, &p, &g, &RationalVector(vec![q(x)]), &t).unwrap();
        assert_eq!(at(2), GammaValue::One);
        assert_eq!(at(5), GammaValue::Zero);
        assert_eq!(at(-1), GammaValue::Zero);
        assert_eq!(at(0), GammaValue::Boundary);
        assert_eq!(at(4), GammaValue::Boundary);
    }

    #[test]
    fn a2_half_and_double() {
        let d = build_root_datum("A", 2).unwrap();
        let p = Parabolic::minimal(2);
        let g = Parabolic::group(2);
        let t = RationalVector(vec![q(3), q(5)]);
        let half = t.scale(&qf(1, 2));
        let double = t.scale(&q(2));
        assert_eq!(gamma(&d, &p, &g, &half, &t).unwrap(), GammaValue::One);
        assert_eq!(gamma(&d, &p, &g, &double, &t).unwrap(), GammaValue::Zero);
        assert!(hull_membership(&d, &p, &g, &half, &t).unwrap());
        assert!(!hull_membership(&d, &p, &g, &double, &t).unwrap());
    }

    #[test]
    fn equal_parabolics_give_one() {
        let d = build_root_datum("A", 2).unwrap();
        let r = Parabolic::parse(2, "a1").unwrap();
        let x = RationalVector(vec![q(-7), q(2)]);
        let t = RationalVector(vec![q(1), q(1)]);
        assert_eq!(gamma(&d, &r, &r, &x, &t).unwrap(), GammaValue::One);
    }
}

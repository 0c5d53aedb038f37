//! Exact rational scalars and small helpers shared by every module.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used for all combinatorial geometry.
pub type Q = num_rational::BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Error raised when a `"p/q"` string cannot be read as a rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse rational {:?}: {}", self.input, self.reason)
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-1.25"`.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: String::from(s),
        reason,
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err("bad decimal"));
        }
        let mut digits = String::from(if int_digits.is_empty() { "0" } else { int_digits });
        digits.push_str(frac);
        let n: BigInt = digits.parse().map_err(|_| err("bad decimal"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| err("bad integer"))?;
    Ok(Q::from_integer(n))
}

/// Canonical `"p/q"` rendering (`"p"` for integers).
pub fn fmt_q(v: &Q) -> String {
    use alloc::string::ToString;
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        alloc::format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn to_f64(v: &Q) -> f64 {
    if let (Some(n), Some(d)) = (v.numer().to_f64(), v.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Very large numerator/denominator: shift both down before dividing.
    let nb = v.numer().bits() as i64;
    let db = v.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as usize;
    let shift_d = (db - 60).max(0) as usize;
    let n = (v.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (v.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * libm::exp2((shift_n as f64) - (shift_d as f64))
}

/// Closest simple rational to a finite float, via continued fractions.
pub fn from_f64_approx(x: f64, max_den: i64) -> Q {
    if !x.is_finite() {
        return zero();
    }
    let neg = x < 0.0;
    let mut r = libm::fabs(x);
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = libm::floor(r);
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = r - a;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        return zero();
    }
    let v = Q::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -v
    } else {
        v
    }
}

fn isqrt_floor(n: &BigInt) -> BigInt {
    if n.sign() != Sign::Plus {
        return BigInt::zero();
    }
    n.sqrt()
}

/// Exact square root when `v` is the square of a rational.
pub fn sqrt_exact(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let n = isqrt_floor(v.numer());
    let d = isqrt_floor(v.denom());
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Rational `r` with `r <= sqrt(v)`, exact when `v` is a perfect square,
/// and within `1/2^bits` of the true root otherwise.
pub fn sqrt_lower(v: &Q, bits: u32) -> Q {
    if let Some(r) = sqrt_exact(v) {
        return r;
    }
    if !v.is_positive() {
        return zero();
    }
    let scale = BigInt::one() << (bits as usize);
    let scaled = (v * Q::from_integer(&scale * &scale)).floor().to_integer();
    Q::new(isqrt_floor(&scaled), scale)
}

/// Rational `r` with `r >= sqrt(v)`.
pub fn sqrt_upper(v: &Q, bits: u32) -> Q {
    if let Some(r) = sqrt_exact(v) {
        return r;
    }
    if !v.is_positive() {
        return zero();
    }
    let scale = BigInt::one() << (bits as usize);
    let scaled = (v * Q::from_integer(&scale * &scale)).ceil().to_integer();
    let mut s = isqrt_floor(&scaled);
    if &s * &s < scaled {
        s += 1;
    }
    Q::new(s, scale)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn add_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| c * x).collect()
}

pub fn zeros(n: usize) -> Vec<Q> {
    (0..n).map(|_| Q::zero()).collect()
}

pub fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = zeros(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn to_f64_vec(a: &[Q]) -> Vec<f64> {
    a.iter().map(to_f64).collect()
}

pub fn from_ints(a: &[i64]) -> Vec<Q> {
    a.iter().map(|&x| q(x)).collect()
}

/// Scales a nonzero vector so its first nonzero entry is `±1` with the
/// sign preserved; used to compare hyperplanes and directions.
pub fn normalize_direction(a: &[Q]) -> Vec<Q> {
    match a.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let s = lead.abs().recip();
            scale_vec(&s, a)
        }
        None => a.to_vec(),
    }
}

/// Scales a nonzero vector so its first nonzero entry is exactly `1`.
pub fn normalize_line(a: &[Q]) -> Vec<Q> {
    match a.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let s = lead.recip();
            scale_vec(&s, a)
        }
        None => a.to_vec(),
    }
}

/// Point of 𝔞 in simple-coroot coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RationalVector(pub Vec<Q>);

/// Element of 𝔞* in fundamental-weight coordinates, so evaluation on a
/// [`RationalVector`] is a plain dot product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearForm(pub Vec<Q>);

macro_rules! coord_newtype {
    ($t:ident) => {
        impl $t {
            pub fn zero(n: usize) -> Self {
                $t(zeros(n))
            }
            pub fn dim(&self) -> usize {
                self.0.len()
            }
            pub fn from_ints(a: &[i64]) -> Self {
                $t(from_ints(a))
            }
            pub fn is_zero(&self) -> bool {
                is_zero_vec(&self.0)
            }
            pub fn scale(&self, c: &Q) -> Self {
                $t(scale_vec(c, &self.0))
            }
        }
        impl core::ops::Deref for $t {
            type Target = [Q];
            fn deref(&self) -> &[Q] {
                &self.0
            }
        }
        impl core::ops::Add<&$t> for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                $t(add_vec(&self.0, &o.0))
            }
        }
        impl core::ops::Sub<&$t> for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                $t(sub_vec(&self.0, &o.0))
            }
        }
        impl core::ops::Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(self.0.iter().map(|x| -x).collect())
            }
        }
        impl From<Vec<Q>> for $t {
            fn from(v: Vec<Q>) -> Self {
                $t(v)
            }
        }
    };
}

coord_newtype!(RationalVector);
coord_newtype!(LinearForm);

impl LinearForm {
    pub fn eval(&self, x: &RationalVector) -> Q {
        dot(&self.0, &x.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/6").unwrap(), qf(1, 2));
        assert_eq!(parse_q("-7").unwrap(), q(-7));
        assert_eq!(parse_q("-1.25").unwrap(), qf(-5, 4));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert_eq!(fmt_q(&qf(2, -4)), "-1/2");
        assert_eq!(fmt_q(&q(5)), "5");
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = q(2);
        let lo = sqrt_lower(&two, 40);
        let hi = sqrt_upper(&two, 40);
        assert!(&lo * &lo <= two);
        assert!(&hi * &hi >= two);
        assert!(&hi - &lo <= qf(1, 1 << 30));
        assert_eq!(sqrt_lower(&qf(9, 4), 10), qf(3, 2));
        assert_eq!(sqrt_upper(&qf(9, 4), 10), qf(3, 2));
    }

    #[test]
    fn float_round_trip() {
        assert_eq!(to_f64(&qf(1, 4)), 0.25);
        assert_eq!(from_f64_approx(0.75, 1000), qf(3, 4));
        assert_eq!(from_f64_approx(-1.5, 1000), qf(-3, 2));
    }
}

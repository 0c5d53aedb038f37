//! The one-dimensional toy model: `∫_0^T Σ_n f(e^x n) dx` for the Gaussian
//! `f(v) = e^{−πv²}`, which is its own Fourier transform.

use alloc::vec;
use alloc::vec::Vec;

use crate::rational::q;
use crate::rational::LinearForm;
use crate::tfinite::{Poly, TFinite};

/// Lattice sums stop once the remaining tail is provably below this.
pub const TAIL_CUTOFF: f64 = 1e-17;
/// Absolute tolerance requested from the adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-12;
const MAX_DEPTH: u32 = 48;

pub fn gaussian(v: f64) -> f64 {
    libm::exp(-core::f64::consts::PI * v * v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSum {
    pub value: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// `Σ_n e^{−a n²}` for `a > 0`, with an explicit tail bound.
fn gaussian_lattice(a: f64) -> ThetaSum {
    let mut value = 1.0;
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        value += 2.0 * libm::exp(-a * nf * nf);
        // Σ_{m>n} e^{−a m²} ≤ e^{−a(n+1)²} / (1 − e^{−a(2n+3)})
        let next = (n + 1) as f64;
        let tail = 2.0 * libm::exp(-a * next * next) / (1.0 - libm::exp(-a * (2.0 * next + 1.0)));
        if tail < TAIL_CUTOFF {
            return ThetaSum {
                value,
                terms: n,
                tail_bound: tail,
            };
        }
        n += 1;
    }
}

/// `Σ_n f(e^x n)` summed directly.
pub fn theta_direct(x: f64) -> ThetaSum {
    gaussian_lattice(core::f64::consts::PI * libm::exp(2.0 * x))
}

/// `e^{−x} Σ_n f̂(e^{−x} n)`, the Poisson-transformed side.
pub fn theta_transformed(x: f64) -> ThetaSum {
    let s = gaussian_lattice(core::f64::consts::PI * libm::exp(-2.0 * x));
    let k = libm::exp(-x);
    ThetaSum {
        value: k * s.value,
        terms: s.terms,
        tail_bound: k * s.tail_bound,
    }
}

/// `Σ_n f(e^x n)`, using whichever side converges faster.
pub fn theta_1d(x: f64) -> f64 {
    if x >= 0.0 {
        theta_direct(x).value
    } else {
        theta_transformed(x).value
    }
}

/// `Σ_{n≠0} f(e^x n)` for `x ≥ 0`, without the cancellation of `θ − 1`.
fn theta_tail(x: f64) -> f64 {
    theta_direct(x).value - 1.0
}

/// `Σ_{n≠0} e^x f̂(e^x n)` for `x ≥ 0`.
fn theta_tail_weighted(x: f64) -> f64 {
    libm::exp(x) * (theta_direct(x).value - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Adaptive Simpson with Richardson correction over `[a, b]` (signed).
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        };
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut evals = 3;
    let (value, err) = simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut evals);
    Quadrature {
        value,
        error_estimate: err,
        evaluations: evals,
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    evals: &mut usize,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *evals += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || libm::fabs(delta) <= 15.0 * tol {
        return (left + right + delta / 15.0, libm::fabs(delta) / 15.0);
    }
    let (l, le) = simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, evals);
    let (r, re) = simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, evals);
    (l + r, le + re)
}

/// `I(T) = ∫_0^T Σ_n f(e^x n) dx`, signed for `T < 0`.
pub fn truncated_integral(t: f64) -> Quadrature {
    adaptive_simpson(&theta_1d, 0.0, t, QUAD_TOL)
}

/// `E_1(z)` for `z ≥ 1` by its continued fraction, returned as `ln E_1(z)`.
pub fn ln_e1(z: f64) -> f64 {
    // modified Lentz on e^z E_1(z) = 1/(z+1− 1²/(z+3− 2²/(z+5− …)))
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if libm::fabs(del - 1.0) < 1e-16 {
            break;
        }
    }
    -z + libm::log(h)
}

/// `ln erfc(z)` for `z ≥ 0`, accurate where `erfc` itself underflows.
pub fn ln_erfc(z: f64) -> f64 {
    if z < 3.0 {
        return libm::log(libm::erfc(z));
    }
    // erfc z = e^{−z²}/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …))))
    let mut k = z;
    for j in (1..80).rev() {
        k = z + (j as f64 / 2.0) / k;
    }
    -z * z - 0.5 * libm::log(core::f64::consts::PI) - libm::log(k)
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + libm::log(xs.iter().map(|x| libm::exp(x - m)).sum::<f64>())
}

/// Number of lattice terms kept in the closed-form series below; the
/// neglected terms are smaller than the kept ones by `e^{−π·400}`.
const SERIES_TERMS: usize = 20;

/// `C₊` with sum and integral swapped: `Σ_{n≥1} E_1(πn²)`.
pub fn c_plus_series() -> f64 {
    (1..=SERIES_TERMS)
        .map(|n| libm::exp(ln_e1(core::f64::consts::PI * (n * n) as f64)))
        .sum()
}

/// `C₊ = ∫_0^∞ Σ_{n≠0} f(e^x n) dx` by quadrature; the integrand is below
/// `e^{−π e^6}` past `x = 3`.
pub fn c_plus_quadrature() -> Quadrature {
    adaptive_simpson(&theta_tail, 0.0, 4.0, QUAD_TOL)
}

/// `C₋` swapped: `Σ_{n≥1} erfc(√π n)/n`.
pub fn c_minus_series() -> f64 {
    let sp = libm::sqrt(core::f64::consts::PI);
    (1..=SERIES_TERMS)
        .map(|n| libm::exp(ln_erfc(sp * n as f64)) / n as f64)
        .sum()
}

/// `C₋ = ∫_0^∞ Σ_{n≠0} e^x f̂(e^x n) dx` by quadrature.
pub fn c_minus_quadrature() -> Quadrature {
    adaptive_simpson(&theta_tail_weighted, 0.0, 4.0, QUAD_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

/// Predicted profile as a t-finite function of `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitProfile {
    pub branch: Branch,
    pub function: TFinite<f64>,
    pub constant: f64,
    /// `f(0)` for the plus branch, `f̂(0)` for the minus branch.
    pub leading: f64,
}

impl LimitProfile {
    pub fn eval(&self, t: f64) -> f64 {
        self.function.eval(&[t]).value()
    }
}

/// Plus branch: `T f(0) + C₊`. Minus branch: `(e^{−T} − 1) f̂(0) + C₋`.
pub fn limit_profile(branch: Branch) -> LimitProfile {
    let lead = gaussian(0.0);
    match branch {
        Branch::Plus => {
            let c = c_plus_series();
            let function = TFinite::from_term(LinearForm(vec![q(0)]), Poly::affine(&[lead], c));
            LimitProfile {
                branch,
                function,
                constant: c,
                leading: lead,
            }
        }
        Branch::Minus => {
            let c = c_minus_series();
            let mut function = TFinite::from_term(LinearForm(vec![q(-1)]), Poly::constant(1, lead));
            function.add_term(LinearForm(vec![q(0)]), Poly::constant(1, c - lead));
            LimitProfile {
                branch,
                function,
                constant: c,
                leading: lead,
            }
        }
    }
}

/// `ln |I(T) − profile(T)|` from the closed form of the neglected tail.
///
/// Plus branch (`T > 0`): the gap is `Σ_{n≥1} E_1(πn²e^{2T})`.
/// Minus branch (`T < 0`, integral taken from `T` up to `0`): the gap is
/// `Σ_{n≥1} erfc(√π n e^{|T|})/n`.
pub fn log_residual(branch: Branch, t: f64) -> f64 {
    let pi = core::f64::consts::PI;
    let terms: Vec<f64> = (1..=SERIES_TERMS)
        .map(|n| {
            let nf = n as f64;
            match branch {
                Branch::Plus => ln_e1(pi * nf * nf * libm::exp(2.0 * t)),
                Branch::Minus => ln_erfc(libm::sqrt(pi) * nf * libm::exp(libm::fabs(t))) - libm::log(nf),
            }
        })
        .collect();
    log_sum_exp(&terms)
}

/// One sample of the toy experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyRow {
    pub t: f64,
    /// Quadrature value, oriented to match the branch's profile.
    pub integral: f64,
    pub error_estimate: f64,
    pub profile: f64,
    /// `I(T) − profile(T)` in floating point (rounding-limited).
    pub residual: f64,
    /// `ln` of the exact gap, from [`log_residual`].
    pub log_residual: f64,
}

/// For the minus branch `T` is given as a magnitude and the integral runs
/// over `[−T, 0]`.
pub fn toy_row(branch: Branch, t: f64) -> ToyRow {
    let prof = limit_profile(branch);
    let (integral, err, tt) = match branch {
        Branch::Plus => {
            let qd = truncated_integral(t);
            (qd.value, qd.error_estimate, t)
        }
        Branch::Minus => {
            let tt = -libm::fabs(t);
            let qd = truncated_integral(tt);
            (-qd.value, qd.error_estimate, tt)
        }
    };
    let profile = prof.eval(tt);
    ToyRow {
        t: tt,
        integral,
        error_estimate: err,
        profile,
        residual: integral - profile,
        log_residual: log_residual(branch, tt),
    }
}

/// Which orientation of the negative-`T` integral matches the stated
/// profile `(e^{−T} − 1) f̂(0) + C₋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignConventions {
    pub t: f64,
    /// `∫_0^T` with `T < 0`, signed.
    pub signed: f64,
    /// `∫_T^0`.
    pub reversed: f64,
    pub profile: f64,
    pub reversed_matches: bool,
    pub signed_matches: bool,
}

pub fn sign_conventions(t: f64, tol: f64) -> SignConventions {
    let tt = -libm::fabs(t);
    let signed = truncated_integral(tt).value;
    let profile = limit_profile(Branch::Minus).eval(tt);
    SignConventions {
        t: tt,
        signed,
        reversed: -signed,
        profile,
        reversed_matches: libm::fabs(-signed - profile) <= tol,
        signed_matches: libm::fabs(signed - profile) <= tol,
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfinite::constant_term;

    #[test]
    fn theta_values() {
        assert!((theta_1d(0.0) - 1.086_434_811_213_308).abs() < 1e-14);
        let d = theta_direct(1.0).value;
        let t = theta_transformed(1.0).value;
        assert!((d - t).abs() < 1e-10);
        assert!((theta_direct(-1.5).value - theta_transformed(-1.5).value).abs() < 1e-10);
        assert!((theta_1d(10.0) - 1.0).abs() < 1e-300);
        assert!(theta_direct(0.0).tail_bound < TAIL_CUTOFF);
    }

    #[test]
    fn integral_basics() {
        assert_eq!(truncated_integral(0.0).value, 0.0);
        let mut last = 0.0;
        for k in 1..8 {
            let v = truncated_integral(k as f64 * 0.5).value;
            assert!(v > last);
            last = v;
        }
        let n = 200_000;
        let h = 3.0 / n as f64;
        let riemann: f64 = (0..n).map(|i| theta_1d((i as f64 + 0.5) * h)).sum::<f64>() * h;
        assert!((truncated_integral(3.0).value - riemann).abs() < 1e-8);
    }

    #[test]
    fn constants_two_ways() {
        let cq = c_plus_quadrature();
        assert!(
            (cq.value - c_plus_series()).abs() < 1e-9,
            "{} {}",
            cq.value,
            c_plus_series()
        );
        assert!((c_minus_quadrature().value - c_minus_series()).abs() < 1e-9);
        let prof = limit_profile(Branch::Plus);
        assert_eq!(prof.leading, 1.0);
        assert_eq!(constant_term(&prof.function, &[0.0]), prof.constant);
    }

    #[test]
    fn special_functions() {
        // E_1(1) and erfc(2)
        assert!((libm::exp(ln_e1(1.0)) - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((libm::exp(ln_erfc(3.5)) - libm::erfc(3.5)).abs() / libm::erfc(3.5) < 1e-12);
        assert!((ln_erfc(2.9) - libm::log(libm::erfc(2.9))).abs() < 1e-12);
    }

    #[test]
    fn plus_branch_approach() {
        let r3 = toy_row(Branch::Plus, 3.0);
        let r5 = toy_row(Branch::Plus, 5.0);
        assert!(r5.log_residual < r3.log_residual);
        assert!(toy_row(Branch::Plus, 6.0).residual.abs() < 1e-6);
        let r1 = toy_row(Branch::Plus, 0.5);
        assert!((r1.residual.abs().ln() - r1.log_residual).abs() < 1e-3);
    }

    #[test]
    fn minus_branch_orientation() {
        let s = sign_conventions(3.0, 1e-6);
        assert!(s.reversed_matches);
        assert!(!s.signed_matches);
        let r = toy_row(Branch::Minus, 0.5);
        assert!((r.residual.abs().ln() - r.log_residual).abs() < 1e-3);
    }
}

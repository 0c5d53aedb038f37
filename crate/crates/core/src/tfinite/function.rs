use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{check_dim, Result};
use crate::rational::{add_vec, to_f64, LinearForm};

use super::poly::{Coeff, Poly};

/// `Σ_λ p_λ(x) e^{λ(x)}` in canonical form: distinct exponents, no zero
/// polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct TFinite<C: Coeff> {
    pub nvars: usize,
    pub terms: BTreeMap<LinearForm, Poly<C>>,
}

/// Result of a floating-point evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TfEval {
    Finite(f64),
    /// `|f(x)| = e^{log_abs}` exceeds the float range.
    Overflow {
        positive: bool,
        log_abs: f64,
    },
}

impl TfEval {
    pub fn value(self) -> f64 {
        match self {
            TfEval::Finite(v) => v,
            TfEval::Overflow { positive: true, .. } => f64::INFINITY,
            TfEval::Overflow { positive: false, .. } => f64::NEG_INFINITY,
        }
    }
}

impl<C: Coeff> TFinite<C> {
    pub fn zero(nvars: usize) -> Self {
        TFinite {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::from_term(LinearForm::zero(nvars), Poly::constant(nvars, c))
    }

    pub fn from_term(exponent: LinearForm, p: Poly<C>) -> Self {
        let mut f = Self::zero(p.nvars);
        f.add_term(exponent, p);
        f
    }

    /// `e^{λ(x)}`.
    pub fn exp(exponent: LinearForm) -> Self {
        let n = exponent.dim();
        Self::from_term(exponent, Poly::constant(n, C::one()))
    }

    pub fn add_term(&mut self, exponent: LinearForm, p: Poly<C>) {
        debug_assert_eq!(exponent.dim(), self.nvars);
        let merged = match self.terms.remove(&exponent) {
            Some(old) => old.add(&p),
            None => p,
        };
        if !merged.is_zero() {
            self.terms.insert(exponent, merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        check_dim(self.nvars, o.nvars)?;
        let mut out = self.clone();
        for (e, p) in &o.terms {
            out.add_term(e.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TFinite {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, p)| (e.clone(), p.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, p) in &self.terms {
            out.add_term(e.clone(), p.scale(s));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        check_dim(self.nvars, o.nvars)?;
        let mut out = Self::zero(self.nvars);
        for (e1, p1) in &self.terms {
            for (e2, p2) in &o.terms {
                out.add_term(LinearForm(add_vec(e1, e2)), p1.mul(p2));
            }
        }
        Ok(out)
    }

    /// Largest polynomial degree attached to exponent `λ = 0` and to `λ ≠ 0`.
    pub fn degrees(&self) -> (u32, u32) {
        let mut zero_deg = 0;
        let mut other = 0;
        for (e, p) in &self.terms {
            if e.is_zero() {
                zero_deg = zero_deg.max(p.degree());
            } else {
                other = other.max(p.degree());
            }
        }
        (zero_deg, other)
    }

    pub fn polynomial_part(&self) -> Poly<C> {
        self.terms
            .get(&LinearForm::zero(self.nvars))
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// Numerically stable evaluation; exponents above the float range are
    /// handled by factoring out the largest one.
    pub fn eval(&self, x: &[f64]) -> TfEval {
        if self.terms.is_empty() {
            return TfEval::Finite(0.0);
        }
        let parts: Vec<(f64, f64)> = self
            .terms
            .iter()
            .map(|(e, p)| {
                let lam: f64 = e.iter().zip(x).map(|(c, xi)| to_f64(c) * xi).sum();
                (lam, p.eval_f64(x))
            })
            .collect();
        let m = parts
            .iter()
            .filter(|(_, v)| *v != 0.0)
            .map(|(l, _)| *l)
            .fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return TfEval::Finite(0.0);
        }
        if m <= 700.0 {
            let mut terms: Vec<f64> = parts.iter().map(|(l, v)| v * libm::exp(*l)).collect();
            terms.sort_by(|a, b| libm::fabs(*a).total_cmp(&libm::fabs(*b)));
            return TfEval::Finite(terms.iter().sum());
        }
        let s: f64 = parts.iter().map(|(l, v)| v * libm::exp(l - m)).sum();
        if s == 0.0 {
            return TfEval::Finite(0.0);
        }
        let log_abs = m + libm::log(libm::fabs(s));
        if log_abs < 709.0 {
            TfEval::Finite(s * libm::exp(m))
        } else {
            TfEval::Overflow {
                positive: s > 0.0,
                log_abs,
            }
        }
    }

    pub fn to_f64(&self) -> TFinite<f64> {
        TFinite {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, p)| (e.clone(), p.to_f64_poly())).collect(),
        }
    }
}

/// Constant term about `base`: writing `x = base + y`, the coefficient of
/// the term with `λ = 0` and degree 0 in `y`, which is `p_0(base)`.
pub fn constant_term<C: Coeff>(f: &TFinite<C>, base: &[C]) -> C {
    f.polynomial_part().eval(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf, Q};

    fn lam(v: &[i64]) -> LinearForm {
        LinearForm::from_ints(v)
    }

    #[test]
    fn identities() {
        let f = TFinite::<Q>::exp(lam(&[2]));
        let g = TFinite::<Q>::exp(lam(&[-2]));
        assert_eq!(f.mul(&g).unwrap(), TFinite::constant(1, q(1)));
        assert_eq!(f.add(&TFinite::zero(1)).unwrap(), f);
        let x = TFinite::<Q>::from_term(lam(&[0]), Poly::var(1, 0));
        let xex = TFinite::from_term(lam(&[1]), Poly::var(1, 0));
        let prod = xex.mul(&x).unwrap();
        assert_eq!(prod.terms[&lam(&[1])].degree(), 2);
        assert!(TFinite::<Q>::zero(1).mul(&TFinite::zero(2)).is_err());
    }

    #[test]
    fn constant_terms() {
        let seven = TFinite::constant(1, q(7));
        assert_eq!(constant_term(&seven, &[q(3)]), q(7));
        let x = TFinite::from_term(lam(&[0]), Poly::var(1, 0));
        assert_eq!(constant_term(&x, &[qf(5, 2)]), qf(5, 2));
        let em1 = TFinite::exp(lam(&[1])).sub(&TFinite::constant(1, q(1))).unwrap();
        assert_eq!(constant_term(&em1, &[q(0)]), q(-1));
        assert_eq!(em1.eval(&[0.0]), TfEval::Finite(0.0));
    }

    #[test]
    fn overflow_reported() {
        let f = TFinite::<Q>::exp(lam(&[1])).neg();
        match f.eval(&[2000.0]) {
            TfEval::Overflow { positive, log_abs } => {
                assert!(!positive);
                assert!((log_abs - 2000.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        // Large but cancelling exponents still evaluate.
        let g = TFinite::<Q>::exp(lam(&[1])).mul(&TFinite::exp(lam(&[-1]))).unwrap();
        assert_eq!(g.eval(&[800.0]), TfEval::Finite(1.0));
        let h = TFinite::<Q>::exp(lam(&[1])).scale(&q(2));
        let TfEval::Finite(v) = h.eval(&[701.0]) else { panic!() };
        assert!((v / (2.0 * 701f64.exp()) - 1.0).abs() < 1e-12);
    }
}

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::{to_f64, LinearForm};

use super::poly::{monomials, Poly};
use super::TFinite;

/// Condition estimate above which the solve is ridge-regularised.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: TFinite<f64>,
    /// Largest absolute residual over the samples.
    pub max_residual: f64,
    /// Ratio of extreme `|R_ii|` from the QR factorisation (column-scaled).
    pub condition: f64,
    pub regularized: bool,
}

/// Least-squares fit of `Σ_λ p_λ(x) e^{λ(x)}` with `deg p_λ ≤ max_degree`.
pub fn fit_tfinite(samples: &[(Vec<f64>, f64)], exponents: &[LinearForm], max_degree: u32) -> Result<FitReport> {
    let nvars = exponents
        .first()
        .map(|e| e.dim())
        .or_else(|| samples.first().map(|s| s.0.len()))
        .unwrap_or(0);
    let monos = monomials(nvars, max_degree);
    let cols: Vec<(usize, &Vec<u32>)> = (0..exponents.len())
        .flat_map(|e| monos.iter().map(move |m| (e, m)))
        .collect();
    let k = cols.len();
    if samples.len() < 2 * k {
        return Err(Error::InvalidArgument(format!(
            "{} samples for a model of dimension {k}; need at least {}",
            samples.len(),
            2 * k
        )));
    }
    let lam: Vec<Vec<f64>> = exponents.iter().map(|e| e.iter().map(to_f64).collect()).collect();
    let mut a: Vec<Vec<f64>> = samples
        .iter()
        .map(|(x, _)| {
            cols.iter()
                .map(|(e, m)| {
                    let ex: f64 = lam[*e].iter().zip(x).map(|(l, xi)| l * xi).sum();
                    let mono: f64 = m.iter().zip(x).map(|(&p, xi)| libm::pow(*xi, p as f64)).product();
                    mono * libm::exp(ex)
                })
                .collect()
        })
        .collect();
    let b: Vec<f64> = samples.iter().map(|s| s.1).collect();
    // Column scaling so the condition estimate reflects geometry, not units.
    let scale: Vec<f64> = (0..k)
        .map(|j| {
            let n = libm::sqrt(a.iter().map(|r| r[j] * r[j]).sum::<f64>());
            if n > 0.0 {
                n
            } else {
                1.0
            }
        })
        .collect();
    for r in a.iter_mut() {
        for j in 0..k {
            r[j] /= scale[j];
        }
    }
    let (mut coef, condition) = least_squares(&a, &b);
    let mut regularized = false;
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        regularized = true;
        let eta = 1e-10;
        let mut aug = a.clone();
        let mut baug = b.clone();
        for j in 0..k {
            let mut row = vec![0.0; k];
            row[j] = eta;
            aug.push(row);
            baug.push(0.0);
        }
        coef = least_squares(&aug, &baug).0;
    }
    let mut model = TFinite::zero(nvars);
    for ((e, m), (c, s)) in cols.iter().zip(coef.iter().zip(&scale)) {
        let mut p = Poly::zero(nvars);
        p.add_term((*m).clone(), c / s);
        model.add_term(exponents[*e].clone(), p);
    }
    let max_residual = samples
        .iter()
        .map(|(x, y)| libm::fabs(model.eval(x).value() - y))
        .fold(0.0, f64::max);
    Ok(FitReport {
        model,
        max_residual,
        condition,
        regularized,
    })
}

/// Householder QR least squares; returns the solution and `max|R_ii|/min|R_ii|`.
fn least_squares(a: &[Vec<f64>], b: &[f64]) -> (Vec<f64>, f64) {
    let m = a.len();
    let n = a[0].len();
    let mut r: Vec<Vec<f64>> = a.to_vec();
    let mut y = b.to_vec();
    for j in 0..n {
        let norm = libm::sqrt((j..m).map(|i| r[i][j] * r[i][j]).sum::<f64>());
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| r[i][j]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in j..n {
            let dotp: f64 = (j..m).map(|i| v[i - j] * r[i][c]).sum();
            let f = 2.0 * dotp / vnorm2;
            for i in j..m {
                r[i][c] -= f * v[i - j];
            }
        }
        let dotp: f64 = (j..m).map(|i| v[i - j] * y[i]).sum();
        let f = 2.0 * dotp / vnorm2;
        for i in j..m {
            y[i] -= f * v[i - j];
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| libm::fabs(r[i][i])).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if dmin == 0.0 { f64::INFINITY } else { dmax / dmin };
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        if r[i][i] == 0.0 {
            continue;
        }
        let s: f64 = (i + 1..n).map(|c| r[i][c] * x[c]).sum();
        x[i] = (y[i] - s) / r[i][i];
    }
    (x, cond)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(f: impl Fn(f64) -> f64) -> Vec<(Vec<f64>, f64)> {
        (0..40)
            .map(|i| {
                let x = i as f64 / 20.0;
                (vec![x], f(x))
            })
            .collect()
    }

    #[test]
    fn recovers_constant() {
        let r = fit_tfinite(&grid(|_| 3.0), &[LinearForm::from_ints(&[0])], 0).unwrap();
        assert!(r.max_residual < 1e-13);
        let p = &r.model.terms[&LinearForm::from_ints(&[0])];
        assert!((p.terms[&vec![0]] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn recovers_x_exp_2x() {
        let lams: Vec<LinearForm> = [0, 1, 2].iter().map(|&k| LinearForm::from_ints(&[k])).collect();
        let r = fit_tfinite(&grid(|x| x * (2.0 * x).exp()), &lams, 1).unwrap();
        assert!(r.max_residual <= 1e-9, "{}", r.max_residual);
    }

    #[test]
    fn detects_mismatch() {
        let lams: Vec<LinearForm> = [0, 1, 2].iter().map(|&k| LinearForm::from_ints(&[k])).collect();
        let samples: Vec<(Vec<f64>, f64)> = (0..40)
            .map(|i| {
                let x = i as f64 / 4.0;
                (vec![x], (core::f64::consts::SQRT_2 * x).exp())
            })
            .collect();
        let r = fit_tfinite(&samples, &lams, 0).unwrap();
        assert!(r.max_residual > 1e-3, "{}", r.max_residual);
    }

    #[test]
    fn too_few_samples() {
        let s = vec![(vec![0.0], 1.0)];
        assert!(fit_tfinite(&s, &[LinearForm::from_ints(&[0])], 0).is_err());
    }
}

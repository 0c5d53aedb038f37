//! Floating-point oracles for `∫_P e^{μ(v)} dv`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::Result;
use crate::rational::{to_f64, to_f64_vec, Q};

use super::faces::triangulation;
use super::VPolytope;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpIntegral {
    pub value: f64,
    /// Set when the polytope is lower-dimensional and the value is 0.
    pub degenerate: bool,
}

/// `exp[a_0, …, a_k]`, the divided difference of `exp` at the given nodes.
///
/// Sub-blocks with spread at most 1 use the series
/// `e^c Σ_m h_m(a − c)/(m + k)!`; wider blocks use the recurrence, whose
/// denominator is then at least 1.
pub fn exp_divided_difference(nodes: &[f64]) -> f64 {
    let mut a = nodes.to_vec();
    a.sort_by(f64::total_cmp);
    let mut memo = BTreeMap::new();
    dd(&a, 0, a.len() - 1, &mut memo)
}

fn dd(a: &[f64], i: usize, j: usize, memo: &mut BTreeMap<(usize, usize), f64>) -> f64 {
    if let Some(&v) = memo.get(&(i, j)) {
        return v;
    }
    let v = if i == j {
        libm::exp(a[i])
    } else if a[j] - a[i] <= 1.0 {
        dd_series(&a[i..=j])
    } else {
        (dd(a, i + 1, j, memo) - dd(a, i, j - 1, memo)) / (a[j] - a[i])
    };
    memo.insert((i, j), v);
    v
}

fn dd_series(a: &[f64]) -> f64 {
    let k = a.len() - 1;
    let c = a.iter().sum::<f64>() / a.len() as f64;
    let y: Vec<f64> = a.iter().map(|x| x - c).collect();
    let mut inv_fact = 1.0;
    for i in 2..=k {
        inv_fact /= i as f64;
    }
    let r = y.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    // |h_m(y)| / (m+k)! ≤ r^m / (m! k!)
    let mut bound = inv_fact;
    let mut prev = alloc::vec![1.0; k + 1];
    let mut sum = inv_fact;
    for m in 1..400 {
        let mut cur = alloc::vec![0.0; k + 1];
        cur[0] = y[0] * prev[0];
        for t in 1..=k {
            cur[t] = cur[t - 1] + y[t] * prev[t];
        }
        inv_fact /= (m + k) as f64;
        let term = cur[k] * inv_fact;
        sum += term;
        prev = cur;
        bound *= r / m as f64;
        if bound <= 1e-18 * libm::fabs(sum) {
            break;
        }
    }
    libm::exp(c) * sum
}

fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| libm::fabs(m[x][c]).total_cmp(&libm::fabs(m[y][c])))
            .unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    d
}

/// `∫_simplex e^{μ(v)} dv` with the simplex volume taken exactly.
pub fn simplex_exp_integral(pts: &[Vec<Q>], mu: &[f64]) -> f64 {
    let d = pts.len() - 1;
    let m: Vec<Vec<Q>> = pts[1..].iter().map(|p| crate::rational::sub_vec(p, &pts[0])).collect();
    // |det| = d! · vol
    let absdet = if d == 0 {
        1.0
    } else {
        libm::fabs(to_f64(&crate::linalg::det(&m)))
    };
    let nodes: Vec<f64> = pts
        .iter()
        .map(|p| to_f64_vec(p).iter().zip(mu).map(|(x, m)| x * m).sum())
        .collect();
    absdet * exp_divided_difference(&nodes)
}

/// Simplicial-decomposition oracle for `∫_P e^{μ(v)} dv`.
pub fn integrate_exp_oracle(poly: &VPolytope, mu: &[f64]) -> Result<ExpIntegral> {
    crate::error::check_dim(poly.dim, mu.len())?;
    if !poly.is_full_dimensional() {
        return Ok(ExpIntegral {
            value: 0.0,
            degenerate: true,
        });
    }
    let mut terms: Vec<f64> = triangulation(poly)?
        .iter()
        .map(|s| simplex_exp_integral(s, mu))
        .collect();
    terms.sort_by(f64::total_cmp);
    Ok(ExpIntegral {
        value: terms.iter().sum(),
        degenerate: false,
    })
}

fn unit_f64(rng: &mut impl RngCore) -> f64 {
    // 53 random bits in (0, 1).
    ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
}

/// Monte Carlo estimate `(mean, standard error)` over a triangulation.
pub fn monte_carlo_exp(poly: &VPolytope, mu: &[f64], samples: usize, rng: &mut impl RngCore) -> Result<(f64, f64)> {
    let simplices = triangulation(poly)?;
    if simplices.is_empty() {
        return Ok((0.0, 0.0));
    }
    let pts: Vec<Vec<Vec<f64>>> = simplices
        .iter()
        .map(|s| s.iter().map(|p| to_f64_vec(p)).collect())
        .collect();
    let vols: Vec<f64> = pts
        .iter()
        .map(|s| {
            let m: Vec<Vec<f64>> = s[1..]
                .iter()
                .map(|p| p.iter().zip(&s[0]).map(|(a, b)| a - b).collect())
                .collect();
            libm::fabs(det_f64(m))
        })
        .collect();
    let mut fact = 1.0;
    for k in 2..=poly.dim {
        fact *= k as f64;
    }
    let total: f64 = vols.iter().sum::<f64>() / fact;
    let d = poly.dim;
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let mut r = unit_f64(rng) * vols.iter().sum::<f64>();
        let mut which = 0;
        while which + 1 < vols.len() && r > vols[which] {
            r -= vols[which];
            which += 1;
        }
        // Uniform barycentric weights from normalized exponential spacings.
        let e: Vec<f64> = (0..=d).map(|_| -libm::log(unit_f64(rng))).collect();
        let es: f64 = e.iter().sum();
        let mut x = alloc::vec![0.0; d];
        for (w, p) in e.iter().zip(&pts[which]) {
            for (xi, pi) in x.iter_mut().zip(p) {
                *xi += w / es * pi;
            }
        }
        let f = libm::exp(x.iter().zip(mu).map(|(a, b)| a * b).sum());
        s1 += f;
        s2 += f * f;
    }
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0);
    Ok((mean * total, libm::sqrt(var / n) * total))
}

//! Parametric polytopes `P(x) = {v : μ_i(v) + x_i ≥ 0}`, their vertex maps
//! `s_σ`, chambers, the exponential-sum formula and its `μ → 0` limit.
//!
//! Integrals use the convention `∫_{P(x)} e^{−μ(v)} dv`, so an interval
//! `[0, x]` with `μ(v) = m v` gives `(1 − e^{−m x})/m`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{det, inverse, rank, solve_unique, vec_mat, Matrix};
use crate::lp::{Lp, Rel};
use crate::polyhedra::{next_combination, HPolyhedron};
use crate::rational::{dot, q, qf, to_f64, LinearForm, Q};
use crate::tfinite::{Poly, TFinite};

#[derive(Debug, Clone, PartialEq)]
pub struct ParametricPolyhedron {
    /// `μ_1..μ_N` as forms on `V = Q^n`.
    pub normals: Vec<Vec<Q>>,
    pub dim: usize,
}

/// One `σ ∈ 𝓑`: the complement indexes a basis of `V*`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisData {
    pub sigma: Vec<usize>,
    pub complement: Vec<usize>,
    /// Columns are the dual basis `u_{i,σ}`, in complement order.
    pub dual: Matrix,
    /// `s_σ` as an `n × N` matrix acting on offsets.
    pub vertex_map: Matrix,
    /// `vol{Σ t_i u_{i,σ} : 0 ≤ t_i ≤ 1} = 1/|det M|`.
    pub box_volume: Q,
}

impl BasisData {
    pub fn vertex(&self, x: &[Q]) -> Vec<Q> {
        self.vertex_map.iter().map(|r| dot(r, x)).collect()
    }

    pub fn dual_vector(&self, k: usize) -> Vec<Q> {
        self.dual.iter().map(|r| r[k].clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChamberData {
    pub bases: Vec<BasisData>,
}

/// The set `Σ_x` (indices into [`ChamberData::bases`]) and whether its cone
/// has interior, i.e. is a maximal chamber rather than a wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub members: Vec<usize>,
    pub maximal: bool,
}

impl ParametricPolyhedron {
    pub fn new(normals: Vec<Vec<Q>>) -> Result<Self> {
        let dim = normals.first().map(|n| n.len()).unwrap_or(0);
        for n in &normals {
            check_dim(dim, n.len())?;
        }
        Ok(ParametricPolyhedron { normals, dim })
    }

    pub fn n_constraints(&self) -> usize {
        self.normals.len()
    }

    pub fn at(&self, x: &[Q]) -> HPolyhedron {
        let mut h = HPolyhedron::new(self.dim);
        for (n, xi) in self.normals.iter().zip(x) {
            h.push(n.clone(), xi.clone());
        }
        h
    }

    /// Whether the row `j` of `C(σ)`: `μ_j(s_σ(x)) + x_j ≥ 0` as a form in `x`.
    fn cone_row(&self, b: &BasisData, j: usize) -> Vec<Q> {
        let mut r = vec_mat(&self.normals[j], &b.vertex_map);
        r[j] += Q::one();
        r
    }
}

/// `enumerate_bases(pp)`.
pub fn enumerate_bases(pp: &ParametricPolyhedron) -> Result<ChamberData> {
    let n = pp.dim;
    let big_n = pp.n_constraints();
    if n == 0 || rank(&pp.normals) < n {
        return Err(Error::InvalidArgument("normals do not span the dual space".into()));
    }
    let mut bases = Vec::new();
    let mut comp: Vec<usize> = (0..n).collect();
    loop {
        let m: Matrix = comp.iter().map(|&i| pp.normals[i].clone()).collect();
        let dm = det(&m);
        if !dm.is_zero() {
            let minv = inverse(&m).expect("nonzero determinant");
            let mut vertex_map: Matrix = (0..n).map(|_| crate::rational::zeros(big_n)).collect();
            for (k, &c) in comp.iter().enumerate() {
                for r in 0..n {
                    vertex_map[r][c] = -minv[r][k].clone();
                }
            }
            let sigma: Vec<usize> = (0..big_n).filter(|i| !comp.contains(i)).collect();
            bases.push(BasisData {
                sigma,
                complement: comp.clone(),
                dual: minv,
                vertex_map,
                box_volume: dm.abs().recip(),
            });
        }
        if !next_combination(&mut comp, big_n) {
            break;
        }
    }
    Ok(ChamberData { bases })
}

impl ChamberData {
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn find(&self, sigma: &[usize]) -> Option<usize> {
        self.bases.iter().position(|b| b.sigma == sigma)
    }
}

/// `chamber_of(pp, x)`: `Σ_x = {σ : s_σ(x) ∈ P(x)}`.
pub fn chamber_of(pp: &ParametricPolyhedron, data: &ChamberData, x: &[Q]) -> Result<Chamber> {
    check_dim(pp.n_constraints(), x.len())?;
    let h = pp.at(x);
    if !h.is_feasible() {
        return Err(Error::Infeasible);
    }
    let members: Vec<usize> = data
        .bases
        .iter()
        .enumerate()
        .filter(|(_, b)| h.contains(&b.vertex(x)))
        .map(|(i, _)| i)
        .collect();
    // A simple P(x) keeps Σ_x locally constant, so x is already interior.
    let simple = members.iter().all(|&m| {
        let v = data.bases[m].vertex(x);
        h.tight_set(&v).len() == pp.dim
    });
    let maximal = simple || cone_has_interior(pp, data, &members);
    Ok(Chamber { members, maximal })
}

/// A maximal chamber whose closure contains `x`. Off walls this is
/// [`chamber_of`]; on a wall the offsets are pushed along a moment-curve
/// direction until the chamber is maximal and all its bases are in `Σ_x`,
/// which certifies `x ∈ C_Σ`. Both formulas extend to `x` by continuity.
pub fn chamber_near(pp: &ParametricPolyhedron, data: &ChamberData, x: &[Q]) -> Result<Chamber> {
    let at = chamber_of(pp, data, x)?;
    if at.maximal {
        return Ok(at);
    }
    let big_n = pp.n_constraints();
    for k in 2i64..64 {
        let mut dir = alloc::vec![Q::one(); big_n];
        for i in 1..big_n {
            dir[i] = &dir[i - 1] * q(k);
        }
        let mut scale = Q::one();
        for _ in 0..64 {
            let y: Vec<Q> = x.iter().zip(&dir).map(|(a, d)| a + d * &scale).collect();
            if let Ok(ch) = chamber_of(pp, data, &y) {
                if ch.maximal && ch.members.iter().all(|m| at.members.contains(m)) {
                    return Ok(ch);
                }
            }
            scale *= qf(1, 2);
        }
    }
    Err(Error::Internal("no maximal chamber found next to a wall point".into()))
}

fn require_maximal(chamber: &Chamber) -> Result<()> {
    if chamber.maximal {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "the chamber is a wall; pass the result of chamber_near".into(),
        ))
    }
}

/// Exact LP test that `C_Σ = ∩_{σ∈Σ} C(σ)` has interior in offset space.
fn cone_has_interior(pp: &ParametricPolyhedron, data: &ChamberData, members: &[usize]) -> bool {
    let big_n = pp.n_constraints();
    let mut rows: BTreeSet<Vec<Q>> = BTreeSet::new();
    for &m in members {
        let b = &data.bases[m];
        for &j in &b.sigma {
            let r = pp.cone_row(b, j);
            // scale to a unit leading entry so repeated rows collapse
            if let Some(lead) = r.iter().find(|c| !c.is_zero()) {
                let s = lead.abs().recip();
                rows.insert(r.iter().map(|c| c * &s).collect());
            } else {
                return false;
            }
        }
    }
    if rows.is_empty() {
        return true;
    }
    let mut lp = Lp::new(big_n + 1);
    for mut r in rows {
        r.push(-Q::one());
        lp.add(r, Rel::Ge, Q::zero());
    }
    let mut t = crate::rational::zeros(big_n + 1);
    t[big_n] = Q::one();
    lp.add(t.clone(), Rel::Le, Q::one());
    lp.maximize(t);
    match lp.solve() {
        crate::lp::LpOutcome::Optimal { value, .. } => value.is_positive(),
        _ => false,
    }
}

/// `same_chamber(pp, x, y)`: every vertex of `P(x)`, transported along its
/// tight set to offsets `y`, is a single extreme point of `P(y)`, and the
/// vertex counts agree.
pub fn same_chamber(pp: &ParametricPolyhedron, x: &[Q], y: &[Q]) -> Result<bool> {
    let hx = pp.at(x);
    let hy = pp.at(y);
    let vx = hx.vertices()?;
    let vy = hy.vertices()?;
    if vx.len() != vy.len() {
        return Ok(false);
    }
    let n = pp.dim;
    for v in &vx.vertices {
        let tight: Vec<usize> = hx.tight_set(v).into_iter().collect();
        let a: Matrix = tight.iter().map(|&i| pp.normals[i].clone()).collect();
        let b: Vec<Q> = tight.iter().map(|&i| -y[i].clone()).collect();
        match solve_unique(&a, &b, n) {
            Some(w) if hy.contains(&w) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Closed-form value of `∫_{P(x)} e^{−μ(v)} dv` on a chamber: a sum of
/// exponentials of linear forms in `x` with rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct BvIntegral {
    pub function: TFinite<Q>,
    pub value: f64,
}

/// `bv_integral(pp, chamber, x, μ)` for generic `μ`.
pub fn bv_integral(
    pp: &ParametricPolyhedron,
    data: &ChamberData,
    chamber: &Chamber,
    x: &[Q],
    mu: &[Q],
) -> Result<BvIntegral> {
    check_dim(pp.dim, mu.len())?;
    require_maximal(chamber)?;
    let big_n = pp.n_constraints();
    let mut f = TFinite::<Q>::zero(big_n);
    for &m in &chamber.members {
        let b = &data.bases[m];
        let mut denom = Q::one();
        for k in 0..pp.dim {
            let mu_u = dot(mu, &b.dual_vector(k));
            if mu_u.is_zero() {
                return Err(Error::NonGeneric(format!(
                    "μ vanishes on a dual basis vector of σ = {:?}; use the limit form",
                    b.sigma
                )));
            }
            denom *= mu_u;
        }
        // −μ(s_σ(x)) as a form in x
        let expo: Vec<Q> = vec_mat(mu, &b.vertex_map).iter().map(|c| -c).collect();
        let coeff = &b.box_volume / denom;
        f.add_term(LinearForm(expo), Poly::constant(big_n, coeff));
    }
    let xf: Vec<f64> = x.iter().map(to_f64).collect();
    let value = f.eval(&xf).value();
    Ok(BvIntegral { function: f, value })
}

/// The perturbation direction `μ_0`: first moment-curve vector
/// `(1, k, k², …)/2^j` such that `μ + tμ_0` is generic for `0 < t ≤ 1`.
pub fn perturbation_direction(pp: &ParametricPolyhedron, data: &ChamberData, chamber: &Chamber, mu: &[Q]) -> Vec<Q> {
    let duals: Vec<Vec<Q>> = chamber
        .members
        .iter()
        .flat_map(|&m| (0..pp.dim).map(move |k| data.bases[m].dual_vector(k)))
        .collect();
    for k in 1i64.. {
        let base: Vec<Q> = (0..pp.dim)
            .map(|i| {
                let mut p = Q::one();
                for _ in 0..i {
                    p *= q(k);
                }
                p
            })
            .collect();
        if duals.iter().any(|u| dot(&base, u).is_zero()) {
            continue;
        }
        let mut scale = Q::one();
        for _ in 0..256 {
            let cand: Vec<Q> = base.iter().map(|c| c * &scale).collect();
            let ok = duals.iter().all(|u| {
                let a = dot(mu, u);
                let b = dot(&cand, u);
                // root t = −a/b must avoid (0, 1]
                if a.is_zero() {
                    return true;
                }
                let t = -(&a / &b);
                !(t.is_positive() && t <= Q::one())
            });
            if ok {
                return cand;
            }
            scale *= qf(1, 2);
        }
    }
    unreachable!("moment curve is infinite")
}

/// `bv_limit_tfinite(pp, chamber, μ)`: the `t → 0` limit of the
/// exponential-sum formula at `μ + tμ_0`, as an exact t-finite function of
/// the offsets.
pub fn bv_limit_tfinite(
    pp: &ParametricPolyhedron,
    data: &ChamberData,
    chamber: &Chamber,
    mu: &[Q],
) -> Result<TFinite<Q>> {
    check_dim(pp.dim, mu.len())?;
    require_maximal(chamber)?;
    let n = pp.dim;
    let big_n = pp.n_constraints();
    let mu0 = perturbation_direction(pp, data, chamber, mu);
    // Group by the exponent −μ∘s_σ; each σ contributes a Laurent series
    // t^{−k} Σ_j c_j t^j with polynomial coefficients.
    let mut groups: BTreeMap<LinearForm, BTreeMap<i64, Poly<Q>>> = BTreeMap::new();
    for &m in &chamber.members {
        let b = &data.bases[m];
        let mut pole = 0i64;
        let mut lead = b.box_volume.clone();
        let mut regular: Vec<(Q, Q)> = Vec::new();
        for k in 0..n {
            let u = b.dual_vector(k);
            let a = dot(mu, &u);
            let bb = dot(&mu0, &u);
            if a.is_zero() {
                pole += 1;
                lead /= bb;
            } else {
                regular.push((a, bb));
            }
        }
        let order = pole as usize;
        // Π 1/(a + tb) = Π (1/a) Σ_j (−b/a)^j t^j, truncated at t^order.
        let mut series = alloc::vec![Q::zero(); order + 1];
        series[0] = lead;
        for (a, bb) in &regular {
            let r = -(bb / a);
            let mut next = alloc::vec![Q::zero(); order + 1];
            for i in 0..=order {
                if series[i].is_zero() {
                    continue;
                }
                let mut p = Q::one();
                for j in 0..=(order - i) {
                    next[i + j] += &series[i] * &p;
                    p *= &r;
                }
            }
            let inv_a = a.recip();
            series = next.into_iter().map(|c| c * &inv_a).collect();
        }
        // e^{−t μ_0(s_σ(x))} = Σ_l (−ℓ(x))^l t^l / l!
        let ell: Vec<Q> = vec_mat(&mu0, &b.vertex_map).iter().map(|c| -c).collect();
        let ell_poly = Poly::affine(&ell, Q::zero());
        let mut exp_terms: Vec<Poly<Q>> = Vec::with_capacity(order + 1);
        let mut cur = Poly::constant(big_n, Q::one());
        let mut fact = Q::one();
        for l in 0..=order {
            if l > 0 {
                cur = cur.mul(&ell_poly);
                fact *= q(l as i64);
            }
            exp_terms.push(cur.scale(&fact.recip()));
        }
        let expo = LinearForm(vec_mat(mu, &b.vertex_map).iter().map(|c| -c).collect());
        let g = groups.entry(expo).or_default();
        for power in 0..=order {
            // coefficient of t^{power − order}
            let mut coeff = Poly::zero(big_n);
            for j in 0..=power {
                if !series[j].is_zero() {
                    coeff = coeff.add(&exp_terms[power - j].scale(&series[j]));
                }
            }
            let key = power as i64 - pole;
            let e = g.entry(key).or_insert_with(|| Poly::zero(big_n));
            *e = e.add(&coeff);
        }
    }
    let mut out = TFinite::zero(big_n);
    for (expo, laurent) in groups {
        for (p, c) in &laurent {
            if *p < 0 && !c.is_zero() {
                return Err(Error::Internal(format!(
                    "pole of order {} does not cancel for exponent {:?}",
                    -p,
                    expo.iter().map(crate::rational::fmt_q).collect::<Vec<_>>()
                )));
            }
        }
        if let Some(c) = laurent.get(&0) {
            out.add_term(expo, c.clone());
        }
    }
    Ok(out)
}

/// Members of `Σ_x` as the `σ` index sets themselves.
pub fn chamber_sigmas(data: &ChamberData, ch: &Chamber) -> BTreeSet<Vec<usize>> {
    ch.members.iter().map(|&m| data.bases[m].sigma.clone()).collect()
}

//! Refinement of one region along a closed subset `Π_1 ⊆ Π_0`, and the
//! slices `X + ker Π_1` whose integrals are t-finite in `(X, T, S)`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{greedy_basis, nullspace, rank, Matrix};
use crate::lp::LpOutcome;
use crate::polyhedra::{face_lattice, integrate_exp_oracle, HPolyhedron, VPolytope};
use crate::rational::{dot, normalize_direction, normalize_line, q, scale_vec, sub_vec, to_f64, zeros, LinearForm, Q};
use crate::tfinite::{fit_tfinite, FitReport};

use super::decompose::{split, transport_vertices, RegionContext, RegionDescriptor};
use super::frame::{RowKind, SymRow, SymbolicPolytope};

/// What refinement needs from a region: its inequalities, the forms `Π`
/// with their signs, the remaining set `Π_0` and the parameter form `B(T)`.
#[derive(Debug, Clone)]
pub struct RegionView {
    pub system: SymbolicPolytope,
    pub pi: Vec<Vec<Q>>,
    pub signs: Vec<i64>,
    pub pi0: Vec<usize>,
    pub b: Vec<Q>,
}

impl RegionView {
    pub fn of(ctx: &RegionContext, r: &RegionDescriptor) -> Self {
        RegionView {
            system: r.system.clone(),
            pi: ctx.pi.clone(),
            signs: (0..ctx.pi.len()).map(|i| r.sign(i)).collect(),
            pi0: r.pi0.clone(),
            b: ctx.b_params(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedCell {
    /// `j(F)` for each problematic hyperplane.
    pub signs: Vec<i64>,
    pub system: SymbolicPolytope,
    /// Every nonzero projected vertex lies on the cut.
    pub pyramid: bool,
    /// Inequalities of the unbounded cone `R̄_{i,j}` in the `𝓑` coordinates.
    pub cone: Vec<Vec<Q>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub pi1: Vec<usize>,
    /// `𝓑 ⊆ Π_1`, indices into `Π`.
    pub basis: Vec<usize>,
    /// `λ_𝓑 = Σ_{λ∈𝓑} (sgn λ) λ`.
    pub lambda_b: Vec<Q>,
    pub delta_prime: Option<Q>,
    /// Problematic hyperplanes `Σ d_λ λ = 0`, as `d` over `𝓑`.
    pub problematic: Vec<Vec<Q>>,
    pub cells: Vec<RefinedCell>,
}

fn form_sum(forms: &[Vec<Q>], coeffs: &[Q], dim: usize) -> Vec<Q> {
    let mut out = zeros(dim);
    for (f, c) in forms.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(f) {
            *o += c * x;
        }
    }
    out
}

fn lp_bound(h: &HPolyhedron, f: &[Q]) -> Option<Q> {
    match h.maximize(f) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

/// Checks the closure condition at `p`: `λ ∈ Π_0` vanishes on
/// `ker Π_1 ∩ R_i` exactly when `λ ∈ Π_1`.
pub fn closure_violations(view: &RegionView, pi1: &[usize], p: &[Q]) -> Result<Vec<usize>> {
    let mut k = view.system.instantiate(p)?;
    for &i in pi1 {
        k.push_eq(view.pi[i].clone(), Q::zero());
    }
    if !k.is_feasible() {
        return Err(Error::Closure("ker Π_1 does not meet the region".into()));
    }
    let mut bad = Vec::new();
    for &i in &view.pi0 {
        if pi1.contains(&i) {
            continue;
        }
        let f = &view.pi[i];
        let neg: Vec<Q> = f.iter().map(|x| -x).collect();
        let hi = lp_bound(&k, f);
        let lo = lp_bound(&k, &neg);
        if hi.is_some_and(|v| v.is_zero()) && lo.is_some_and(|v| v.is_zero()) {
            bad.push(i);
        }
    }
    Ok(bad)
}

/// `refine(R_i, Π_1)` at the parameter point `p`.
pub fn refine(view: &RegionView, pi1: &[usize], p: &[Q]) -> Result<Refinement> {
    let dim = view.system.dim;
    if let Some(i) = pi1.iter().find(|i| !view.pi0.contains(i)) {
        return Err(Error::InvalidArgument(format!("weight {i} is not in Π_0")));
    }
    let bad = closure_violations(view, pi1, p)?;
    if !bad.is_empty() {
        return Err(Error::Closure(format!(
            "weights {bad:?} vanish on ker Π_1 ∩ R_i but are not in Π_1"
        )));
    }
    let bt = dot(&view.b, p);
    if !bt.is_positive() {
        return Err(Error::NotWellSituated("B(T) must be positive".into()));
    }
    if pi1.is_empty() {
        return Ok(Refinement {
            pi1: Vec::new(),
            basis: Vec::new(),
            lambda_b: zeros(dim),
            delta_prime: None,
            problematic: Vec::new(),
            cells: alloc::vec![RefinedCell {
                signs: Vec::new(),
                system: view.system.clone(),
                pyramid: true,
                cone: Vec::new(),
            }],
        });
    }
    let forms1: Vec<Vec<Q>> = pi1.iter().map(|&i| view.pi[i].clone()).collect();
    let basis: Vec<usize> = greedy_basis(&forms1).into_iter().map(|k| pi1[k]).collect();
    let bforms: Vec<Vec<Q>> = basis.iter().map(|&i| view.pi[i].clone()).collect();
    let signs: Vec<Q> = basis.iter().map(|&i| q(view.signs[i])).collect();
    let lambda_b = form_sum(&bforms, &signs, dim);

    let h = view.system.instantiate(p)?;
    let verts = h.vertices()?;
    let delta_prime = verts
        .vertices
        .iter()
        .map(|v| dot(&lambda_b, v) / &bt)
        .filter(|c| !c.is_zero())
        .min()
        .ok_or_else(|| Error::Internal("λ_𝓑 vanishes on every vertex".into()))?
        / q(2);

    let mut cut_sys = view.system.clone();
    cut_sys.push_le(lambda_b.clone(), scale_vec(&delta_prime, &view.b), RowKind::Cut);
    let cut_h = cut_sys.instantiate(p)?;
    let lat = face_lattice(&cut_h)?;
    let project = |y: &[Q]| -> Vec<Q> { bforms.iter().map(|f| dot(f, y)).collect() };
    let zverts: Vec<Vec<Q>> = lat.vertices.iter().map(|v| project(v)).collect();
    let d = basis.len();

    let mut seen = BTreeSet::new();
    let mut problematic = Vec::new();
    for face in lat.faces.values() {
        let pts: Vec<&Vec<Q>> = face.vertices.iter().map(|&i| &zverts[i]).collect();
        if !pts.iter().any(|z| z.iter().all(Zero::is_zero)) {
            continue;
        }
        let rows: Vec<Vec<Q>> = pts.iter().map(|z| (*z).clone()).collect();
        if d == 0 || rank(&rows) + 1 != d {
            continue;
        }
        let ns = nullspace(&rows, d);
        let normal = normalize_line(&ns[0]);
        let sides: BTreeSet<core::cmp::Ordering> = zverts.iter().map(|z| dot(&normal, z).cmp(&Q::zero())).collect();
        if sides.contains(&core::cmp::Ordering::Less)
            && sides.contains(&core::cmp::Ordering::Greater)
            && seen.insert(normal.clone())
        {
            problematic.push(normal);
        }
    }
    problematic.sort();

    let zero_rhs = zeros(view.system.nparams);
    let families: Vec<(SymRow, SymRow)> = problematic
        .iter()
        .enumerate()
        .map(|(k, dn)| {
            let n = form_sum(&bforms, dn, dim);
            let neg: Vec<Q> = n.iter().map(|x| -x).collect();
            (
                SymRow {
                    normal: n,
                    rhs: zero_rhs.clone(),
                    kind: RowKind::Problematic(k),
                },
                SymRow {
                    normal: neg,
                    rhs: zero_rhs.clone(),
                    kind: RowKind::Problematic(k),
                },
            )
        })
        .collect();
    let cut_value = &delta_prime * &bt;
    let sign_rows: Vec<Vec<Q>> = (0..d)
        .map(|k| scale_vec(&signs[k], &crate::rational::unit(d, k)))
        .collect();
    let mut cells = Vec::new();
    for (choice, sys) in split(&cut_sys, p, &families)? {
        let ch = sys.instantiate(p)?;
        let cz: Vec<Vec<Q>> = ch.vertices()?.vertices.iter().map(|v| project(v)).collect();
        let pyramid = cz
            .iter()
            .filter(|z| z.iter().any(|c| !c.is_zero()))
            .all(|z| dot(&signs, z) == cut_value);
        let zpoly = VPolytope::from_points(d, cz)?;
        let mut cone: BTreeSet<Vec<Q>> = sign_rows.iter().map(|r| normalize_direction(r)).collect();
        if zpoly.is_full_dimensional() {
            for r in zpoly.to_h().rows {
                let is_cut = normalize_direction(&r.normal)
                    == normalize_direction(&signs.iter().map(|x| -x).collect::<Vec<_>>());
                if r.offset.is_zero() && !is_cut {
                    cone.insert(normalize_direction(&r.normal));
                }
            }
        }
        cells.push(RefinedCell {
            signs: choice.iter().map(|&b| if b { 1 } else { -1 }).collect(),
            system: sys,
            pyramid,
            cone: cone.into_iter().collect(),
        });
    }
    Ok(Refinement {
        pi1: pi1.to_vec(),
        basis,
        lambda_b,
        delta_prime: Some(delta_prime),
        problematic,
        cells,
    })
}

/// Basis vectors of `ker Π_1` in frame coordinates.
pub fn kernel_basis(view: &RegionView, pi1: &[usize]) -> Matrix {
    let rows: Vec<Vec<Q>> = pi1.iter().map(|&i| view.pi[i].clone()).collect();
    nullspace(&rows, view.system.dim)
}

/// `{w : X + N w ∈ R}` for the cell `sys` at parameters `p`.
pub fn slice_polytope(sys: &SymbolicPolytope, p: &[Q], x: &[Q], kernel: &Matrix) -> Result<VPolytope> {
    let m = kernel.len();
    let mut h = HPolyhedron::new(m);
    for r in &sys.rows {
        let nw: Vec<Q> = kernel.iter().map(|k| dot(&r.normal, k)).collect();
        h.push(nw, dot(&r.normal, x) - dot(&r.rhs, p));
    }
    h.vertices()
}

/// `∫ e^{−μ(X + N w)} dw` over a slice; `mu` is in frame coordinates.
pub fn slice_exp_integral(poly: &VPolytope, kernel: &Matrix, x: &[Q], mu: &[Q]) -> Result<f64> {
    let mw: Vec<f64> = kernel.iter().map(|k| -to_f64(&dot(mu, k))).collect();
    let base = libm::exp(-to_f64(&dot(mu, x)));
    Ok(base * integrate_exp_oracle(poly, &mw)?.value)
}

/// Affine sample family for a slice fit: `X = Σ w_k v_k + a·x_dir`,
/// `T = T_0 + b·t_dir`, `S = S_0 + c·s_dir`.
#[derive(Debug, Clone)]
pub struct SliceFamily {
    /// Convex weights over the cell's vertices at `p0`.
    pub weights: Vec<Q>,
    pub x_dir: Vec<Q>,
    /// Parameter-space directions for `b` and `c`.
    pub p_dirs: [Vec<Q>; 2],
    /// `μ` in frame coordinates.
    pub mu: Vec<Q>,
}

/// The slice as a polytope in `w` whose right-hand sides are affine in
/// `(1, a, b, c)`.
pub fn symbolic_slice(
    sys: &SymbolicPolytope,
    p0: &[Q],
    kernel: &Matrix,
    fam: &SliceFamily,
) -> Result<SymbolicPolytope> {
    let motion = slice_x_motion(sys, p0, fam)?;
    let (dx, x0) = (&motion[..3], &motion[3]);
    let m = kernel.len();
    let mut out = SymbolicPolytope::new(m, 4);
    for r in &sys.rows {
        let nw: Vec<Q> = kernel.iter().map(|k| dot(&r.normal, k)).collect();
        // n·(Nw) ≥ rhs·p − n·X
        let c0 = dot(&r.rhs, p0) - dot(&r.normal, x0);
        let ca = -dot(&r.normal, &dx[0]);
        let cb = dot(&r.rhs, &fam.p_dirs[0]) - dot(&r.normal, &dx[1]);
        let cc = dot(&r.rhs, &fam.p_dirs[1]) - dot(&r.normal, &dx[2]);
        out.push(nw, alloc::vec![c0, ca, cb, cc], r.kind.clone());
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SliceFit {
    pub report: FitReport,
    /// Half-width of the `(a,b,c)` box actually used.
    pub range: Q,
    pub exponents: Vec<LinearForm>,
    pub samples: usize,
}

fn grid_params(r: &Q, n: usize) -> Vec<Q> {
    let steps = (n - 1) as i64;
    (0..n as i64).map(|k| r * (q(2 * k - steps)) / q(steps)).collect()
}

/// Samples the slice integral on an `n × n × n` grid in `(a,b,c)` and fits
/// a t-finite model with exponents read off the vertex motion.
pub fn fit_slice_integral(
    sys: &SymbolicPolytope,
    p0: &[Q],
    kernel: &Matrix,
    fam: &SliceFamily,
    range: &Q,
    n: usize,
) -> Result<SliceFit> {
    let ss = symbolic_slice(sys, p0, kernel, fam)?;
    let m = kernel.len();
    let at = |a: &Q, b: &Q, c: &Q| alloc::vec![q(1), a.clone(), b.clone(), c.clone()];
    let origin = at(&Q::zero(), &Q::zero(), &Q::zero());
    let h0 = ss.instantiate(&origin)?;
    let nv = h0.vertices()?.len();
    if !h0.has_interior() {
        return Err(Error::NotWellSituated("the slice through X has empty interior".into()));
    }
    let mut r = range.clone();
    let grid = loop {
        let g = grid_params(&r, n);
        let stable = g.iter().all(|a| {
            g.iter().all(|b| {
                g.iter().all(|c| {
                    let h = match ss.instantiate(&at(a, b, c)) {
                        Ok(h) => h,
                        Err(_) => return false,
                    };
                    h.has_interior() && h.vertices().map(|v| v.len() == nv).unwrap_or(false)
                })
            })
        });
        if stable {
            break g;
        }
        r /= q(2);
        if r < Q::new(1.into(), (1i64 << 30).into()) {
            return Err(Error::NotWellSituated(
                "no parameter box keeps the slice combinatorics fixed".into(),
            ));
        }
    };
    // Exponents: linear part of −μ(X + N w_k) along a, b, c.
    let mut exps: BTreeSet<Vec<Q>> = BTreeSet::new();
    let mu_w: Vec<Q> = kernel.iter().map(|k| dot(&fam.mu, k)).collect();
    let dx = slice_x_motion(sys, p0, fam)?;
    let e = |k: usize| {
        let mut v = zeros(4);
        v[0] = q(1);
        v[k + 1] = r.clone();
        v
    };
    let moved: Vec<_> = (0..3)
        .map(|k| transport_vertices(&ss, &origin, &e(k)))
        .collect::<Result<_>>()?;
    for vi in 0..moved[0].len() {
        let lin: Vec<Q> = (0..3)
            .map(|k| {
                let dw = sub_vec(&moved[k][vi].to, &moved[k][vi].from);
                -(dot(&mu_w, &dw) / &r + dot(&fam.mu, &dx[k]))
            })
            .collect();
        exps.insert(lin);
    }
    let exponents: Vec<LinearForm> = exps.into_iter().map(LinearForm).collect();
    let x0 = &dx[3];
    let mut samples = Vec::new();
    for a in &grid {
        for b in &grid {
            for c in &grid {
                let pp = at(a, b, c);
                let poly = ss.instantiate(&pp)?.vertices()?;
                let x: Vec<Q> = (0..sys.dim)
                    .map(|i| &x0[i] + a * &dx[0][i] + b * &dx[1][i] + c * &dx[2][i])
                    .collect();
                let v = slice_exp_integral(&poly, kernel, &x, &fam.mu)?;
                samples.push((alloc::vec![to_f64(a), to_f64(b), to_f64(c)], v));
            }
        }
    }
    let report = fit_tfinite(&samples, &exponents, m as u32)?;
    Ok(SliceFit {
        report,
        range: r,
        exponents,
        samples: samples.len(),
    })
}

/// `[∂X/∂a, ∂X/∂b, ∂X/∂c, X_0]` for a slice family.
fn slice_x_motion(sys: &SymbolicPolytope, p0: &[Q], fam: &SliceFamily) -> Result<Vec<Vec<Q>>> {
    let base = transport_vertices(sys, p0, p0)?;
    if base.len() != fam.weights.len() {
        return Err(Error::DimensionMismatch {
            expected: base.len(),
            found: fam.weights.len(),
        });
    }
    let x_at = |vs: Vec<Vec<Q>>| form_sum(&vs, &fam.weights, sys.dim);
    let x0 = x_at(base.iter().map(|v| v.from.clone()).collect());
    let mut out = alloc::vec![fam.x_dir.clone()];
    for d in &fam.p_dirs {
        let p1: Vec<Q> = p0.iter().zip(d).map(|(a, b)| a + b).collect();
        let moved = transport_vertices(sys, p0, &p1)?;
        out.push(sub_vec(&x_at(moved.iter().map(|v| v.to.clone()).collect()), &x0));
    }
    out.push(x0);
    Ok(out)
}

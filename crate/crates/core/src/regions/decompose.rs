//! The `Λ`-recursion splitting `R_P^Q(T,S)` into regions `R_i`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::linalg::{greedy_basis, solve_unique};
use crate::lp::{Lp, LpOutcome, Rel};
use crate::polyhedra::{volume, HPolyhedron};
use crate::rational::{dot, q, scale_vec, to_f64, unit, zeros, LinearForm, RationalVector, Q};
use crate::rootspace::{Parabolic, RootDatum, WeightSet};

use super::cones::{b_functional, in_c_eps, kappa_squared, ConeFamily, DistanceFunction};
use super::frame::{on_t, params, pi_forms, Frame, Params, RowKind, SymRow, SymbolicPolytope};
use super::polytopes::region_system;

/// Inputs fixed for one decomposition.
#[derive(Debug, Clone)]
pub struct RegionContext {
    pub frame: Frame,
    pub q: Parabolic,
    /// `Π_P` in frame coordinates.
    pub pi: Vec<Vec<Q>>,
    pub kappa2: Q,
    pub eps: Q,
    /// `B ∈ 𝔞*`.
    pub b: LinearForm,
    /// `R_P^Q(T,S)` itself.
    pub base: SymbolicPolytope,
}

impl RegionContext {
    pub fn new(datum: &RootDatum, weights: &WeightSet, p: &Parabolic, q: &Parabolic, eps: &Q) -> Result<Self> {
        if !p.contained_in(q) {
            return Err(Error::NotContained);
        }
        if *q == Parabolic::group(datum.rank()) {
            return Err(Error::InvalidArgument("Q must be a proper parabolic".into()));
        }
        let frame = Frame::new(datum, p);
        let pi = pi_forms(&frame, weights);
        let mut psi: Vec<Vec<Q>> = pi.clone();
        psi.extend((0..frame.dim()).map(|k| unit(frame.dim(), k)));
        let kappa2 = kappa_squared(&psi, &frame.gram);
        let b = b_functional(datum, eps, &kappa2)?;
        let base = region_system(&frame, q)?;
        Ok(RegionContext {
            frame,
            q: *q,
            pi,
            kappa2,
            eps: eps.clone(),
            b,
            base,
        })
    }

    pub fn n(&self) -> usize {
        self.frame.rank()
    }

    /// `B(T)` as a parameter form.
    pub fn b_params(&self) -> Vec<Q> {
        on_t(&self.b, self.n())
    }

    pub fn b_value(&self, p: &[Q]) -> Q {
        dot(&self.b_params(), p)
    }
}

/// One element `(Λ_0, …, Λ_k; Π⁺)` of the index set `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionDescriptor {
    pub pi_plus: Vec<usize>,
    pub lambdas: Vec<Vec<usize>>,
    /// `δ_0 = 1, δ_1, …, δ_k`.
    pub deltas: Vec<Q>,
    /// `Π_0 = Π \ ∪Λ_i`.
    pub pi0: Vec<usize>,
    pub system: SymbolicPolytope,
}

impl RegionDescriptor {
    pub fn sign(&self, i: usize) -> i64 {
        if self.pi_plus.contains(&i) {
            1
        } else {
            -1
        }
    }
}

fn level_of(lambdas: &[Vec<usize>], i: usize) -> Option<usize> {
    lambdas.iter().position(|l| l.contains(&i))
}

/// Inequalities (3.7) and (3.8) for a tuple `(Λ_0, …, Λ_k; Π⁺)`.
pub fn build_system(ctx: &RegionContext, pi_plus: &[usize], lambdas: &[Vec<usize>], deltas: &[Q]) -> SymbolicPolytope {
    let mut sys = ctx.base.clone();
    let bp = ctx.b_params();
    let k = lambdas.len();
    for (i, lam) in ctx.pi.iter().enumerate() {
        let s = if pi_plus.contains(&i) { q(1) } else { q(-1) };
        let normal = scale_vec(&s, lam);
        match level_of(lambdas, i) {
            Some(l) => {
                sys.push(
                    normal.clone(),
                    scale_vec(&deltas[l], &bp),
                    RowKind::Level {
                        weight: i,
                        level: l,
                        upper: false,
                    },
                );
                if l >= 1 {
                    sys.push_le(
                        normal,
                        scale_vec(&deltas[l - 1], &bp),
                        RowKind::Level {
                            weight: i,
                            level: l - 1,
                            upper: true,
                        },
                    );
                }
            }
            None => {
                sys.push(normal.clone(), zeros(bp.len()), RowKind::Sign(i));
                if k > 0 {
                    sys.push_le(
                        normal,
                        scale_vec(&deltas[k - 1], &bp),
                        RowKind::Level {
                            weight: i,
                            level: k - 1,
                            upper: true,
                        },
                    );
                }
            }
        }
    }
    sys
}

/// Well-situatedness thresholds.
#[derive(Debug, Clone)]
pub struct Situation {
    pub eps: Q,
    /// `‖T‖²` must be at least this ("sufficiently large").
    pub min_t_norm2: Q,
}

/// Checks `S, T ∈ C_ε` (same cone), `‖S‖ ≤ 1` and `‖T‖² ≥ min_t_norm2`;
/// returns the failures as text.
pub fn well_situated_failures(
    cones: &ConeFamily,
    dist: &DistanceFunction,
    sit: &Situation,
    t: &RationalVector,
    s: &RationalVector,
) -> Result<Vec<alloc::string::String>> {
    let d = &dist.datum;
    let mut out = Vec::new();
    match cones.cone_of(d, t) {
        None => out.push("T is not inside any π-dependent cone".into()),
        Some(k) => {
            if !in_c_eps(cones, dist, k, &sit.eps, t)? {
                out.push("T is not in C_ε".into());
            }
            if !in_c_eps(cones, dist, k, &sit.eps, s)? {
                out.push("S is not in C_ε of the cone of T".into());
            }
        }
    }
    if d.norm2(s) > Q::one() {
        out.push("‖S‖ > 1".into());
    }
    if d.norm2(t) < sit.min_t_norm2 {
        out.push(format!(
            "‖T‖² below the largeness threshold {}",
            crate::rational::fmt_q(&sit.min_t_norm2)
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub ctx: RegionContext,
    pub regions: Vec<RegionDescriptor>,
}

/// Splits `start` along each row family in turn, keeping cells with
/// interior at `p`. Each family is a pair of rows (the `≥` side and the
/// `≤` side).
pub(crate) fn split(
    start: &SymbolicPolytope,
    p: &[Q],
    families: &[(SymRow, SymRow)],
) -> Result<Vec<(Vec<bool>, SymbolicPolytope)>> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<bool>, SymbolicPolytope)> = alloc::vec![(Vec::new(), start.clone())];
    while let Some((choice, sys)) = stack.pop() {
        if choice.len() == families.len() {
            out.push((choice, sys));
            continue;
        }
        let (hi, lo) = &families[choice.len()];
        // push `false` first so `true` is explored first; order is fixed
        for (flag, row) in [(false, lo), (true, hi)] {
            let next = sys.extended(core::slice::from_ref(row));
            if next.instantiate(p)?.has_interior() {
                let mut c = choice.clone();
                c.push(flag);
                stack.push((c, next));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// The sign vectors `Π⁺` whose cells of `R_P^Q(T,S)` have interior, in
/// canonical order.
pub fn sign_cells(ctx: &RegionContext, p: &[Q]) -> Result<Vec<Vec<usize>>> {
    if !ctx.b_value(p).is_positive() {
        return Err(Error::NotWellSituated("B(T) must be positive".into()));
    }
    if !ctx.base.instantiate(p)?.has_interior() {
        return Err(Error::NotWellSituated("R_P^Q(T,S) has empty interior".into()));
    }
    let npi = ctx.pi.len();
    let zero_rhs = zeros(p.len());
    let sign_families: Vec<(SymRow, SymRow)> = ctx
        .pi
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let pos = SymRow {
                normal: l.clone(),
                rhs: zero_rhs.clone(),
                kind: RowKind::Sign(i),
            };
            let neg = SymRow {
                normal: l.iter().map(|x| -x).collect(),
                rhs: zero_rhs.clone(),
                kind: RowKind::Sign(i),
            };
            (pos, neg)
        })
        .collect();
    Ok(split(&ctx.base, p, &sign_families)?
        .into_iter()
        .map(|(choice, _)| (0..npi).filter(|&i| choice[i]).collect())
        .collect())
}

/// All regions inside one sign cell.
pub fn decompose_cell(ctx: &RegionContext, p: &[Q], pi_plus: &[usize]) -> Result<Vec<RegionDescriptor>> {
    let npi = ctx.pi.len();
    let mut regions = Vec::new();
    // Level 0: Λ_0 = {λ : (sgn λ)λ ≥ B(T)}.
    let cell_sys = build_system(ctx, pi_plus, &[], &[]);
    let all: Vec<usize> = (0..npi).collect();
    let fams = level_families(ctx, pi_plus, &all, &Q::one());
    for (c0, _) in split(&cell_sys, p, &fams)? {
        let lam0: Vec<usize> = all.iter().zip(&c0).filter(|(_, f)| **f).map(|(i, _)| *i).collect();
        recurse(ctx, p, pi_plus, alloc::vec![lam0], alloc::vec![Q::one()], &mut regions)?;
    }
    Ok(regions)
}

/// `decompose(P, Q, ψ, cone, ε, T, S)` at an exact parameter point.
pub fn decompose(ctx: &RegionContext, t: &RationalVector, s: &RationalVector) -> Result<Decomposition> {
    let p = params(t, s);
    let mut regions = Vec::new();
    for pi_plus in sign_cells(ctx, &p)? {
        regions.extend(decompose_cell(ctx, &p, &pi_plus)?);
    }
    Ok(Decomposition {
        ctx: ctx.clone(),
        regions,
    })
}

fn level_families(ctx: &RegionContext, pi_plus: &[usize], idx: &[usize], delta: &Q) -> Vec<(SymRow, SymRow)> {
    let bp = scale_vec(delta, &ctx.b_params());
    idx.iter()
        .map(|&i| {
            let s = if pi_plus.contains(&i) { q(1) } else { q(-1) };
            let n = scale_vec(&s, &ctx.pi[i]);
            let hi = SymRow {
                normal: n.clone(),
                rhs: bp.clone(),
                kind: RowKind::Free(i),
            };
            let lo = SymRow {
                normal: n.iter().map(|x| -x).collect(),
                rhs: bp.iter().map(|x| -x).collect(),
                kind: RowKind::Free(i),
            };
            (hi, lo)
        })
        .collect()
}

fn recurse(
    ctx: &RegionContext,
    p: &[Q],
    pi_plus: &[usize],
    lambdas: Vec<Vec<usize>>,
    deltas: Vec<Q>,
    out: &mut Vec<RegionDescriptor>,
) -> Result<()> {
    let sys = build_system(ctx, pi_plus, &lambdas, &deltas);
    let h = sys.instantiate(p)?;
    if !h.has_interior() {
        return Ok(());
    }
    let used: BTreeSet<usize> = lambdas.iter().flatten().cloned().collect();
    let pi0: Vec<usize> = (0..ctx.pi.len()).filter(|i| !used.contains(i)).collect();
    if stops(ctx, &h, &pi0) {
        out.push(RegionDescriptor {
            pi_plus: pi_plus.to_vec(),
            lambdas,
            deltas,
            pi0,
            system: sys,
        });
        return Ok(());
    }
    if lambdas.len() > ctx.pi.len() + 1 {
        return Err(Error::Internal("Λ-recursion failed to terminate".into()));
    }
    let next_delta = certificate_delta(ctx, &sys, &lambdas, &deltas, &pi0)?;
    let fams = level_families(ctx, pi_plus, &pi0, &next_delta);
    for (choice, _) in split(&sys, p, &fams)? {
        let lam: Vec<usize> = pi0.iter().zip(&choice).filter(|(_, f)| **f).map(|(i, _)| *i).collect();
        if lam.is_empty() {
            return Err(Error::Internal(
                "a cell with every remaining weight below δ_{k+1}B(T) has interior; the certificate bound fails".into(),
            ));
        }
        let mut l2 = lambdas.clone();
        l2.push(lam);
        let mut d2 = deltas.clone();
        d2.push(next_delta.clone());
        recurse(ctx, p, pi_plus, l2, d2, out)?;
    }
    Ok(())
}

/// Whether `ker Π_0` meets the region.
fn stops(ctx: &RegionContext, h: &HPolyhedron, pi0: &[usize]) -> bool {
    if pi0.is_empty() {
        return true;
    }
    let mut k = h.clone();
    for &i in pi0 {
        k.push_eq(ctx.pi[i].clone(), Q::zero());
    }
    k.is_feasible()
}

/// Finds the Krein–Milman certificate `a` by LP and returns
/// `δ_{k+1} = δ c_a / D` with `δ = 1/|Π|`.
fn certificate_delta(
    ctx: &RegionContext,
    sys: &SymbolicPolytope,
    lambdas: &[Vec<usize>],
    deltas: &[Q],
    pi0: &[usize],
) -> Result<Q> {
    let dim = ctx.frame.dim();
    // Rows of (3.7) mentioning ∪Λ_i ∪ Δ_P, with their B(T) coefficient.
    let mut rows: Vec<(Vec<Q>, Q)> = Vec::new();
    for r in &sys.rows {
        match &r.kind {
            RowKind::SimpleRoot(_) => rows.push((r.normal.clone(), Q::zero())),
            RowKind::Level { weight, level, upper } if level_of(lambdas, *weight).is_some() => {
                let c = if *upper {
                    -deltas[*level].clone()
                } else {
                    deltas[*level].clone()
                };
                rows.push((r.normal.clone(), c));
            }
            _ => {}
        }
    }
    let pi0_forms: Vec<Vec<Q>> = pi0.iter().map(|&i| ctx.pi[i].clone()).collect();
    let basis: Vec<usize> = greedy_basis(&pi0_forms);
    let nw = rows.len();
    let nz = basis.len();
    let mut lp = Lp::new(nw + nz);
    for i in 0..nw {
        lp.add(unit(nw + nz, i), Rel::Ge, Q::zero());
    }
    for c in 0..dim {
        let mut coeffs: Vec<Q> = rows.iter().map(|(n, _)| n[c].clone()).collect();
        coeffs.extend(basis.iter().map(|&b| -pi0_forms[b][c].clone()));
        lp.add(coeffs, Rel::Eq, Q::zero());
    }
    let mut norm: Vec<Q> = alloc::vec![Q::one(); nw];
    norm.extend(zeros(nz));
    lp.add(norm, Rel::Le, Q::one());
    let mut obj: Vec<Q> = rows.iter().map(|(_, c)| c.clone()).collect();
    obj.extend(zeros(nz));
    lp.maximize(obj);
    let (x, c_a) = match lp.solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => (x, value),
        _ => {
            return Err(Error::Internal(
                "no Krein–Milman certificate: ker Π_0 misses the region but no positive combination exists (T may not be large enough)"
                    .into(),
            ))
        }
    };
    let dmax = x[nw..]
        .iter()
        .map(|v| v.abs())
        .max()
        .filter(|v| v.is_positive())
        .ok_or_else(|| Error::Internal("certificate has μ_a = 0".into()))?;
    let delta = Q::new(1.into(), (ctx.pi.len() as i64).into());
    Ok(delta * c_a / dmax)
}

/// Result of the partition check on one decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub regions: usize,
    pub volume_sum: Q,
    pub volume_r: Q,
    pub points: usize,
    pub exactly_one: usize,
}

impl PartitionReport {
    pub fn ok(&self) -> bool {
        self.volume_sum == self.volume_r && self.exactly_one == self.points
    }
}

fn rand_unit(rng: &mut impl RngCore) -> Q {
    Q::new(((rng.next_u32() >> 8) as i64 * 2 + 1).into(), (1i64 << 25).into())
}

/// Volume additivity and membership of random points off all boundaries.
pub fn partition_check(
    dec: &Decomposition,
    t: &RationalVector,
    s: &RationalVector,
    points: usize,
    rng: &mut impl RngCore,
) -> Result<PartitionReport> {
    let p = params(t, s);
    let r = dec.ctx.base.instantiate(&p)?;
    let rv = r.vertices()?;
    let volume_r = volume(&rv)?;
    let polys: Vec<HPolyhedron> = dec
        .regions
        .iter()
        .map(|d| d.system.instantiate(&p))
        .collect::<Result<_>>()?;
    let mut volume_sum = Q::zero();
    for h in &polys {
        volume_sum += volume(&h.vertices()?)?;
    }
    let dim = r.dim;
    let lo: Vec<Q> = (0..dim)
        .map(|c| rv.vertices.iter().map(|v| v[c].clone()).min().unwrap())
        .collect();
    let hi: Vec<Q> = (0..dim)
        .map(|c| rv.vertices.iter().map(|v| v[c].clone()).max().unwrap())
        .collect();
    let fpolys: Vec<Vec<(Vec<f64>, f64)>> = polys
        .iter()
        .map(|h| {
            h.rows
                .iter()
                .map(|r| (r.normal.iter().map(to_f64).collect(), to_f64(&r.offset)))
                .collect()
        })
        .collect();
    let mut tested = 0;
    let mut exactly_one = 0;
    let mut attempts = 0;
    while tested < points {
        attempts += 1;
        if attempts > points * 1000 {
            return Err(Error::Internal("could not sample interior points".into()));
        }
        let y: Vec<Q> = (0..dim).map(|c| &lo[c] + (&hi[c] - &lo[c]) * rand_unit(rng)).collect();
        if !r.strictly_contains(&y) {
            continue;
        }
        let yf: Vec<f64> = y.iter().map(to_f64).collect();
        let mut count = 0;
        let mut on_boundary = false;
        for (h, fh) in polys.iter().zip(&fpolys) {
            let mut inside = true;
            for (k, (n, off)) in fh.iter().enumerate() {
                let v: f64 = n.iter().zip(&yf).map(|(a, b)| a * b).sum::<f64>() + off;
                let v = if v.abs() < 1e-9 {
                    let exact = h.rows[k].value(&y);
                    if exact.is_zero() {
                        on_boundary = true;
                    }
                    to_f64(&exact).signum() * if exact.is_zero() { 0.0 } else { 1.0 }
                } else {
                    v
                };
                if v <= 0.0 {
                    inside = false;
                }
            }
            if inside {
                count += 1;
            }
        }
        if on_boundary {
            continue;
        }
        tested += 1;
        if count == 1 {
            exactly_one += 1;
        }
    }
    Ok(PartitionReport {
        regions: polys.len(),
        volume_sum,
        volume_r,
        points: tested,
        exactly_one,
    })
}

/// One vertex followed from `(T,S)` to `(T′,S′)` along its tight set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportedVertex {
    pub tight: BTreeSet<usize>,
    pub from: Vec<Q>,
    pub to: Vec<Q>,
}

/// `region_vertices_affine`: transports every vertex at `p0` to `p1`.
pub fn transport_vertices(sys: &SymbolicPolytope, p0: &[Q], p1: &[Q]) -> Result<Vec<TransportedVertex>> {
    let h0 = sys.instantiate(p0)?;
    let h1 = sys.instantiate(p1)?;
    let mut out = Vec::new();
    for v in h0.vertices()?.vertices {
        let tight = h0.tight_set(&v);
        let a: Vec<Vec<Q>> = tight.iter().map(|&i| sys.rows[i].normal.clone()).collect();
        let b: Vec<Q> = tight.iter().map(|&i| dot(&sys.rows[i].rhs, p1)).collect();
        let w = solve_unique(&a, &b, sys.dim).ok_or_else(|| {
            Error::NotWellSituated(format!(
                "tight set {:?} has no unique intersection at the new parameters",
                tight
            ))
        })?;
        if !h1.contains(&w) {
            return Err(Error::NotWellSituated(format!(
                "transported vertex for tight set {:?} leaves the region",
                tight
            )));
        }
        out.push(TransportedVertex { tight, from: v, to: w });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinityReport {
    pub vertices: usize,
    pub count_stable: bool,
    pub midpoint_exact: bool,
}

/// Three collinear samples `p0`, `(p0+p1)/2`, `p1`: vertex counts agree and
/// the transported midpoint vertex is exactly the midpoint.
pub fn check_affine(sys: &SymbolicPolytope, p0: &[Q], p1: &[Q]) -> Result<AffinityReport> {
    let pm: Params = p0.iter().zip(p1).map(|(a, b)| (a + b) / q(2)).collect();
    let far = transport_vertices(sys, p0, p1)?;
    let mid = transport_vertices(sys, p0, &pm)?;
    let n1 = sys.instantiate(p1)?.vertices()?.len();
    let nm = sys.instantiate(&pm)?.vertices()?.len();
    let midpoint_exact = far.iter().zip(&mid).all(|(f, m)| {
        f.tight == m.tight
            && f.from
                .iter()
                .zip(&f.to)
                .zip(&m.to)
                .all(|((a, b), c)| (a + b) / q(2) == *c)
    });
    Ok(AffinityReport {
        vertices: far.len(),
        count_stable: n1 == far.len() && nm == far.len(),
        midpoint_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_ints, qf};
    use crate::regions::cones::pi_cones;
    use crate::regions::psi_pi;
    use crate::rootspace::{build_root_datum, weights_of, RepSpec};
    use rand::SeedableRng;

    pub(crate) fn a2_adjoint_setup() -> (RootDatum, WeightSet, RationalVector, RationalVector) {
        let d = build_root_datum("A", 2).unwrap();
        let w = weights_of(&d, &RepSpec::Adjoint).unwrap();
        let t = d.vector_with_root_values(&from_ints(&[20, 23]));
        let s = d.vector_with_root_values(&[qf(1, 2), qf(1, 3)]);
        (d, w, t, s)
    }

    #[test]
    fn a2_adjoint_partition() {
        let (d, w, t, s) = a2_adjoint_setup();
        let p = Parabolic::minimal(2);
        let qq = Parabolic::parse(2, "a1").unwrap();
        let ctx = RegionContext::new(&d, &w, &p, &qq, &qf(1, 4)).unwrap();
        let dist = DistanceFunction::new(&d, &psi_pi(&d, &w));
        let cones = pi_cones(&dist).unwrap();
        let sit = Situation {
            eps: qf(1, 4),
            min_t_norm2: q(64),
        };
        assert!(well_situated_failures(&cones, &dist, &sit, &t, &s).unwrap().is_empty());
        let dec = decompose(&ctx, &t, &s).unwrap();
        assert!(dec.regions.len() >= 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let rep = partition_check(&dec, &t, &s, 500, &mut rng).unwrap();
        assert!(rep.ok(), "{rep:?}");
        for r in &dec.regions {
            assert_eq!(r.deltas[0], Q::one());
            assert!(r.deltas.iter().all(|x| x.is_positive()));
        }
    }

    #[test]
    fn rank_one_adjoint() {
        let d = build_root_datum("A", 1).unwrap();
        let w = weights_of(&d, &RepSpec::Adjoint).unwrap();
        let p = Parabolic::minimal(1);
        let ctx = RegionContext::new(&d, &w, &p, &p, &qf(1, 4)).unwrap();
        let t = RationalVector(from_ints(&[30]));
        let s = RationalVector(alloc::vec![qf(1, 2)]);
        let dec = decompose(&ctx, &t, &s).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert!(partition_check(&dec, &t, &s, 200, &mut rng).unwrap().ok());
    }

    #[test]
    fn trivial_rep_single_region() {
        let d = build_root_datum("A", 2).unwrap();
        let w = weights_of(&d, &RepSpec::Trivial).unwrap();
        let p = Parabolic::minimal(2);
        let qq = Parabolic::parse(2, "a2").unwrap();
        let ctx = RegionContext::new(&d, &w, &p, &qq, &qf(1, 4)).unwrap();
        let t = d.vector_with_root_values(&from_ints(&[10, 12]));
        let s = d.vector_with_root_values(&[qf(1, 3), qf(1, 3)]);
        let dec = decompose(&ctx, &t, &s).unwrap();
        assert_eq!(dec.regions.len(), 1);
        assert!(dec.regions[0].lambdas[0].is_empty());
    }

    #[test]
    fn vertices_move_affinely() {
        let (d, w, t, s) = a2_adjoint_setup();
        let p = Parabolic::minimal(2);
        let qq = Parabolic::parse(2, "a1").unwrap();
        let ctx = RegionContext::new(&d, &w, &p, &qq, &qf(1, 4)).unwrap();
        let dec = decompose(&ctx, &t, &s).unwrap();
        let p0 = params(&t, &s);
        let t2 = &t + &t;
        let p1 = params(&t2, &s);
        for r in &dec.regions {
            let same = transport_vertices(&r.system, &p0, &p0).unwrap();
            assert!(same.iter().all(|v| v.from == v.to));
            let rep = check_affine(&r.system, &p0, &p1).unwrap();
            assert!(rep.count_stable && rep.midpoint_exact, "{rep:?}");
        }
    }
}

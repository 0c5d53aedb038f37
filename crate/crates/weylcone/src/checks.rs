//! Seeded instance generators and the end-to-end checks behind the
//! acceptance target. Each check returns plain data; thresholds are
//! decided by the caller.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use weylcone_core::asymptote::{slope, toy_row, Branch, ToyRow};
use weylcone_core::chambers::{bv_integral, bv_limit_tfinite, chamber_of, enumerate_bases, ParametricPolyhedron};
use weylcone_core::linalg::{nullspace, rank};
use weylcone_core::polyhedra::{integrate_exp_oracle, volume};
use weylcone_core::rational::{from_ints, q, qf, to_f64, RationalVector, Q};
use weylcone_core::regions::face_census;
use weylcone_core::regions::{
    check_affine, decompose, fit_slice_integral, kernel_basis, params, partition_check, pi_cones, psi_pi, refine,
    well_situated_failures, AffinityReport, Decomposition, DistanceFunction, PartitionReport, RegionContext,
    RegionView, Situation, SliceFamily, SliceFit,
};
use weylcone_core::rootspace::{
    build_root_datum, gamma, hull_membership, weights_of, GammaValue, Parabolic, RepSpec, RootDatum,
};
use weylcone_core::{Error, Result};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k/den` with `k` uniform so the value lies in `[lo, hi]`.
pub fn rational_in(rng: &mut impl Rng, lo: i64, hi: i64, den: i64) -> Q {
    qf(rng.gen_range(lo * den..=hi * den), den)
}

/// A regular dominant `T` with simple-root values in `[lo, hi]`.
pub fn random_regular(rng: &mut impl Rng, d: &RootDatum, lo: i64, hi: i64) -> RationalVector {
    let vals: Vec<Q> = (0..d.rank())
        .map(|_| loop {
            let v = rational_in(rng, lo, hi, 7);
            if v > Q::from_integer(0.into()) {
                break v;
            }
        })
        .collect();
    d.vector_with_root_values(&vals)
}

// ---------------------------------------------------------------- Γ vs hull

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GammaHullStats {
    pub tested: usize,
    pub agree: usize,
    pub boundary_skipped: usize,
    pub inside: usize,
}

/// Random `(P ⊆ Q, X, T)` off all boundaries: `Γ_P^Q(X,T)` against LP hull
/// membership of `X_P^Q`.
pub fn gamma_vs_hull(d: &RootDatum, points: usize, rng: &mut impl Rng) -> Result<GammaHullStats> {
    let all = Parabolic::all(d.rank());
    let pairs: Vec<(Parabolic, Parabolic)> = all
        .iter()
        .flat_map(|qq| {
            Parabolic::minimal(d.rank())
                .interval(qq)
                .into_iter()
                .map(move |p| (p, *qq))
        })
        .collect();
    let mut st = GammaHullStats::default();
    while st.tested < points {
        let (p, qq) = &pairs[rng.gen_range(0..pairs.len())];
        let t = random_regular(rng, d, 1, 6);
        let xv: Vec<Q> = (0..d.rank()).map(|_| rational_in(rng, -3, 9, 97)).collect();
        let x = d.vector_with_root_values(&xv);
        match gamma(d, p, qq, &x, &t)? {
            GammaValue::Boundary => {
                st.boundary_skipped += 1;
                continue;
            }
            g => {
                let lp = hull_membership(d, p, qq, &x, &t)?;
                st.tested += 1;
                if lp {
                    st.inside += 1;
                }
                if (g == GammaValue::One) == lp {
                    st.agree += 1;
                }
            }
        }
    }
    Ok(st)
}

// ------------------------------------------------------- parametric polytopes

/// A bounded family `a_i·v + x_i ≥ 0`: the simplex rows `e_k ≥ 0`,
/// `Σv ≤ ·` plus random extra rows, at offsets making `0` interior.
/// Rows have entries in `[-3, 3]`, so `n` is capped at `7^dim - 1`.
pub fn random_bounded_family(rng: &mut impl Rng, dim: usize, n: usize) -> (ParametricPolyhedron, Vec<Q>) {
    let n = n.min(7usize.saturating_pow(dim as u32) - 1);
    loop {
        let mut normals: Vec<Vec<Q>> = (0..dim)
            .map(|k| (0..dim).map(|j| if j == k { q(1) } else { q(0) }).collect())
            .collect();
        normals.push(vec![q(-1); dim]);
        while normals.len() < n {
            let row: Vec<Q> = (0..dim).map(|_| q(rng.gen_range(-3..=3))).collect();
            if row.iter().any(|c| *c != q(0)) && !normals.contains(&row) {
                normals.push(row);
            }
        }
        let x: Vec<Q> = (0..n).map(|_| rational_in(rng, 1, 5, 11)).collect();
        let Ok(pp) = ParametricPolyhedron::new(normals) else {
            continue;
        };
        let Ok(data) = enumerate_bases(&pp) else { continue };
        match chamber_of(&pp, &data, &x) {
            Ok(ch) if ch.maximal => return (pp, x),
            _ => continue,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BvStats {
    pub instances: usize,
    pub max_rel_error: f64,
    pub worst: Option<(usize, usize)>,
}

/// Exponential-sum formula against the simplicial oracle on random
/// instances with `dim ≤ max_dim` and at most `max_n` constraints.
pub fn bv_vs_oracle(instances: usize, max_dim: usize, max_n: usize, rng: &mut impl Rng) -> Result<BvStats> {
    let mut st = BvStats::default();
    while st.instances < instances {
        let dim = rng.gen_range(1..=max_dim);
        let n = rng.gen_range(dim + 1..=max_n.max(dim + 1));
        let (pp, x) = random_bounded_family(rng, dim, n);
        let data = enumerate_bases(&pp)?;
        let ch = chamber_of(&pp, &data, &x)?;
        let mu: Vec<Q> = (0..dim).map(|_| rational_in(rng, -2, 2, 13)).collect();
        let bv = match bv_integral(&pp, &data, &ch, &x, &mu) {
            Ok(v) => v,
            Err(Error::NonGeneric(_)) => continue,
            Err(e) => return Err(e),
        };
        let neg: Vec<f64> = mu.iter().map(|c| -to_f64(c)).collect();
        let oracle = integrate_exp_oracle(&pp.at(&x).vertices()?, &neg)?.value;
        let rel = (bv.value - oracle).abs() / oracle.abs();
        if rel > st.max_rel_error || st.worst.is_none() {
            st.max_rel_error = st.max_rel_error.max(rel);
            st.worst = Some((dim, n));
        }
        st.instances += 1;
    }
    Ok(st)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VolumeLimitStats {
    pub instances: usize,
    pub exact_matches: usize,
    pub degree_ok: usize,
    /// Outputs with a nonzero exponent that were checked for degree `≤ n−1`.
    pub nonzero_terms_checked: usize,
}

/// `μ = 0` limits against exact volumes at the base point and at two more
/// points of the same chamber; degree bounds on `μ = 0` and on a
/// non-generic `μ ≠ 0`.
pub fn volume_limits(instances: usize, max_dim: usize, max_n: usize, rng: &mut impl Rng) -> Result<VolumeLimitStats> {
    let mut st = VolumeLimitStats::default();
    while st.instances < instances {
        let dim = rng.gen_range(1..=max_dim);
        let n = rng.gen_range(dim + 1..=max_n.max(dim + 1));
        let (pp, x) = random_bounded_family(rng, dim, n);
        let data = enumerate_bases(&pp)?;
        let ch = chamber_of(&pp, &data, &x)?;
        let f = bv_limit_tfinite(&pp, &data, &ch, &vec![q(0); dim])?;
        let poly = f.polynomial_part();
        let mut exact = f.terms.len() <= 1;
        for scale in [q(1), q(2), qf(7, 3)] {
            let xs: Vec<Q> = x.iter().map(|c| c * &scale).collect();
            exact &= poly.eval(&xs) == volume(&pp.at(&xs).vertices()?)?;
        }
        let mut deg_ok = f.degrees().0 as usize <= dim;
        // μ = e_1 is orthogonal to every row without a first coordinate.
        let mut e1 = vec![q(0); dim];
        e1[0] = q(1);
        let g = bv_limit_tfinite(&pp, &data, &ch, &e1)?;
        let (d0, d1) = g.degrees();
        deg_ok &= d0 as usize <= dim;
        if g.terms.keys().any(|k| !k.is_zero()) {
            st.nonzero_terms_checked += 1;
            deg_ok &= (d1 as usize) < dim.max(1);
        }
        st.instances += 1;
        st.exact_matches += exact as usize;
        st.degree_ok += deg_ok as usize;
    }
    Ok(st)
}

// --------------------------------------------------------------- face census

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CensusStats {
    pub cases: usize,
    pub bijections: usize,
}

pub fn census(d: &RootDatum, per_pair: usize, rng: &mut impl Rng) -> Result<CensusStats> {
    let mut st = CensusStats::default();
    for qq in Parabolic::all(d.rank()) {
        for p in Parabolic::minimal(d.rank()).interval(&qq) {
            for _ in 0..per_pair {
                let t = random_regular(rng, d, 1, 9);
                let c = face_census(d, &p, &qq, &t)?;
                st.cases += 1;
                st.bijections += c.is_bijection() as usize;
            }
        }
    }
    Ok(st)
}

// --------------------------------------------------------------- SL(5)

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl5Example {
    /// `(α_2 − α_1)_Q` in simple-root coordinates.
    pub projected: Vec<Q>,
    pub span_sp_cap_aq_dim: usize,
    /// Basis of `span(S_P) ∩ a_Q*` in simple-root coordinates.
    pub span_sp_cap_aq: Vec<Vec<Q>>,
    pub contains_projection: bool,
    pub span_s_cap_aq_dim: usize,
}

/// Basis of `span(forms) ∩ {f : f_j = 0 for j ∈ zero_coords}` (`ϖ` coordinates).
fn span_cap_coordinate_subspace(forms: &[Vec<Q>], zero_coords: &[usize]) -> Vec<Vec<Q>> {
    if forms.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<Q>> = zero_coords
        .iter()
        .map(|&j| forms.iter().map(|f| f[j].clone()).collect())
        .collect();
    let combos = if cols.is_empty() {
        (0..forms.len())
            .map(|i| (0..forms.len()).map(|k| if k == i { q(1) } else { q(0) }).collect())
            .collect()
    } else {
        nullspace(&cols, forms.len())
    };
    let n = forms[0].len();
    let vecs: Vec<Vec<Q>> = combos
        .iter()
        .map(|c| {
            (0..n)
                .map(|j| c.iter().zip(forms).map(|(ci, f)| ci * &f[j]).sum())
                .collect()
        })
        .collect();
    let r = rank(&vecs);
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for v in vecs {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank(&trial) > basis.len() {
            basis = trial;
        }
        if basis.len() == r {
            break;
        }
    }
    basis
}

pub fn sl5_example() -> Result<Sl5Example> {
    let d = build_root_datum("A", 4)?;
    let g = Parabolic::group(4);
    let p = Parabolic::parse(4, "a4")?;
    let qq = Parabolic::parse(4, "a3,a4")?;
    let a = |c: &[i64]| d.form_from_roots(&from_ints(c));
    let target = a(&[-1, 1, 0, 0]);
    let projected_form = d.project_form(&target, &qq, &g)?;
    let projected = d.root_coords(&projected_form);
    let s = [a(&[-1, 0, 1, 1]), a(&[0, -1, 1, -1])];
    let s_p: Vec<Vec<Q>> = s
        .iter()
        .map(|f| d.project_form(f, &p, &g).map(|x| x.0))
        .collect::<Result<_>>()?;
    let s_raw: Vec<Vec<Q>> = s.iter().map(|f| f.0.clone()).collect();
    let levi_q = qq.levi();
    let cap_p = span_cap_coordinate_subspace(&s_p, &levi_q);
    let cap = span_cap_coordinate_subspace(&s_raw, &levi_q);
    let contains = {
        let mut m = cap_p.clone();
        m.push(projected_form.0.clone());
        rank(&m) == cap_p.len()
    };
    Ok(Sl5Example {
        projected,
        span_sp_cap_aq_dim: cap_p.len(),
        span_sp_cap_aq: cap_p
            .iter()
            .map(|f| d.root_coords(&weylcone_core::rational::LinearForm(f.clone())))
            .collect(),
        contains_projection: contains,
        span_s_cap_aq_dim: cap.len(),
    })
}

// ----------------------------------------------------- A2 adjoint instance

/// The fixed well-situated instance used for partition, affinity and the
/// slice fit: `A_2` adjoint, `P = P_0`, `Δ^Q = {α_1}`.
#[derive(Debug, Clone)]
pub struct RegionInstance {
    pub datum: RootDatum,
    pub ctx: RegionContext,
    pub dist: DistanceFunction,
    pub situation: Situation,
    pub t: RationalVector,
    pub s: RationalVector,
}

pub const INSTANCE_EPS: (i64, i64) = (1, 4);
pub const INSTANCE_MIN_T_NORM2: i64 = 64;

pub fn a2_adjoint_instance() -> Result<RegionInstance> {
    let d = build_root_datum("A", 2)?;
    let w = weights_of(&d, &RepSpec::Adjoint)?;
    let eps = qf(INSTANCE_EPS.0, INSTANCE_EPS.1);
    let qq = Parabolic::parse(2, "a1")?;
    let ctx = RegionContext::new(&d, &w, &Parabolic::minimal(2), &qq, &eps)?;
    let dist = DistanceFunction::new(&d, &psi_pi(&d, &w));
    Ok(RegionInstance {
        t: d.vector_with_root_values(&from_ints(&[20, 23])),
        s: d.vector_with_root_values(&[qf(1, 2), qf(1, 3)]),
        datum: d,
        ctx,
        dist,
        situation: Situation {
            eps,
            min_t_norm2: q(INSTANCE_MIN_T_NORM2),
        },
    })
}

impl RegionInstance {
    pub fn failures(&self, t: &RationalVector, s: &RationalVector) -> Result<Vec<String>> {
        let cones = pi_cones(&self.dist)?;
        well_situated_failures(&cones, &self.dist, &self.situation, t, s)
    }

    pub fn decompose(&self) -> Result<Decomposition> {
        decompose(&self.ctx, &self.t, &self.s)
    }

    pub fn partition(&self, points: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Result<PartitionReport> {
        partition_check(&self.decompose()?, &self.t, &self.s, points, rng)
    }

    /// Second sample `(T', S)` with `T' = T + (3, 5)` in root values; the
    /// third is the midpoint.
    pub fn far_t(&self) -> RationalVector {
        &self.t + &self.datum.vector_with_root_values(&from_ints(&[3, 5]))
    }

    pub fn affinity(&self) -> Result<Vec<AffinityReport>> {
        let dec = self.decompose()?;
        let p0 = params(&self.t, &self.s);
        let p1 = params(&self.far_t(), &self.s);
        dec.regions.iter().map(|r| check_affine(&r.system, &p0, &p1)).collect()
    }

    /// Slice fit inside the region touching `ker Π_0`, refined along
    /// `Π_1 = Π_0`.
    pub fn slice_fit(&self, range: &Q, grid: usize) -> Result<SliceFit> {
        let dec = self.decompose()?;
        let p = params(&self.t, &self.s);
        let r = dec
            .regions
            .iter()
            .find(|r| !r.pi0.is_empty())
            .ok_or_else(|| Error::Internal("no region meets ker Π_0".into()))?;
        let view = RegionView::of(&self.ctx, r);
        let rf = refine(&view, &r.pi0, &p)?;
        let cell = &rf.cells[0];
        let k = kernel_basis(&view, &r.pi0);
        let nv = cell.system.instantiate(&p)?.vertices()?.len();
        let fam = SliceFamily {
            weights: vec![qf(1, nv as i64); nv],
            x_dir: vec![qf(1, 8), q(0)],
            p_dirs: [from_ints(&[1, 1, 0, 0]), vec![q(0), q(0), qf(1, 10), qf(1, 20)]],
            mu: vec![qf(1, 7), qf(1, 11)],
        };
        fit_slice_integral(&cell.system, &p, &k, &fam, range, grid)
    }
}

// ------------------------------------------------------------------- toy

#[derive(Debug, Clone, PartialEq)]
pub struct ToyStats {
    pub rows: Vec<ToyRow>,
    pub gap_at_last: f64,
    pub log_slope: f64,
    /// Largest increment of `ln r` between consecutive samples.
    pub max_step: f64,
}

pub fn toy(ts: &[f64]) -> ToyStats {
    let rows: Vec<ToyRow> = ts.iter().map(|&t| toy_row(Branch::Plus, t)).collect();
    let logs: Vec<f64> = rows.iter().map(|r| r.log_residual).collect();
    let max_step = logs.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    ToyStats {
        gap_at_last: rows.last().map(|r| (r.integral - r.profile).abs()).unwrap_or(f64::NAN),
        log_slope: slope(ts, &logs),
        max_step,
        rows,
    }
}

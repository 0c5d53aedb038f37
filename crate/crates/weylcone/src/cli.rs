//! `weylcone` command line. Output goes to the given writer; failures are
//! reported as JSON on stderr with exit code 2 (arguments) or 1 (domain).

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use weylcone_core::asymptote::{sign_conventions, toy_row, Branch, ToyRow};
use weylcone_core::chambers::{
    bv_integral, bv_limit_tfinite, chamber_near, chamber_of, chamber_sigmas, enumerate_bases, ParametricPolyhedron,
};
use weylcone_core::polyhedra::{integrate_exp_oracle, monte_carlo_exp, volume, VPolytope};
use weylcone_core::rational::{parse_q, to_f64, Q};
use weylcone_core::regions::{
    decompose_cell, fit_slice_integral, kernel_basis, params, partition_check, pi_cones, psi_pi, refine, sign_cells,
    slice_exp_integral, slice_polytope, well_situated_failures, Decomposition, DistanceFunction, RegionContext,
    RegionView, Situation, SliceFamily,
};
use weylcone_core::rootspace::{
    build_root_datum, gamma, hull_membership, hull_points, weights_of, GammaValue, Parabolic, RepSpec, RootDatum,
};
use weylcone_core::{Error, Result};

use crate::json::{
    self, parse_rows, parse_strs, q_rows, q_str, q_strs, PolytopeJson, Provenance, SystemJson, TFiniteJson,
};

/// Environment variable holding the default seed.
pub const SEED_VAR: &str = "WEYLCONE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "weylcone",
    version,
    about = "Truncation geometry on root systems: exact polyhedra, chamber integrals and region decompositions"
)]
pub struct Cli {
    /// Seed for randomized steps (overrides WEYLCONE_SEED; default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel stages; output order does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cartan data, simple roots and weights of a representation.
    Rootdatum(RootdatumArgs),
    /// Evaluate Γ_P^Q(X, T).
    Gamma(GammaArgs),
    /// Exponential integral over a parametric polytope by the vertex formula.
    Bv(BvArgs),
    /// The π-dependent cones of the positive chamber.
    Cones(ConesArgs),
    /// Region decomposition, refinement and slices.
    #[command(subcommand)]
    Regions(RegionsCommand),
    /// The one-dimensional toy model.
    #[command(subcommand)]
    Asymptote(AsymptoteCommand),
    /// Brute-force polytope oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args, Clone)]
pub struct DatumArgs {
    /// Cartan type letter, or a full label such as A1xA1.
    #[arg(long = "type")]
    pub kind: String,
    /// Rank (omit when --type is a full label).
    #[arg(long)]
    pub rank: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RootdatumArgs {
    #[command(flatten)]
    pub datum: DatumArgs,
    /// trivial, standard, adjoint, symK or hw:a,b,...
    #[arg(long)]
    pub rep: Option<String>,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    #[command(flatten)]
    pub datum: DatumArgs,
    /// Levi roots of P, e.g. "a1,a3" (empty for the minimal parabolic).
    #[arg(long = "P", default_value = "")]
    pub p: String,
    #[arg(long = "Q", default_value = "")]
    pub q: String,
    /// X in simple-coroot coordinates, comma separated ("roots:a,b" gives simple-root values).
    #[arg(long = "X", allow_hyphen_values = true)]
    pub x: String,
    /// T in simple-coroot coordinates.
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t: String,
    /// Also report LP hull membership.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct BvArgs {
    /// JSON file {"normals": [[...]], "x": [...], "mu": [...]}; "-" for stdin.
    #[arg(long)]
    pub input: Option<String>,
    /// Rows a_i separated by ';', constraints a_i·v + x_i ≥ 0.
    #[arg(long, allow_hyphen_values = true)]
    pub normals: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// μ; the integrand is e^{−μ(v)}.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Compare against the simplicial oracle.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct ConesArgs {
    #[command(flatten)]
    pub datum: DatumArgs,
    #[arg(long)]
    pub rep: String,
}

#[derive(Debug, Subcommand)]
pub enum RegionsCommand {
    /// Split R(T,S) into regions with exact symbolic inequality systems.
    Decompose(DecomposeArgs),
    /// Cut one region along Π_1 into sign cells.
    Refine(RefineArgs),
    /// Slice a refined cell along ker Π_1 and integrate, optionally fitting a model.
    Slice(SliceArgs),
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub datum: DatumArgs,
    #[arg(long)]
    pub rep: String,
    #[arg(long = "P", default_value = "")]
    pub p: String,
    #[arg(long = "Q", default_value = "")]
    pub q: String,
    #[arg(long)]
    pub eps: String,
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t: String,
    #[arg(long = "S", allow_hyphen_values = true)]
    pub s: String,
    /// Smallest accepted ‖T‖² ("T sufficiently large").
    #[arg(long = "min-t-norm2", default_value = "64")]
    pub min_t_norm2: String,
    /// Skip the well-situatedness check.
    #[arg(long)]
    pub unchecked: bool,
    /// Random interior points for a partition check (0 to skip).
    #[arg(long, default_value_t = 0)]
    pub check_points: usize,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    /// Output of `regions decompose`; "-" for stdin.
    #[arg(long)]
    pub input: String,
    /// Region index (default: first region meeting ker Π_0).
    #[arg(long)]
    pub region: Option<usize>,
    /// Indices of Π_1 (default: all of Π_0).
    #[arg(long)]
    pub pi1: Option<String>,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    /// Output of `regions refine`; "-" for stdin.
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = 0)]
    pub cell: usize,
    /// Base point in frame coordinates (default: vertex centroid of the cell).
    #[arg(long = "X", allow_hyphen_values = true)]
    pub x: Option<String>,
    /// μ in frame coordinates; the integrand is e^{−μ}.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    /// Fit a t-finite model over a grid in (X, T, S).
    #[arg(long)]
    pub fit: bool,
    #[arg(long, default_value = "1/2")]
    pub range: String,
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
    /// Direction for X in frame coordinates (default: first frame axis / 8).
    #[arg(long, allow_hyphen_values = true)]
    pub x_dir: Option<String>,
    /// Direction for T in coroot coordinates (default: all ones).
    #[arg(long, allow_hyphen_values = true)]
    pub t_dir: Option<String>,
    /// Direction for S in coroot coordinates (default: zero).
    #[arg(long, allow_hyphen_values = true)]
    pub s_dir: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum AsymptoteCommand {
    /// Truncated Gaussian theta integral against its limit profile.
    Toy(ToyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ToyArgs {
    #[arg(long = "T-list", default_value = "2,3,4,5,6")]
    pub t_list: String,
    #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
    pub branch: BranchArg,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Vertex enumeration and exact volume of an H-polytope.
    Vertices(VerticesArgs),
    /// Simplicial exponential integral, with an optional Monte Carlo estimate.
    Integrate(IntegrateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum PolyFormat {
    Json,
    Off,
}

#[derive(Debug, Args)]
pub struct VerticesArgs {
    /// Polytope JSON with an "H" part; "-" for stdin.
    #[arg(long)]
    pub input: String,
    #[arg(long, value_enum, default_value_t = PolyFormat::Json)]
    pub format: PolyFormat,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long)]
    pub input: String,
    /// μ; the integrand is e^{−μ(v)}.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    /// Also estimate by Monte Carlo with this many samples.
    #[arg(long, default_value_t = 0)]
    pub monte_carlo: usize,
}

// ------------------------------------------------------------------ errors

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_argument_error() { 2 } else { 1 };
        CliError {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

impl CliError {
    fn argument(msg: impl Into<String>) -> Self {
        CliError {
            code: 2,
            kind: "invalid_argument".into(),
            message: msg.into(),
        }
    }

    fn io(e: std::io::Error) -> Self {
        CliError {
            code: 1,
            kind: "io".into(),
            message: e.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let v = json!({"error": {"kind": self.kind, "message": self.message, "exit_code": self.code}});
        json::to_string(&v)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

// ------------------------------------------------------------------ parsing

fn parse_list(s: &str) -> Result<Vec<Q>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_q(t).map_err(Error::Parse))
        .collect()
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<Q>>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_list)
        .collect()
}

fn parse_indices(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::argument(format!("bad index {t:?}")))
        })
        .collect()
}

fn parse_floats(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::argument(format!("bad number {t:?}")))
        })
        .collect()
}

fn datum_of(a: &DatumArgs) -> Result<RootDatum> {
    if a.kind.chars().any(|c| c.is_ascii_digit()) {
        let d = RootDatum::parse(&a.kind)?;
        if let Some(r) = a.rank {
            if r != d.rank() {
                return Err(Error::DimensionMismatch {
                    expected: d.rank(),
                    found: r,
                });
            }
        }
        Ok(d)
    } else {
        let r = a
            .rank
            .ok_or_else(|| Error::InvalidArgument("--rank is required with a bare type letter".into()))?;
        build_root_datum(&a.kind, r)
    }
}

/// Coroot coordinates, or simple-root values when prefixed with `roots:`.
fn vector(d: &RootDatum, s: &str) -> Result<weylcone_core::rational::RationalVector> {
    let v = match s.strip_prefix("roots:") {
        Some(r) => {
            let vals = parse_list(r)?;
            if vals.len() != d.rank() {
                return Err(Error::DimensionMismatch {
                    expected: d.rank(),
                    found: vals.len(),
                });
            }
            d.vector_with_root_values(&vals)
        }
        None => weylcone_core::rational::RationalVector(parse_list(s)?),
    };
    d.check_vector(&v)?;
    Ok(v)
}

fn read_input(path: &str) -> CliResult<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(CliError::io)?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| CliError::argument(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> CliResult<T> {
    let s = read_input(path)?;
    serde_json::from_str(&s).map_err(|e| CliError::argument(format!("{path}: {e}")))
}

pub fn seed_from_env(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::argument(format!("{SEED_VAR}={v:?} is not an integer"))),
        Err(_) => Ok(0),
    }
}

// ------------------------------------------------------------------ commands

pub struct Context {
    pub seed: u64,
    pub jobs: usize,
}

fn rootdatum(a: &RootdatumArgs) -> CliResult<String> {
    let d = datum_of(&a.datum)?;
    let mut v = json!({
        "type": d.label(),
        "rank": d.rank(),
        "cartan": q_rows(d.cartan_matrix()),
        "simple_roots": d.simple_roots().iter().map(|f| q_strs(f)).collect::<Vec<_>>(),
        "coordinates": "fundamental weights",
        "provenance": Provenance::exact(),
    });
    if let Some(r) = &a.rep {
        let spec = RepSpec::parse(r)?;
        let w = weights_of(&d, &spec)?;
        v["rep"] = json!(spec.label());
        v["weights"] = json!(w.weights.iter().map(|f| q_strs(f)).collect::<Vec<_>>());
    }
    Ok(json::to_string(&v))
}

fn gamma_cmd(a: &GammaArgs) -> CliResult<String> {
    let d = datum_of(&a.datum)?;
    let p = Parabolic::parse(d.rank(), &a.p)?;
    let q = Parabolic::parse(d.rank(), &a.q)?;
    let x = vector(&d, &a.x)?;
    let t = vector(&d, &a.t)?;
    let g = gamma(&d, &p, &q, &x, &t)?;
    let value = match g {
        GammaValue::Zero => json!(0),
        GammaValue::One => json!(1),
        GammaValue::Boundary => json!("boundary"),
    };
    let mut v = json!({
        "value": value,
        "P": p.label(),
        "Q": q.label(),
        "hull_points": hull_points(&d, &p, &q, &t)?.iter().map(|h| q_strs(h)).collect::<Vec<_>>(),
        "provenance": Provenance::exact(),
    });
    if a.oracle {
        v["lp_membership"] = json!(hull_membership(&d, &p, &q, &x, &t)?);
    }
    Ok(json::to_string(&v))
}

#[derive(Debug, Deserialize)]
struct BvInput {
    normals: Vec<Vec<String>>,
    x: Vec<String>,
    mu: Vec<String>,
}

fn bv_cmd(a: &BvArgs) -> CliResult<String> {
    let (normals, x, mu) = match &a.input {
        Some(path) => {
            let inp: BvInput = read_json(path)?;
            (parse_rows(&inp.normals)?, parse_strs(&inp.x)?, parse_strs(&inp.mu)?)
        }
        None => {
            let need = |o: &Option<String>, name: &str| {
                o.clone()
                    .ok_or_else(|| CliError::argument(format!("--{name} is required without --input")))
            };
            (
                parse_matrix(&need(&a.normals, "normals")?)?,
                parse_list(&need(&a.x, "x")?)?,
                parse_list(&need(&a.mu, "mu")?)?,
            )
        }
    };
    let pp = ParametricPolyhedron::new(normals)?;
    if x.len() != pp.n_constraints() {
        return Err(Error::DimensionMismatch {
            expected: pp.n_constraints(),
            found: x.len(),
        }
        .into());
    }
    let data = enumerate_bases(&pp)?;
    let on_wall = !chamber_of(&pp, &data, &x)?.maximal;
    let ch = chamber_near(&pp, &data, &x)?;
    let sigmas: Vec<Vec<usize>> = chamber_sigmas(&data, &ch).into_iter().collect();
    let (function, generic) = match bv_integral(&pp, &data, &ch, &x, &mu) {
        Ok(r) => (r.function, true),
        Err(Error::NonGeneric(_)) => (bv_limit_tfinite(&pp, &data, &ch, &mu)?, false),
        Err(e) => return Err(e.into()),
    };
    let xf: Vec<f64> = x.iter().map(to_f64).collect();
    let value = function.eval(&xf).value();
    let mut v = json!({
        "integrand": "exp(-mu.v)",
        "chamber": {"sigmas": sigmas, "on_wall": on_wall},
        "generic": generic,
        "function": TFiniteJson::from_tfinite(&function),
        "value": value,
        "provenance": {"function": Provenance::exact(), "value": Provenance::float("f64 evaluation of the exact function", None)},
    });
    if a.oracle {
        let neg: Vec<f64> = mu.iter().map(|c| -to_f64(c)).collect();
        let o = integrate_exp_oracle(&pp.at(&x).vertices()?, &neg)?;
        v["oracle"] = json!({"value": o.value, "relative_error": ((value - o.value) / o.value).abs()});
    }
    Ok(json::to_string(&v))
}

fn cones_cmd(a: &ConesArgs) -> CliResult<String> {
    let d = datum_of(&a.datum)?;
    let w = weights_of(&d, &RepSpec::parse(&a.rep)?)?;
    let dist = DistanceFunction::new(&d, &psi_pi(&d, &w));
    let fam = pi_cones(&dist)?;
    let v = json!({
        "type": d.label(),
        "rep": a.rep,
        "distance_terms": dist.terms.len(),
        "hyperplanes": fam.hyperplanes.iter().map(|h| q_strs(h)).collect::<Vec<_>>(),
        "cones": fam.cones.iter().map(|c| json!({"signs": c.signs, "witness": q_strs(&c.witness)})).collect::<Vec<_>>(),
        "provenance": Provenance::exact(),
    });
    Ok(json::to_string(&v))
}

// ------------------------------------------------------------------ regions

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionJson {
    pub pi_plus: Vec<usize>,
    pub lambdas: Vec<Vec<usize>>,
    pub deltas: Vec<String>,
    pub pi0: Vec<usize>,
    pub system: SystemJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Header {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    pub rep: String,
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    pub eps: String,
    #[serde(rename = "T")]
    pub t: Vec<String>,
    #[serde(rename = "S")]
    pub s: Vec<String>,
    /// `Π_P` in frame coordinates (`y_β = β(X)`, `β ∈ Δ_P`).
    pub pi: Vec<Vec<String>>,
    pub frame_roots: Vec<usize>,
    /// `B(T)` as a form on the parameters `(T;S)`.
    pub b_params: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionJson {
    #[serde(flatten)]
    pub header: Header,
    pub kappa2: String,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    pub well_situated: bool,
    pub regions: Vec<RegionJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub partition: Option<serde_json::Value>,
    pub provenance: Provenance,
}

fn region_json(r: &weylcone_core::regions::RegionDescriptor) -> RegionJson {
    RegionJson {
        pi_plus: r.pi_plus.clone(),
        lambdas: r.lambdas.clone(),
        deltas: q_strs(&r.deltas),
        pi0: r.pi0.clone(),
        system: SystemJson::from_system(&r.system),
    }
}

fn decompose_cmd(a: &DecomposeArgs, ctx: &Context) -> CliResult<String> {
    let d = datum_of(&a.datum)?;
    let spec = RepSpec::parse(&a.rep)?;
    let w = weights_of(&d, &spec)?;
    let p = Parabolic::parse(d.rank(), &a.p)?;
    let q = Parabolic::parse(d.rank(), &a.q)?;
    let eps = parse_q(&a.eps).map_err(Error::Parse)?;
    let t = vector(&d, &a.t)?;
    let s = vector(&d, &a.s)?;
    if !a.unchecked {
        let dist = DistanceFunction::new(&d, &psi_pi(&d, &w));
        let cones = pi_cones(&dist)?;
        let sit = Situation {
            eps: eps.clone(),
            min_t_norm2: parse_q(&a.min_t_norm2).map_err(Error::Parse)?,
        };
        let fails = well_situated_failures(&cones, &dist, &sit, &t, &s)?;
        if !fails.is_empty() {
            return Err(Error::NotWellSituated(fails.join("; ")).into());
        }
    }
    let rc = RegionContext::new(&d, &w, &p, &q, &eps)?;
    let pp = params(&t, &s);
    let cells = sign_cells(&rc, &pp)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs.max(1))
        .build()
        .map_err(|e| CliError {
            code: 1,
            kind: "internal".into(),
            message: e.to_string(),
        })?;
    let per_cell: Vec<Result<Vec<_>>> =
        pool.install(|| cells.par_iter().map(|c| decompose_cell(&rc, &pp, c)).collect());
    let mut regions = Vec::new();
    for r in per_cell {
        regions.extend(r?);
    }
    let dec = Decomposition {
        ctx: rc.clone(),
        regions,
    };
    let partition = if a.check_points > 0 {
        let mut rng = crate::checks::rng(ctx.seed);
        let rep = partition_check(&dec, &t, &s, a.check_points, &mut rng)?;
        Some(json!({
            "ok": rep.ok(),
            "regions": rep.regions,
            "volume_sum": q_str(&rep.volume_sum),
            "volume_r": q_str(&rep.volume_r),
            "points": rep.points,
            "exactly_one": rep.exactly_one,
            "seed": ctx.seed,
        }))
    } else {
        None
    };
    let out = DecompositionJson {
        header: Header {
            kind: d.label(),
            rank: d.rank(),
            rep: spec.label(),
            p: p.label(),
            q: q.label(),
            eps: q_str(&eps),
            t: q_strs(&t),
            s: q_strs(&s),
            pi: q_rows(&rc.pi),
            frame_roots: rc.frame.roots.clone(),
            b_params: q_strs(&rc.b_params()),
        },
        kappa2: q_str(&rc.kappa2),
        b: q_strs(&rc.b),
        well_situated: !a.unchecked,
        regions: dec.regions.iter().map(region_json).collect(),
        partition,
        provenance: Provenance::exact(),
    };
    Ok(json::to_string(&out))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellJson {
    pub signs: Vec<i64>,
    pub pyramid: bool,
    pub cone: Vec<Vec<String>>,
    pub system: SystemJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementJson {
    #[serde(flatten)]
    pub header: Header,
    pub region: usize,
    pub pi_plus: Vec<usize>,
    pub pi0: Vec<usize>,
    pub pi1: Vec<usize>,
    pub basis: Vec<usize>,
    pub lambda_b: Vec<String>,
    pub delta_prime: Option<String>,
    pub problematic: Vec<Vec<String>>,
    pub cells: Vec<CellJson>,
    pub provenance: Provenance,
}

fn header_params(h: &Header) -> Result<Vec<Q>> {
    let mut p = parse_strs(&h.t)?;
    p.extend(parse_strs(&h.s)?);
    Ok(p)
}

fn signs_of(pi_len: usize, pi_plus: &[usize]) -> Vec<i64> {
    (0..pi_len).map(|i| if pi_plus.contains(&i) { 1 } else { -1 }).collect()
}

fn refine_cmd(a: &RefineArgs) -> CliResult<String> {
    let dec: DecompositionJson = read_json(&a.input)?;
    let h = &dec.header;
    let idx = match a.region {
        Some(i) => i,
        None => dec.regions.iter().position(|r| !r.pi0.is_empty()).unwrap_or(0),
    };
    let r = dec
        .regions
        .get(idx)
        .ok_or_else(|| CliError::argument(format!("no region {idx}")))?;
    let pi = parse_rows(&h.pi)?;
    let view = RegionView {
        system: r.system.to_system()?,
        signs: signs_of(pi.len(), &r.pi_plus),
        pi,
        pi0: r.pi0.clone(),
        b: parse_strs(&h.b_params)?,
    };
    let pi1 = match &a.pi1 {
        Some(s) => parse_indices(s)?,
        None => r.pi0.clone(),
    };
    let p = header_params(h)?;
    let rf = refine(&view, &pi1, &p)?;
    let out = RefinementJson {
        header: h.clone(),
        region: idx,
        pi_plus: r.pi_plus.clone(),
        pi0: r.pi0.clone(),
        pi1: rf.pi1.clone(),
        basis: rf.basis.clone(),
        lambda_b: q_strs(&rf.lambda_b),
        delta_prime: rf.delta_prime.as_ref().map(q_str),
        problematic: q_rows(&rf.problematic),
        cells: rf
            .cells
            .iter()
            .map(|c| CellJson {
                signs: c.signs.clone(),
                pyramid: c.pyramid,
                cone: q_rows(&c.cone),
                system: SystemJson::from_system(&c.system),
            })
            .collect(),
        provenance: Provenance::exact(),
    };
    Ok(json::to_string(&out))
}

fn slice_cmd(a: &SliceArgs) -> CliResult<String> {
    let rf: RefinementJson = read_json(&a.input)?;
    let h = &rf.header;
    let cell = rf
        .cells
        .get(a.cell)
        .ok_or_else(|| CliError::argument(format!("no cell {}", a.cell)))?;
    let sys = cell.system.to_system()?;
    let pi = parse_rows(&h.pi)?;
    let view = RegionView {
        system: sys.clone(),
        signs: signs_of(pi.len(), &rf.pi_plus),
        pi,
        pi0: rf.pi0.clone(),
        b: parse_strs(&h.b_params)?,
    };
    let p = header_params(h)?;
    let kernel = kernel_basis(&view, &rf.pi1);
    if kernel.is_empty() {
        return Err(Error::InvalidArgument("ker Π_1 is zero; the slice is a point".into()).into());
    }
    let mu = parse_list(&a.mu)?;
    if mu.len() != sys.dim {
        return Err(Error::DimensionMismatch {
            expected: sys.dim,
            found: mu.len(),
        }
        .into());
    }
    let verts = sys.instantiate(&p)?.vertices()?;
    let x = match &a.x {
        Some(s) => parse_list(s)?,
        None => verts.centroid().ok_or(Error::Infeasible)?,
    };
    let poly = slice_polytope(&sys, &p, &x, &kernel)?;
    let integral = slice_exp_integral(&poly, &kernel, &x, &mu)?;
    let mut v = json!({
        "integrand": "exp(-mu.y)",
        "kernel": q_rows(&kernel),
        "X": q_strs(&x),
        "slice": PolytopeJson::default().with_v(&poly),
        "integral": integral,
        "provenance": {"slice": Provenance::exact(), "integral": Provenance::float("simplicial exp divided differences", None)},
    });
    if a.fit {
        let n = p.len() / 2;
        let x_dir = match &a.x_dir {
            Some(s) => parse_list(s)?,
            None => {
                let mut d = vec![Q::from_integer(0.into()); sys.dim];
                d[0] = weylcone_core::rational::qf(1, 8);
                d
            }
        };
        let mut t_dir = match &a.t_dir {
            Some(s) => parse_list(s)?,
            None => vec![Q::from_integer(1.into()); n],
        };
        t_dir.extend(vec![Q::from_integer(0.into()); n]);
        let mut s_dir = vec![Q::from_integer(0.into()); n];
        s_dir.extend(match &a.s_dir {
            Some(s) => parse_list(s)?,
            None => vec![Q::from_integer(0.into()); n],
        });
        if t_dir.len() != 2 * n || s_dir.len() != 2 * n || x_dir.len() != sys.dim {
            return Err(CliError::argument("direction lengths do not match the rank"));
        }
        let nv = verts.len();
        let fam = SliceFamily {
            weights: vec![weylcone_core::rational::qf(1, nv as i64); nv],
            x_dir,
            p_dirs: [t_dir, s_dir],
            mu,
        };
        let range = parse_q(&a.range).map_err(Error::Parse)?;
        let fit = fit_slice_integral(&sys, &p, &kernel, &fam, &range, a.grid)?;
        v["fit"] = json!({
            "samples": fit.samples,
            "range": q_str(&fit.range),
            "exponents": fit.exponents.iter().map(|e| q_strs(e)).collect::<Vec<_>>(),
            "max_residual": fit.report.max_residual,
            "condition": fit.report.condition,
            "regularized": fit.report.regularized,
            "model": TFiniteJson::from_tfinite(&fit.report.model),
            "note": "X is the vertex-weighted centroid moved by a·x_dir; T and S move by b·t_dir and c·s_dir",
        });
    }
    Ok(json::to_string(&v))
}

// ------------------------------------------------------------------ others

fn toy_cmd(a: &ToyArgs, ctx: &Context) -> CliResult<String> {
    let ts = parse_floats(&a.t_list)?;
    let branch = match a.branch {
        BranchArg::Plus => Branch::Plus,
        BranchArg::Minus => Branch::Minus,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs.max(1))
        .build()
        .map_err(|e| CliError {
            code: 1,
            kind: "internal".into(),
            message: e.to_string(),
        })?;
    let rows: Vec<ToyRow> = pool.install(|| ts.par_iter().map(|&t| toy_row(branch, t)).collect());
    match a.format {
        TableFormat::Csv => {
            let mut s = String::from("T,I,profile,residual,log_residual,error_estimate\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.t, r.integral, r.profile, r.residual, r.log_residual, r.error_estimate
                ));
            }
            Ok(s)
        }
        TableFormat::Json => {
            let mut v = json!({
                "branch": format!("{:?}", branch).to_lowercase(),
                "rows": rows.iter().map(|r| json!({
                    "T": r.t, "I": r.integral, "profile": r.profile, "residual": r.residual,
                    "log_residual": r.log_residual, "error_estimate": r.error_estimate,
                })).collect::<Vec<_>>(),
                "provenance": Provenance::float("adaptive Simpson; log_residual from the closed-form tail", Some(1e-10)),
            });
            if branch == Branch::Minus {
                let s = sign_conventions(ts.first().copied().unwrap_or(3.0), 1e-6);
                v["orientation"] = json!({"reversed_matches": s.reversed_matches, "signed_matches": s.signed_matches});
            }
            Ok(json::to_string(&v))
        }
    }
}

fn vertices_cmd(a: &VerticesArgs) -> CliResult<String> {
    let pj: PolytopeJson = read_json(&a.input)?;
    let h = pj.to_h()?;
    let v = h.vertices()?;
    match a.format {
        PolyFormat::Off => Ok(crate::off::to_off(&v)?),
        PolyFormat::Json => {
            let vol = if v.is_full_dimensional() {
                Some(q_str(&volume(&v)?))
            } else {
                None
            };
            let out = json!({
                "polytope": PolytopeJson::from_h(&h).with_v(&v),
                "affine_dim": v.affine_dim(),
                "volume": vol,
                "provenance": Provenance::exact(),
            });
            Ok(json::to_string(&out))
        }
    }
}

fn integrate_cmd(a: &IntegrateArgs, ctx: &Context) -> CliResult<String> {
    let pj: PolytopeJson = read_json(&a.input)?;
    let poly: VPolytope = pj.to_v()?;
    let mu = parse_list(&a.mu)?;
    if mu.len() != poly.dim {
        return Err(Error::DimensionMismatch {
            expected: poly.dim,
            found: mu.len(),
        }
        .into());
    }
    let neg: Vec<f64> = mu.iter().map(|c| -to_f64(c)).collect();
    let o = integrate_exp_oracle(&poly, &neg)?;
    let mut v = json!({
        "integrand": "exp(-mu.v)",
        "value": o.value,
        "degenerate": o.degenerate,
        "provenance": Provenance::float("simplicial exp divided differences", None),
    });
    if a.monte_carlo > 0 {
        let mut rng = crate::checks::rng(ctx.seed);
        let (mean, se) = monte_carlo_exp(&poly, &neg, a.monte_carlo, &mut rng)?;
        v["monte_carlo"] = json!({"mean": mean, "standard_error": se, "samples": a.monte_carlo, "seed": ctx.seed});
    }
    Ok(json::to_string(&v))
}

pub fn execute(cli: &Cli) -> CliResult<String> {
    let ctx = Context {
        seed: seed_from_env(cli.seed)?,
        jobs: cli.jobs,
    };
    match &cli.command {
        Command::Rootdatum(a) => rootdatum(a),
        Command::Gamma(a) => gamma_cmd(a),
        Command::Bv(a) => bv_cmd(a),
        Command::Cones(a) => cones_cmd(a),
        Command::Regions(RegionsCommand::Decompose(a)) => decompose_cmd(a, &ctx),
        Command::Regions(RegionsCommand::Refine(a)) => refine_cmd(a),
        Command::Regions(RegionsCommand::Slice(a)) => slice_cmd(a),
        Command::Asymptote(AsymptoteCommand::Toy(a)) => toy_cmd(a, &ctx),
        Command::Oracle(OracleCommand::Vertices(a)) => vertices_cmd(a),
        Command::Oracle(OracleCommand::Integrate(a)) => integrate_cmd(a, &ctx),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let ce = CliError::argument(e.to_string().trim_end());
            let _ = err.write_all(ce.to_json().as_bytes());
            return 2;
        }
    };
    match execute(&cli) {
        Ok(s) => {
            if out.write_all(s.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = err.write_all(e.to_json().as_bytes());
            e.code
        }
    }
}

//! JSON exchange formats. Rationals travel as `"p/q"` strings so every
//! pipeline stays exact; floats use serde_json's shortest round-trip form.

use serde::{Deserialize, Serialize};

use weylcone_core::polyhedra::{HPolyhedron, Halfspace, VPolytope};
use weylcone_core::rational::{fmt_q, parse_q, LinearForm, Q};
use weylcone_core::regions::{RowKind, SymRow, SymbolicPolytope};
use weylcone_core::tfinite::{Coeff, TFinite};
use weylcone_core::{Error, Result};

pub fn q_str(v: &Q) -> String {
    fmt_q(v)
}

pub fn q_strs(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

pub fn q_rows(m: &[Vec<Q>]) -> Vec<Vec<String>> {
    m.iter().map(|r| q_strs(r)).collect()
}

pub fn parse_str(s: &str) -> Result<Q> {
    parse_q(s.trim()).map_err(Error::Parse)
}

pub fn parse_strs(v: &[String]) -> Result<Vec<Q>> {
    v.iter().map(|s| parse_str(s)).collect()
}

pub fn parse_rows(m: &[Vec<String>]) -> Result<Vec<Vec<Q>>> {
    m.iter().map(|r| parse_strs(r)).collect()
}

/// Whether the numbers in a document are exact or floating point.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub numeric: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
}

impl Provenance {
    pub fn exact() -> Self {
        Provenance {
            numeric: "exact".into(),
            error_bound: None,
            method: None,
        }
    }

    pub fn float(method: &str, error_bound: Option<f64>) -> Self {
        Provenance {
            numeric: "float".into(),
            error_bound,
            method: Some(method.into()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HalfspaceJson {
    pub normal: Vec<String>,
    pub offset: String,
}

/// `{"H": [...], "V": [...]}`; either side may be absent on input.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct PolytopeJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dim: Option<usize>,
    #[serde(rename = "H", skip_serializing_if = "Option::is_none", default)]
    pub h: Option<Vec<HalfspaceJson>>,
    #[serde(rename = "V", skip_serializing_if = "Option::is_none", default)]
    pub v: Option<Vec<Vec<String>>>,
}

impl PolytopeJson {
    pub fn from_h(h: &HPolyhedron) -> Self {
        PolytopeJson {
            dim: Some(h.dim),
            h: Some(
                h.rows
                    .iter()
                    .map(|r| HalfspaceJson {
                        normal: q_strs(&r.normal),
                        offset: q_str(&r.offset),
                    })
                    .collect(),
            ),
            v: None,
        }
    }

    pub fn with_v(mut self, v: &VPolytope) -> Self {
        self.dim = Some(v.dim);
        self.v = Some(q_rows(&v.vertices));
        self
    }

    pub fn to_h(&self) -> Result<HPolyhedron> {
        let rows = self
            .h
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("polytope has no \"H\" part".into()))?;
        let dim = match (self.dim, rows.first()) {
            (Some(d), _) => d,
            (None, Some(r)) => r.normal.len(),
            (None, None) => return Err(Error::InvalidArgument("empty H-representation without \"dim\"".into())),
        };
        let hs: Vec<Halfspace> = rows
            .iter()
            .map(|r| Ok(Halfspace::new(parse_strs(&r.normal)?, parse_str(&r.offset)?)))
            .collect::<Result<_>>()?;
        HPolyhedron::from_rows(dim, hs)
    }

    pub fn to_v(&self) -> Result<VPolytope> {
        if let Some(v) = &self.v {
            let pts = parse_rows(v)?;
            let dim = self.dim.or_else(|| pts.first().map(|p| p.len())).unwrap_or(0);
            return VPolytope::from_points(dim, pts);
        }
        self.to_h()?.vertices()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MonomialJson {
    pub exps: Vec<u32>,
    pub coeff: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exponent: Vec<String>,
    pub poly: Vec<MonomialJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TFiniteJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

/// Coefficients that know how to become JSON values.
pub trait JsonCoeff: Coeff {
    fn to_json(&self) -> serde_json::Value;
}

impl JsonCoeff for Q {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(fmt_q(self))
    }
}

impl JsonCoeff for f64 {
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self)
    }
}

impl TFiniteJson {
    pub fn from_tfinite<C: JsonCoeff>(f: &TFinite<C>) -> Self {
        TFiniteJson {
            nvars: f.nvars,
            terms: f
                .terms
                .iter()
                .map(|(e, p)| TermJson {
                    exponent: q_strs(e),
                    poly: p
                        .terms
                        .iter()
                        .map(|(exps, c)| MonomialJson {
                            exps: exps.clone(),
                            coeff: c.to_json(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Exact round trip; fails on float coefficients.
    pub fn to_exact(&self) -> Result<TFinite<Q>> {
        use weylcone_core::tfinite::Poly;
        let mut f = TFinite::<Q>::zero(self.nvars);
        for t in &self.terms {
            let mut p = Poly::<Q>::zero(self.nvars);
            for m in &t.poly {
                let c = m
                    .coeff
                    .as_str()
                    .ok_or_else(|| Error::InvalidArgument("expected a rational coefficient string".into()))?;
                p.add_term(m.exps.clone(), parse_str(c)?);
            }
            f.add_term(LinearForm(parse_strs(&t.exponent)?), p);
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RowJson {
    pub normal: Vec<String>,
    /// Coefficients of the right-hand side in the parameters.
    pub rhs: Vec<String>,
    pub kind: String,
}

fn kind_str(k: &RowKind) -> String {
    match k {
        RowKind::SimpleRoot(b) => format!("simple_root:{b}"),
        RowKind::HatP(b) => format!("hat_weight:{b}"),
        RowKind::RootQ(b) => format!("root_q:{b}"),
        RowKind::WeightQ(b) => format!("weight_q:{b}"),
        RowKind::Sign(i) => format!("sign:{i}"),
        RowKind::Level { weight, level, upper } => {
            format!("level:{weight}:{level}:{}", if *upper { "upper" } else { "lower" })
        }
        RowKind::Cut => "cut".into(),
        RowKind::Problematic(i) => format!("problematic:{i}"),
        RowKind::Free(i) => format!("free:{i}"),
    }
}

fn parse_kind(s: &str) -> Result<RowKind> {
    let bad = || Error::InvalidArgument(format!("unknown row kind {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> Result<usize> { parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
    Ok(match parts[0] {
        "simple_root" => RowKind::SimpleRoot(num(1)?),
        "hat_weight" => RowKind::HatP(num(1)?),
        "root_q" => RowKind::RootQ(num(1)?),
        "weight_q" => RowKind::WeightQ(num(1)?),
        "sign" => RowKind::Sign(num(1)?),
        "level" => RowKind::Level {
            weight: num(1)?,
            level: num(2)?,
            upper: match parts.get(3) {
                Some(&"upper") => true,
                Some(&"lower") => false,
                _ => return Err(bad()),
            },
        },
        "cut" => RowKind::Cut,
        "problematic" => RowKind::Problematic(num(1)?),
        "free" => RowKind::Free(num(1)?),
        _ => return Err(bad()),
    })
}

/// Symbolic inequalities `normal·y ≥ rhs·(T;S)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemJson {
    pub dim: usize,
    pub nparams: usize,
    pub ineqs: Vec<RowJson>,
}

impl SystemJson {
    pub fn from_system(s: &SymbolicPolytope) -> Self {
        SystemJson {
            dim: s.dim,
            nparams: s.nparams,
            ineqs: s
                .rows
                .iter()
                .map(|r| RowJson {
                    normal: q_strs(&r.normal),
                    rhs: q_strs(&r.rhs),
                    kind: kind_str(&r.kind),
                })
                .collect(),
        }
    }

    pub fn to_system(&self) -> Result<SymbolicPolytope> {
        let mut s = SymbolicPolytope::new(self.dim, self.nparams);
        for r in &self.ineqs {
            let row = SymRow {
                normal: parse_strs(&r.normal)?,
                rhs: parse_strs(&r.rhs)?,
                kind: parse_kind(&r.kind)?,
            };
            if row.normal.len() != self.dim || row.rhs.len() != self.nparams {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: row.normal.len(),
                });
            }
            s.rows.push(row);
        }
        Ok(s)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use weylcone_core::rational::{from_ints, qf};

    #[test]
    fn polytope_round_trip() {
        let h = HPolyhedron::cube(&from_ints(&[0, 0]), &[qf(1, 2), qf(3, 1)]);
        let j = PolytopeJson::from_h(&h).with_v(&h.vertices().unwrap());
        let text = to_string(&j);
        let back: PolytopeJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_h().unwrap(), h);
        assert_eq!(back.to_v().unwrap(), h.vertices().unwrap());
        assert!(text.contains("\"1/2\""));
    }

    #[test]
    fn kinds_round_trip() {
        for k in [
            RowKind::SimpleRoot(1),
            RowKind::Level {
                weight: 3,
                level: 0,
                upper: true,
            },
            RowKind::Cut,
            RowKind::Problematic(2),
        ] {
            assert_eq!(parse_kind(&kind_str(&k)).unwrap(), k);
        }
        assert!(parse_kind("level:1").is_err());
    }

    #[test]
    fn tfinite_round_trip() {
        use weylcone_core::tfinite::Poly;
        let mut f = TFinite::<Q>::exp(LinearForm(vec![qf(-1, 2), qf(1, 1)]));
        f.add_term(LinearForm::zero(2), Poly::affine(&[qf(1, 3), qf(0, 1)], qf(2, 1)));
        let j = TFiniteJson::from_tfinite(&f);
        let text = serde_json::to_string(&j).unwrap();
        let back: TFiniteJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_exact().unwrap(), f);
    }
}

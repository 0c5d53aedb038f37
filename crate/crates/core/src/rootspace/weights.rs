use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{add_vec, LinearForm, Q};

use super::RootDatum;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepSpec {
    /// No weights on 𝔞 at all.
    Trivial,
    Standard,
    Adjoint,
    SymPower(u32),
    /// Saturation of a dominant highest weight given in `ϖ` coordinates.
    HighestWeight(Vec<Q>),
}

impl RepSpec {
    /// Parses `trivial`, `standard`, `adjoint`, `sym3`, `hw:3,3,3,3`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "trivial" => return Ok(RepSpec::Trivial),
            "standard" | "std" => return Ok(RepSpec::Standard),
            "adjoint" | "adj" => return Ok(RepSpec::Adjoint),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("sym") {
            let k: u32 = k
                .trim_start_matches(['^', ':'])
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad sym power {s:?}")))?;
            return Ok(RepSpec::SymPower(k));
        }
        if let Some(rest) = s.strip_prefix("hw:").or_else(|| s.strip_prefix("hw=")) {
            let v: core::result::Result<Vec<Q>, _> = rest.split(',').map(crate::rational::parse_q).collect();
            return Ok(RepSpec::HighestWeight(v?));
        }
        Err(Error::InvalidArgument(format!("unknown representation {s:?}")))
    }

    pub fn label(&self) -> String {
        match self {
            RepSpec::Trivial => "trivial".into(),
            RepSpec::Standard => "standard".into(),
            RepSpec::Adjoint => "adjoint".into(),
            RepSpec::SymPower(k) => format!("sym{k}"),
            RepSpec::HighestWeight(v) => {
                let parts: Vec<String> = v.iter().map(crate::rational::fmt_q).collect();
                format!("hw:{}", parts.join(","))
            }
        }
    }
}

/// Nonzero weights of a representation, without multiplicity, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSet {
    pub spec: RepSpec,
    pub weights: Vec<LinearForm>,
}

impl WeightSet {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn contains(&self, f: &LinearForm) -> bool {
        self.weights.binary_search(f).is_ok()
    }
}

impl RootDatum {
    /// Positive roots in simple-root coordinates (integers), sorted by height.
    pub fn positive_roots_alpha(&self) -> Vec<Vec<Q>> {
        let n = self.rank();
        let mut seen: BTreeSet<LinearForm> = BTreeSet::new();
        let mut queue: VecDeque<LinearForm> = self.simple_roots().into_iter().collect();
        while let Some(r) = queue.pop_front() {
            if !seen.insert(r.clone()) {
                continue;
            }
            for i in 0..n {
                let s = self.reflect_form(&r, i);
                if !seen.contains(&s) {
                    queue.push_back(s);
                }
            }
        }
        let mut pos: Vec<Vec<Q>> = seen
            .iter()
            .map(|r| self.root_coords(r))
            .filter(|a| a.iter().all(|c| !c.is_negative()))
            .collect();
        pos.sort_by(|a, b| {
            let ha: Q = a.iter().sum();
            let hb: Q = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        pos
    }

    pub fn positive_roots(&self) -> Vec<LinearForm> {
        self.positive_roots_alpha()
            .iter()
            .map(|a| self.form_from_roots(a))
            .collect()
    }

    pub fn is_dominant(&self, f: &LinearForm) -> bool {
        f.iter().all(|c| !c.is_negative())
    }

    /// Weyl orbit of a form under the simple reflections.
    pub fn weyl_orbit(&self, f: &LinearForm) -> BTreeSet<LinearForm> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([f.clone()]);
        while let Some(g) = queue.pop_front() {
            if !seen.insert(g.clone()) {
                continue;
            }
            for i in 0..self.rank() {
                let s = self.reflect_form(&g, i);
                if !seen.contains(&s) {
                    queue.push_back(s);
                }
            }
        }
        seen
    }

    /// All weights (zero included) of the saturated set generated by a
    /// dominant `λ`: the Weyl images of dominant `μ ≤ λ`.
    pub fn saturation(&self, lambda: &LinearForm) -> Result<BTreeSet<LinearForm>> {
        crate::error::check_dim(self.rank(), lambda.dim())?;
        if !self.is_dominant(lambda) {
            return Err(Error::InvalidArgument(format!(
                "highest weight {:?} is not dominant",
                lambda.iter().map(crate::rational::fmt_q).collect::<Vec<_>>()
            )));
        }
        let roots = self.positive_roots();
        // Every dominant μ < λ is reachable from λ through dominant weights
        // by subtracting positive roots one at a time.
        let mut dominant = BTreeSet::new();
        let mut queue = VecDeque::from([lambda.clone()]);
        while let Some(mu) = queue.pop_front() {
            if !dominant.insert(mu.clone()) {
                continue;
            }
            for r in &roots {
                let next = &mu - r;
                if self.is_dominant(&next) && !dominant.contains(&next) {
                    queue.push_back(next);
                }
            }
        }
        let mut all = BTreeSet::new();
        for mu in &dominant {
            all.extend(self.weyl_orbit(mu));
        }
        Ok(all)
    }

    fn standard_weights_with_zero(&self) -> BTreeSet<LinearForm> {
        let mut all = BTreeSet::new();
        let mut off = 0;
        let n = self.rank();
        for &(_, r) in self.components() {
            let w = self.fundamental_weight(off);
            all.extend(self.saturation(&w).expect("ϖ is dominant"));
            off += r;
        }
        if self.components().len() > 1 {
            all.insert(LinearForm::zero(n));
        }
        all
    }
}

/// `weights_of(datum, rep_spec)`.
pub fn weights_of(d: &RootDatum, spec: &RepSpec) -> Result<WeightSet> {
    let n = d.rank();
    let all: BTreeSet<LinearForm> = match spec {
        RepSpec::Trivial => BTreeSet::new(),
        RepSpec::Standard => d.standard_weights_with_zero(),
        RepSpec::Adjoint => {
            let mut s = BTreeSet::new();
            for r in d.positive_roots() {
                s.insert(-&r);
                s.insert(r);
            }
            s
        }
        RepSpec::SymPower(k) => {
            let base: Vec<LinearForm> = d.standard_weights_with_zero().into_iter().collect();
            let mut acc: BTreeSet<LinearForm> = BTreeSet::from([LinearForm::zero(n)]);
            for _ in 0..*k {
                let mut next = BTreeSet::new();
                for a in &acc {
                    for b in &base {
                        next.insert(LinearForm(add_vec(a, b)));
                    }
                }
                acc = next;
            }
            acc
        }
        RepSpec::HighestWeight(v) => d.saturation(&LinearForm(v.clone()))?,
    };
    let weights: Vec<LinearForm> = all.into_iter().filter(|w| !w.is_zero()).collect();
    Ok(WeightSet {
        spec: spec.clone(),
        weights,
    })
}

/// Highest weight `k·ρ = k(ϖ_1 + … + ϖ_n)`.
pub fn multiple_of_rho(d: &RootDatum, k: i64) -> RepSpec {
    RepSpec::HighestWeight((0..d.rank()).map(|_| crate::rational::q(k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::rootspace::build_root_datum;

    #[test]
    fn adjoint_a2_is_six_roots() {
        let d = build_root_datum("A", 2).unwrap();
        let w = weights_of(&d, &RepSpec::Adjoint).unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!(d.positive_roots().len(), 3);
    }

    #[test]
    fn standard_a1_is_pair() {
        let d = build_root_datum("A", 1).unwrap();
        let w = weights_of(&d, &RepSpec::Standard).unwrap();
        assert_eq!(w.weights, vec![LinearForm(vec![q(-1)]), LinearForm(vec![q(1)])]);
    }

    #[test]
    fn root_counts() {
        for (k, n, count) in [("A", 3, 6), ("B", 3, 9), ("C", 3, 9), ("D", 4, 12)] {
            let d = build_root_datum(k, n).unwrap();
            assert_eq!(d.positive_roots().len(), count, "{k}{n}");
        }
    }

    #[test]
    fn rho_multiple_contains_sl5_functionals() {
        let d = build_root_datum("A", 4).unwrap();
        let w = weights_of(&d, &multiple_of_rho(&d, 3)).unwrap();
        let s1 = d.form_from_roots(&[q(-1), q(0), q(1), q(1)]);
        let s2 = d.form_from_roots(&[q(0), q(-1), q(1), q(-1)]);
        assert!(w.contains(&s1));
        assert!(w.contains(&s2));
    }

    #[test]
    fn rejects_non_dominant() {
        let d = build_root_datum("A", 2).unwrap();
        assert!(weights_of(&d, &RepSpec::HighestWeight(vec![q(1), q(-1)])).is_err());
    }

    #[test]
    fn weyl_invariant() {
        let d = build_root_datum("B", 2).unwrap();
        for spec in [RepSpec::Standard, RepSpec::Adjoint, RepSpec::SymPower(2)] {
            let w = weights_of(&d, &spec).unwrap();
            for i in 0..2 {
                let mut img: Vec<LinearForm> = w.weights.iter().map(|f| d.reflect_form(f, i)).collect();
                img.sort();
                assert_eq!(img, w.weights);
            }
        }
    }
}

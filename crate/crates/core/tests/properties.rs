//! Property tests across module boundaries, each against an independent
//! oracle.

use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use weylcone_core::chambers::{bv_integral, bv_limit_tfinite, chamber_near, enumerate_bases, ParametricPolyhedron};
use weylcone_core::polyhedra::{integrate_exp_oracle, volume};
use weylcone_core::rational::{q, qf, to_f64, Q};
use weylcone_core::rootspace::{build_root_datum, gamma, hull_membership, GammaValue, Parabolic};
use weylcone_core::Error;

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=120).prop_map(|k| qf(2 * k + 1, 26))
}

fn positive() -> impl Strategy<Value = Q> {
    (1i64..=60).prop_map(|k| qf(k, 7))
}

/// `e_k ≥ 0`, `Σv ≤ x`, plus a pair of extra rows.
fn family() -> impl Strategy<Value = (ParametricPolyhedron, Vec<Q>)> {
    (
        prop::collection::vec(-2i64..=2, 2),
        prop::collection::vec(-2i64..=2, 2),
        prop::collection::vec(positive(), 5),
    )
        .prop_filter_map("degenerate rows", |(a, b, x)| {
            let a: Vec<Q> = a.into_iter().map(q).collect();
            let b: Vec<Q> = b.into_iter().map(q).collect();
            let zero = vec![q(0), q(0)];
            if a == zero || b == zero || a == b {
                return None;
            }
            let normals = vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(-1), q(-1)], a, b];
            Some((ParametricPolyhedron::new(normals).ok()?, x))
        })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        rng_seed: RngSeed::Fixed(11),
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn gamma_is_hull_indicator_on_a2(
        xv in prop::collection::vec(rational(), 2),
        tv in prop::collection::vec(positive(), 2),
        pair in 0usize..9,
    ) {
        let d = build_root_datum("A", 2).unwrap();
        let pairs: Vec<(Parabolic, Parabolic)> = Parabolic::all(2)
            .into_iter()
            .flat_map(|qq| Parabolic::minimal(2).interval(&qq).into_iter().map(move |p| (p, qq)))
            .collect();
        let (p, qq) = &pairs[pair % pairs.len()];
        let x = d.vector_with_root_values(&xv);
        let t = d.vector_with_root_values(&tv);
        match gamma(&d, p, qq, &x, &t).unwrap() {
            GammaValue::Boundary => {}
            g => prop_assert_eq!(g == GammaValue::One, hull_membership(&d, p, qq, &x, &t).unwrap()),
        }
    }

    #[test]
    fn vertex_formula_matches_oracle((pp, x) in family(), m0 in -9i64..=9, m1 in -9i64..=9) {
        let data = enumerate_bases(&pp).unwrap();
        let ch = chamber_near(&pp, &data, &x).unwrap();
        let mu = vec![qf(m0, 5), qf(m1, 7)];
        let value = match bv_integral(&pp, &data, &ch, &x, &mu) {
            Ok(v) => v.value,
            Err(Error::NonGeneric(_)) => {
                let f = bv_limit_tfinite(&pp, &data, &ch, &mu).unwrap();
                f.eval(&x.iter().map(to_f64).collect::<Vec<_>>()).value()
            }
            Err(e) => panic!("{e}"),
        };
        let neg: Vec<f64> = mu.iter().map(|c| -to_f64(c)).collect();
        let oracle = integrate_exp_oracle(&pp.at(&x).vertices().unwrap(), &neg).unwrap().value;
        prop_assert!((value - oracle).abs() <= 1e-9 * oracle.abs().max(1e-300), "{value} vs {oracle}");
    }

    #[test]
    fn zero_exponent_limit_is_volume((pp, x) in family()) {
        let data = enumerate_bases(&pp).unwrap();
        let ch = chamber_near(&pp, &data, &x).unwrap();
        let f = bv_limit_tfinite(&pp, &data, &ch, &[q(0), q(0)]).unwrap();
        prop_assert!(f.degrees().0 <= 2);
        prop_assert_eq!(f.polynomial_part().eval(&x), volume(&pp.at(&x).vertices().unwrap()).unwrap());
    }
}

//! Seeded property tests for divisor arithmetic.

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use ehyp::divisors::{div_add, Divisor};
use ehyp::exactgroup::{point_eq, rat, Monomial, PointClass, RelationLattice};
use ehyp::thetafield::Case;

pub const CASES: u32 = 256;

fn runner(seed: u8) -> TestRunner {
    let cfg = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(cfg, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn lattice() -> Arc<RelationLattice> {
    Arc::new(Case::A.lattice())
}

/// Points built from `e1,e2,p,q` with half exponents and quarter torsion; the
/// small range makes coincidences modulo `p^Z` frequent.
fn point() -> impl Strategy<Value = Monomial> {
    (0i64..4, -2i64..=2, -2i64..=2, -4i64..=4, -2i64..=2).prop_map(|(t, a, b, pe, qe)| {
        Monomial::from_parts(
            rat(t, 4),
            [
                ("e1".to_string(), rat(a, 2)),
                ("e2".to_string(), rat(b, 1)),
                ("p".to_string(), rat(pe, 2)),
                ("q".to_string(), rat(qe, 2)),
            ],
        )
    })
}

fn divisor(level: u32) -> impl Strategy<Value = Divisor> {
    prop::collection::vec((point(), -2i64..=2), 0..8)
        .prop_map(move |pts| Divisor::from_points(level, lattice(), pts))
}

fn weight_eq(a: &PointClass, b: &PointClass) -> bool {
    point_eq(a, b, &lattice()).unwrap()
}

#[test]
pub fn keys_are_distinct_and_multiplicities_nonzero() {
    runner(11)
        .run(&divisor(2), |d| {
            prop_assert!(d.terms().values().all(|n| *n != 0));
            let pts: Vec<PointClass> = d.support().collect();
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    prop_assert!(!weight_eq(a, b));
                }
            }
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn degree_is_additive() {
    runner(12)
        .run(&(divisor(2), divisor(2)), |(a, b)| {
            let s = div_add(&a, &b).unwrap();
            prop_assert_eq!(s.degree(), a.degree() + b.degree());
            prop_assert!(div_add(&a, &a.neg()).unwrap().is_empty());
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn weight_is_multiplicative() {
    runner(13)
        .run(&(divisor(2), divisor(2)), |(a, b)| {
            let s = div_add(&a, &b).unwrap();
            let prod = a.weight().mul(&b.weight()).unwrap();
            prop_assert!(weight_eq(&s.weight(), &prod));
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn sigma_translation_shifts_weight_by_q_k_to_the_degree() {
    // σ^{-1} multiplies every point by q_k, so the weight picks up q_k^{deg}.
    runner(14)
        .run(&(divisor(2), 1u32..=3), |(d, k)| {
            let d = Divisor::from_points(k, d.lattice().clone(), d.terms().iter().map(|(m, n)| (m.clone(), *n)));
            let t = d.sigma_translate(-1);
            prop_assert_eq!(t.degree(), d.degree());
            let qk = PointClass::new(k, Monomial::gen_pow("q", rat(d.degree(), i64::from(k))));
            prop_assert!(weight_eq(&t.weight(), &d.weight().mul(&qk).unwrap()));
            prop_assert_eq!(t.sigma_translate(1), d);
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn pullback_commutes_with_addition() {
    runner(15)
        .run(&(divisor(1), divisor(1), 1u32..=3), |(a, b, k)| {
            let lhs = div_add(&a, &b).unwrap().pullback(k).unwrap();
            let rhs = div_add(&a.pullback(k).unwrap(), &b.pullback(k).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn pullback_multiplies_degree_by_k_squared() {
    runner(16)
        .run(&(divisor(1), 1u32..=4), |(d, k)| {
            let pb = d.pullback(k).unwrap();
            prop_assert_eq!(pb.level(), k);
            prop_assert_eq!(pb.degree(), i64::from(k * k) * d.degree());
            prop_assert_eq!(pb.mass(), i64::from(k * k) * d.mass());
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn order_is_compatible_with_addition() {
    runner(17)
        .run(&(divisor(2), divisor(2)), |(a, b)| {
            let eff = Divisor::from_points(2, a.lattice().clone(), a.terms().iter().map(|(m, n)| (m.clone(), n.abs())));
            let big = div_add(&b, &eff).unwrap();
            prop_assert!(b.le(&big).unwrap());
            prop_assert_eq!(big.le(&b).unwrap(), eff.is_empty());
            Ok(())
        })
        .unwrap();
}

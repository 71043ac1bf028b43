//! Seeded property tests for monomials, relation lattices and point classes.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use ehyp::exactgroup::lattice::hermite_normal_form;
use ehyp::exactgroup::{
    kernel_lattice, member_with_exponents, point_eq, rat, Monomial, PointClass, Rat, RelationLattice,
};
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

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, prop::sample::select(vec![1i64, 2, 4])).prop_map(|(n, d)| rat(n, d))
}

/// Monomials over `e1,e2,e3,p,q` with quarter exponents and quarter torsion.
fn monomial() -> impl Strategy<Value = Monomial> {
    (0i64..4, prop::collection::vec(small_rat(), 5)).prop_map(|(t, ex)| {
        let names = ["e1", "e2", "e3", "p", "q"];
        Monomial::from_parts(rat(t, 4), names.iter().map(|s| s.to_string()).zip(ex))
    })
}

fn torsion_free() -> impl Strategy<Value = Monomial> {
    monomial().prop_map(|m| m.free_part())
}

fn gens5() -> Vec<String> {
    ["e1", "e2", "e3", "p", "q"].iter().map(|s| s.to_string()).collect()
}

/// Random lattices of rank ≤ 2 on the five generators.
fn lattice() -> impl Strategy<Value = RelationLattice> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 0..=2)
        .prop_map(|rows| RelationLattice::new(gens5(), rows).unwrap())
}

#[test]
pub fn hnf_is_idempotent() {
    let strat = prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 0..=4);
    runner(1)
        .run(&strat, |rows| {
            let once = hermite_normal_form(rows);
            let twice = hermite_normal_form(once.clone());
            prop_assert_eq!(once, twice);
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn hnf_pivots_are_positive_and_reduced() {
    let strat = prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 0..=4);
    runner(2)
        .run(&strat, |rows| {
            let h = hermite_normal_form(rows);
            let mut last = None;
            for (i, r) in h.iter().enumerate() {
                let c = r.iter().position(|x| *x != 0).unwrap();
                prop_assert!(r[c] > 0);
                prop_assert!(last.is_none_or(|l| c > l));
                last = Some(c);
                for above in &h[..i] {
                    prop_assert!(0 <= above[c] && above[c] < r[c]);
                }
            }
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn kernel_vectors_remultiply_into_target() {
    let source: Vec<String> = (1..=4).map(|i| format!("s{i}")).collect();
    let images = prop::collection::vec(
        prop::collection::vec(-3i64..=3, 4).prop_map(|ex| {
            let names = ["x", "y", "p", "q"];
            Monomial::from_parts(rat(0, 1), names.iter().map(|s| s.to_string()).zip(ex.into_iter().map(|e| rat(e, 1))))
        }),
        4,
    );
    let target_rows = prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 0..=1);
    let probe = prop::collection::vec(-3i64..=3, 4);
    runner(3)
        .run(&(images, target_rows, probe), |(images, rows, probe)| {
            let tg: Vec<String> = ["x", "y", "p", "q"].iter().map(|s| s.to_string()).collect();
            let target = RelationLattice::new(tg, rows).unwrap();
            let k = kernel_lattice(&source, &images, &target).unwrap();
            let image_of = |v: &[i64]| -> Monomial {
                images.iter().zip(v).map(|(m, e)| m.powi(*e)).product()
            };
            for v in k.basis() {
                prop_assert!(target.is_trivial(&image_of(v)));
            }
            // and conversely a vector with trivial image lies in the kernel
            let pm: Monomial = source
                .iter()
                .zip(&probe)
                .map(|(s, e)| Monomial::gen_pow(s, rat(*e, 1)))
                .product();
            prop_assert_eq!(target.is_trivial(&image_of(&probe)), k.is_trivial(&pm));
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn membership_round_trips() {
    let subgroup = prop::sample::select(vec![vec!["p", "q"], vec!["q"], vec!["e1", "p"], vec!["p"]]);
    runner(4)
        .run(&(torsion_free(), lattice(), subgroup), |(m, l, sub)| {
            if let Some(a) = member_with_exponents(&m, &sub, &l) {
                let rebuilt: Monomial = sub.iter().zip(&a).map(|(g, e)| Monomial::gen_pow(g, *e)).product();
                prop_assert!(l.equivalent(&rebuilt, &m));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn membership_finds_constructed_members() {
    let ex = prop::collection::vec(small_rat(), 2);
    runner(5)
        .run(&(ex, lattice(), torsion_free()), |(ex, l, noise)| {
            // a random product of p and q, disguised by a lattice relation
            let m = &Monomial::gen_pow("p", ex[0]) * &Monomial::gen_pow("q", ex[1]);
            let disguise = l.relation_monomials().first().cloned().unwrap_or_else(Monomial::one);
            let m = &m * &disguise;
            let a = member_with_exponents(&m, &["p", "q"], &l);
            prop_assert!(a.is_some());
            // nonzero torsion is never a member
            let twisted = &noise * &Monomial::minus_one();
            prop_assert!(member_with_exponents(&twisted, &["p", "q"], &l).is_none());
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn point_eq_is_an_equivalence() {
    let pts = prop::collection::vec(monomial(), 3);
    let shifts = prop::collection::vec(-2i64..=2, 3);
    let lat = prop::sample::select(vec![Case::A.lattice(), Case::B.lattice()]);
    runner(6)
        .run(&(pts, shifts, lat), |(pts, shifts, l)| {
            // make collisions likely: the second and third points are p-shifts of the first
            let a = PointClass::new(2, pts[0].clone());
            let b = PointClass::new(2, &pts[0] * &Monomial::gen_pow("p", rat(shifts[0], 1)));
            let c = PointClass::new(2, if shifts[1] >= 0 { &pts[0] * &Monomial::gen_pow("p", rat(shifts[2], 1)) } else { pts[1].clone() });
            let d = PointClass::new(2, pts[2].clone());
            let all = [&a, &b, &c, &d];
            let eq = |x: &PointClass, y: &PointClass| point_eq(x, y, &l).unwrap();
            for x in all {
                prop_assert!(eq(x, x));
                for y in all {
                    prop_assert_eq!(eq(x, y), eq(y, x));
                    for z in all {
                        if eq(x, y) && eq(y, z) {
                            prop_assert!(eq(x, z));
                        }
                    }
                }
            }
            prop_assert!(eq(&a, &b));
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn mono_mul_is_a_group_law() {
    runner(7)
        .run(&(monomial(), monomial(), monomial()), |(a, b, c)| {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a * &a.inv()).is_one());
            prop_assert!(a.torsion() >= rat(0, 1) && a.torsion() < rat(1, 1));
            prop_assert!(a.exponents().values().all(|e| *e != rat(0, 1)));
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn monomial_display_parses_back() {
    runner(8)
        .run(&monomial(), |m| {
            let back: Monomial = m.to_string().parse().unwrap();
            prop_assert_eq!(back, m);
            Ok(())
        })
        .unwrap();
}

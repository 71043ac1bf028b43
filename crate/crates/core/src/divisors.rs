//! Divisors on `C*_k / p^Z`: finite integer combinations of point classes.
//!
//! Keys are stored as canonical representatives (see
//! [`RelationLattice::canonical_point`]), so merging terms is a plain map
//! lookup.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;


use crate::error::{Error, Result};
use crate::exactgroup::point::check_level;
use crate::exactgroup::{rat, Monomial, PointClass, RelationLattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    level: u32,
    lattice: Arc<RelationLattice>,
    terms: BTreeMap<Monomial, i64>,
}

impl Divisor {
    pub fn zero(level: u32, lattice: Arc<RelationLattice>) -> Self {
        assert!(level >= 1, "level must be positive");
        Divisor {
            level,
            lattice,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_points<I>(level: u32, lattice: Arc<RelationLattice>, points: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut d = Divisor::zero(level, lattice);
        for (v, n) in points {
            d.add_point(&v, n);
        }
        d
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn lattice(&self) -> &Arc<RelationLattice> {
        &self.lattice
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical representatives with their multiplicities.
    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = PointClass> + '_ {
        self.terms
            .keys()
            .map(move |v| PointClass::new(self.level, v.clone()))
    }

    pub fn multiplicity(&self, value: &Monomial) -> i64 {
        let (key, _) = self.lattice.canonical_point(value);
        self.terms.get(&key).copied().unwrap_or(0)
    }

    pub fn add_point(&mut self, value: &Monomial, n: i64) {
        if n == 0 {
            return;
        }
        let (key, _) = self.lattice.canonical_point(value);
        let slot = self.terms.entry(key.clone()).or_insert(0);
        *slot += n;
        if *slot == 0 {
            self.terms.remove(&key);
        }
    }

    fn check_compatible(&self, other: &Divisor) -> Result<()> {
        check_level(self.level, other.level)?;
        if !Arc::ptr_eq(&self.lattice, &other.lattice) && self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Divisor) -> Result<Divisor> {
        self.check_compatible(other)?;
        let mut d = self.clone();
        for (v, n) in &other.terms {
            d.add_point(v, *n);
        }
        Ok(d)
    }

    pub fn neg(&self) -> Divisor {
        Divisor {
            terms: self.terms.iter().map(|(v, n)| (v.clone(), -n)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Divisor) -> Result<Divisor> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero(self.level, self.lattice.clone());
        }
        Divisor {
            terms: self.terms.iter().map(|(v, n)| (v.clone(), n * k)).collect(),
            ..self.clone()
        }
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    /// `∏ λ^{ord_λ}` as a class at the same level.
    pub fn weight(&self) -> PointClass {
        let w: Monomial = self.terms.iter().map(|(v, n)| v.powi(*n)).product();
        PointClass::new(self.level, self.lattice.canonical_point(&w).0)
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|n| *n > 0)
    }

    /// The partial order `n_λ ≤ m_λ` for all `λ`.
    pub fn le(&self, other: &Divisor) -> Result<bool> {
        let diff = other.sub(self)?;
        Ok(diff.terms.values().all(|n| *n >= 0))
    }

    /// Divisor of `σ^{direction}(f)` given the divisor of `f`: each point is
    /// multiplied by `q_k^{-direction}`.
    pub fn sigma_translate(&self, direction: i32) -> Divisor {
        let shift = Monomial::gen_pow("q", rat(-i64::from(direction), i64::from(self.level)));
        Divisor::from_points(
            self.level,
            self.lattice.clone(),
            self.terms.iter().map(|(v, n)| (v * &shift, *n)),
        )
    }

    /// Pull-back along the `k`-power map `C*_k/p^Z → C*/p^Z`: each `[λ]` is
    /// replaced by `[ζ_k^i λ^{1/k} p^{j/k}]` for `0 ≤ i, j < k`.
    pub fn pullback(&self, k: u32) -> Result<Divisor> {
        if self.level != 1 {
            return Err(Error::PullbackLevel(self.level));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("pullback degree must be positive".into()));
        }
        let kk = i64::from(k);
        let mut d = Divisor::zero(k, self.lattice.clone());
        for (v, n) in &self.terms {
            let root = v.pow(rat(1, kk));
            for i in 0..kk {
                for j in 0..kk {
                    let pt = &(&root * &Monomial::root_of_unity(rat(i, kk)))
                        * &Monomial::gen_pow("p", rat(j, kk));
                    d.add_point(&pt, *n);
                }
            }
        }
        Ok(d)
    }
}

pub fn div_add(a: &Divisor, b: &Divisor) -> Result<Divisor> {
    a.add(b)
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(v, n)| match n {
                1 => format!("[{v}]"),
                -1 => format!("-[{v}]"),
                _ => format!("{n}[{v}]"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Divisor {
    /// Total number of support points counted with `|multiplicity|`.
    pub fn mass(&self) -> i64 {
        self.terms.values().map(|n| n.abs()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgroup::point_eq;

    fn lat() -> Arc<RelationLattice> {
        let g: Vec<String> = (1..=8)
            .map(|j| format!("e{j}"))
            .chain(["p".into(), "q".into()])
            .collect();
        Arc::new(RelationLattice::new(g, vec![vec![1, 1, 1, 1, 1, 1, 1, 1, -2, -2]]).unwrap())
    }

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn d(level: u32, l: &Arc<RelationLattice>, pts: &[(&str, i64)]) -> Divisor {
        Divisor::from_points(level, l.clone(), pts.iter().map(|(s, n)| (m(s), *n)))
    }

    #[test]
    fn opposite_points_cancel() {
        let l = lat();
        let s = div_add(&d(1, &l, &[("1", 1)]), &d(1, &l, &[("1", -1)])).unwrap();
        assert!(s.is_empty());
        assert!(s.terms().values().all(|n| *n != 0));
    }

    #[test]
    fn p_translates_merge() {
        let l = lat();
        let s = div_add(&d(2, &l, &[("e2^1/2", 1)]), &d(2, &l, &[("p*e2^1/2", 1)])).unwrap();
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.multiplicity(&m("e2^1/2")), 2);
    }

    #[test]
    fn degree_and_weight_of_empty() {
        let l = lat();
        let z = Divisor::zero(3, l.clone());
        assert_eq!(z.degree(), 0);
        assert!(point_eq(&z.weight(), &PointClass::new(3, Monomial::one()), &l).unwrap());
    }

    #[test]
    fn weight_of_reciprocal_pair() {
        let l = lat();
        let w = d(1, &l, &[("q^-1*e1", 1), ("q^-1*e1^-1", 1)]).weight();
        assert!(point_eq(&w, &PointClass::new(1, m("q^-2")), &l).unwrap());
    }

    #[test]
    fn sigma_moves_points_by_q_k() {
        let l = lat();
        let x = d(2, &l, &[("e3^-1/2", 1)]);
        let y = x.sigma_translate(-1);
        assert_eq!(y.multiplicity(&m("q^1/2*e3^-1/2")), 1);
        assert!(d(2, &l, &[]).sigma_translate(1).is_empty());
    }

    #[test]
    fn pullback_of_theta_divisor() {
        let l = lat();
        let pb = d(1, &l, &[("1", 1)]).pullback(2).unwrap();
        let expect = d(2, &l, &[("1", 1), ("-1", 1), ("p^1/2", 1), ("-1*p^1/2", 1)]);
        assert_eq!(pb, expect);
    }

    #[test]
    fn pullback_by_one_is_identity() {
        let l = lat();
        let x = d(1, &l, &[("e1*q", 2), ("e4^-1", -1)]);
        assert_eq!(x.pullback(1).unwrap(), x);
    }

    #[test]
    fn pullback_needs_level_one() {
        let l = lat();
        assert_eq!(d(2, &l, &[("1", 1)]).pullback(2), Err(Error::PullbackLevel(2)));
    }

    #[test]
    fn level_mismatch_on_add() {
        let l = lat();
        assert_eq!(
            div_add(&d(1, &l, &[]), &d(2, &l, &[])),
            Err(Error::LevelMismatch(1, 2))
        );
    }
}

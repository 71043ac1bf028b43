//! Equation residuals, seeded sampling and numeric evaluation of exact objects.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::hypergeo::{a_eval, nu_eval, NumericParams};
use super::products::{theta, C64};
use crate::error::{Error, Result};
use crate::exactgroup::Monomial;
use crate::thetafield::ThetaQuotient;

/// Keeps relative residuals finite when every term vanishes.
const TINY: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub max: f64,
    pub per_sample: Vec<f64>,
    /// Every term vanished at every sample (e.g. `y ≡ 0`); `max` is then 0
    /// and says nothing.
    pub degenerate: bool,
}

fn collect(rows: Vec<(f64, bool)>) -> Residual {
    let degenerate = rows.iter().all(|(_, d)| *d);
    let per_sample: Vec<f64> = rows.into_iter().map(|(r, _)| r).collect();
    Residual {
        max: per_sample.iter().copied().fold(0.0, f64::max),
        per_sample,
        degenerate,
    }
}

/// Residual of `A(z)(y(qz) − y(z)) + A(z^{-1})(y(q^{-1}z) − y(z)) + νy(z)`,
/// relative to `|A(z)y(qz)| + |A(z^{-1})y(q^{-1}z)| + |νy(z)|`.
pub fn hypergeo_residual<F>(y: F, params: &NumericParams, zs: &[C64]) -> Result<Residual>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    let q = params.q;
    let nu = nu_eval(params);
    let rows: Vec<Result<(f64, bool)>> = zs
        .par_iter()
        .map(|&z| {
            let (a, ai) = (a_eval(z, params)?, a_eval(1.0 / z, params)?);
            let (y0, yq, yqi) = (y(z)?, y(q * z)?, y(z / q)?);
            let lhs = a * (yq - y0) + ai * (yqi - y0) + nu * y0;
            let scale = (a * yq).norm() + (ai * yqi).norm() + (nu * y0).norm();
            Ok((lhs.norm() / (scale + TINY), scale == 0.0))
        })
        .collect();
    Ok(collect(rows.into_iter().collect::<Result<_>>()?))
}

/// Residual of `u σ(u) + a u + b` in the variable `z_k`, where `σ` is
/// `z_k ↦ shift · z_k`.
pub fn riccati_residual<U, A, B>(u: U, a: A, b: B, shift: C64, zs: &[C64]) -> Result<Residual>
where
    U: Fn(C64) -> Result<C64> + Sync,
    A: Fn(C64) -> Result<C64> + Sync,
    B: Fn(C64) -> Result<C64> + Sync,
{
    let rows: Vec<Result<(f64, bool)>> = zs
        .par_iter()
        .map(|&z| {
            let (u0, u1) = (u(z)?, u(shift * z)?);
            let (av, bv) = (a(z)?, b(z)?);
            let lhs = u0 * u1 + av * u0 + bv;
            let scale = (u0 * u1).norm() + (av * u0).norm() + bv.norm();
            Ok((lhs.norm() / (scale + TINY), scale == 0.0))
        })
        .collect();
    Ok(collect(rows.into_iter().collect::<Result<_>>()?))
}

/// `count` points with `|z|` uniform in `[rmin, rmax]` and uniform argument.
pub fn sample_annulus(seed: u64, count: usize, rmin: f64, rmax: f64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = rng.gen_range(rmin..=rmax);
            let phi = rng.gen_range(0.0..2.0 * PI);
            C64::from_polar(r, phi)
        })
        .collect()
}

/// Numeric value of a monomial; rational powers use the principal branch of
/// each generator, which makes evaluation a homomorphism.
pub fn monomial_eval(m: &Monomial, values: &BTreeMap<String, C64>) -> Result<C64> {
    let t = *m.torsion().numer() as f64 / *m.torsion().denom() as f64;
    let mut acc = C64::from_polar(1.0, 2.0 * PI * t);
    for (g, e) in m.exponents() {
        let v = values
            .get(g)
            .ok_or_else(|| Error::InvalidArgument(format!("no numeric value for generator {g}")))?;
        let e = *e.numer() as f64 / *e.denom() as f64;
        acc *= (v.ln() * e).exp();
    }
    Ok(acc)
}

/// `c · z_k^n · ∏ θ(ξ z_k; p)^{n_ξ}` for explicit, unnormalized parts.
pub fn tq_eval_parts<'a, I>(
    constant: &Monomial,
    z_power: i64,
    factors: I,
    zk: C64,
    values: &BTreeMap<String, C64>,
    trunc: usize,
) -> Result<C64>
where
    I: IntoIterator<Item = (&'a Monomial, i64)>,
{
    let p = *values
        .get("p")
        .ok_or_else(|| Error::InvalidArgument("no numeric value for p".into()))?;
    let mut acc = monomial_eval(constant, values)? * zk.powi(z_power as i32);
    for (xi, n) in factors {
        acc *= theta(monomial_eval(xi, values)? * zk, p, trunc).powi(n as i32);
    }
    Ok(acc)
}

/// Value of a theta quotient at `z_k`.
pub fn tq_eval(f: &ThetaQuotient, zk: C64, values: &BTreeMap<String, C64>, trunc: usize) -> Result<C64> {
    tq_eval_parts(
        f.constant_part(),
        f.z_power(),
        f.factors().iter().map(|(m, n)| (m, *n)),
        zk,
        values,
        trunc,
    )
}

/// Generator values `p, q, e1..e8` for `params`.
pub fn generator_values(params: &NumericParams) -> BTreeMap<String, C64> {
    let mut v: BTreeMap<String, C64> = params
        .eps
        .iter()
        .enumerate()
        .map(|(j, e)| (format!("e{}", j + 1), *e))
        .collect();
    v.insert("p".into(), params.p);
    v.insert("q".into(), params.q);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgroup::rat;

    #[test]
    fn zero_function_is_degenerate() {
        let d = NumericParams::demo();
        let zs = sample_annulus(1, 4, 0.9, 1.1);
        let r = hypergeo_residual(|_| Ok(C64::new(0.0, 0.0)), &d, &zs).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.max, 0.0);
    }

    #[test]
    fn sampling_is_reproducible() {
        assert_eq!(sample_annulus(7, 5, 0.5, 2.0), sample_annulus(7, 5, 0.5, 2.0));
        assert_ne!(sample_annulus(7, 5, 0.5, 2.0), sample_annulus(8, 5, 0.5, 2.0));
        assert!(sample_annulus(3, 100, 0.5, 2.0).iter().all(|z| (0.5..=2.0).contains(&z.norm())));
    }

    #[test]
    fn monomial_evaluation_is_multiplicative() {
        let mut v = BTreeMap::new();
        v.insert("p".to_string(), C64::new(-0.3, 0.1));
        v.insert("q".to_string(), C64::new(0.2, -0.4));
        let a: Monomial = "i*p^(1/2)*q^-3".parse().unwrap();
        let b: Monomial = "-1*p^(3/2)*q^(1/4)".parse().unwrap();
        let lhs = monomial_eval(&(&a * &b), &v).unwrap();
        let rhs = monomial_eval(&a, &v).unwrap() * monomial_eval(&b, &v).unwrap();
        assert!((lhs - rhs).norm() < 1e-14 * rhs.norm());
        let half = Monomial::gen_pow("p", rat(1, 2));
        let sq = monomial_eval(&half, &v).unwrap();
        assert!((sq * sq - v["p"]).norm() < 1e-15);
        assert!(monomial_eval(&"e1".parse().unwrap(), &v).is_err());
    }
}

//! The numeric confirmation suite.

use rayon::prelude::*;
use serde_json::json;

use super::report::{cjson, Check, Comparator, Report};
use crate::error::{Error, Result};
use crate::numerics::{
    a_coeff, a_eval, b_coeff, elliptic_gamma_eval, f_eval, hypergeo_residual, nu_eval, sample_annulus, theta,
    Estimate, NumericParams, C64,
};

pub const THETA_TOL: f64 = 1e-10;
pub const GAMMA_TOL: f64 = 1e-8;
pub const BALANCING_TOL: f64 = 1e-10;
pub const ELLIPTICITY_TOL: f64 = 1e-8;
pub const IDENTITY_TOL: f64 = 1e-10;
pub const SYMMETRY_TOL: f64 = 1e-8;
pub const DOUBLING_TOL: f64 = 1e-6;
pub const EQUATION_TOL: f64 = 1e-4;
/// A constant Riccati solution is excluded when its residual stays above this.
pub const CONSTANT_EXCLUSION: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    pub seed: u64,
    /// Sample points for the `f` checks.
    pub samples: usize,
    pub annulus: [f64; 2],
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            seed: 0,
            samples: 16,
            annulus: [0.9, 1.1],
        }
    }
}

fn max_of<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut m: f64 = 0.0;
    for r in it {
        let r = r?;
        // NaN propagates so the check fails
        m = if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) };
    }
    Ok(m)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

/// `max |θ(nome·z) + z^{-1}θ(z)| / |z^{-1}θ(z)|`.
pub fn theta_functional(nome: C64, zs: &[C64], n: usize) -> f64 {
    max_of(zs.iter().map(|&z| {
        let rhs = -theta(z, nome, n) / z;
        Ok(rel(theta(nome * z, nome, n), rhs))
    }))
    .expect("infallible")
}

/// `Γ(shift·z) = θ(z; other) Γ(z)` for `(shift, other) = (p, q)` or `(q, p)`.
pub fn gamma_shift(params: &NumericParams, shift_p: bool, zs: &[C64]) -> Result<f64> {
    let (p, q, n) = (params.p, params.q, params.trunc);
    let (s, o) = if shift_p { (p, q) } else { (q, p) };
    max_of(zs.iter().map(|&z| {
        let lhs = elliptic_gamma_eval(s * z, p, q, n)?;
        let rhs = theta(z, o, n) * elliptic_gamma_eval(z, p, q, n)?;
        Ok(rel(lhs, rhs))
    }))
}

/// `max |A(pz) − A(z)| / |A(z)|`.
pub fn a_ellipticity(params: &NumericParams, zs: &[C64]) -> Result<f64> {
    max_of(zs.iter().map(|&z| Ok(rel(a_eval(params.p * z, params)?, a_eval(z, params)?))))
}

/// `a·A(qz) + A(qz) + A(q^{-1}z^{-1}) − ν`, relative to `|A(qz)| + |ν|`.
pub fn coefficient_identity(params: &NumericParams, zs: &[C64]) -> Result<f64> {
    let nu = nu_eval(params);
    max_of(zs.iter().map(|&z| {
        let aq = a_eval(params.q * z, params)?;
        let lhs = a_coeff(z, params)? * aq + aq + a_eval(1.0 / (params.q * z), params)? - nu;
        Ok(lhs.norm() / (aq.norm() + nu.norm()))
    }))
}

/// Smallest residual of `v² + a v + b` over all constants `v`: the two roots
/// at the first sample are the only candidates, and each is tried at the rest.
pub fn constant_riccati(params: &NumericParams, zs: &[C64]) -> Result<f64> {
    let (z0, rest) = zs
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("no sample points".into()))?;
    if rest.is_empty() {
        return Err(Error::InvalidArgument("need at least two sample points".into()));
    }
    let (a0, b0) = (a_coeff(*z0, params)?, b_coeff(*z0, params)?);
    let disc = (a0 * a0 - 4.0 * b0).sqrt();
    let roots = [(-a0 + disc) / 2.0, (-a0 - disc) / 2.0];
    let mut best = f64::INFINITY;
    for v in roots {
        let r = max_of(rest.iter().map(|&z| {
            let (a, b) = (a_coeff(z, params)?, b_coeff(z, params)?);
            let lhs = v * v + a * v + b;
            Ok(lhs.norm() / ((v * v).norm() + (a * v).norm() + b.norm()))
        }))?;
        best = best.min(r);
    }
    Ok(best)
}

fn f_values(params: &NumericParams, zs: &[C64]) -> Result<Vec<Estimate>> {
    let v: Vec<Result<Estimate>> = zs.par_iter().map(|&z| f_eval(params, z)).collect();
    v.into_iter().collect()
}

/// Runs every check; the report passes when all of them do.
pub fn run_validate(params: &NumericParams, opts: &ValidateOptions, mut report: Report) -> (Report, bool) {
    let n = params.trunc;
    let wide = sample_annulus(opts.seed, 100, 0.5, 2.0);
    let gamma_zs = sample_annulus(opts.seed.wrapping_add(1), 50, 0.5, 2.0);
    let a_zs = sample_annulus(opts.seed.wrapping_add(2), 20, 0.6, 1.6);
    let f_zs = sample_annulus(opts.seed.wrapping_add(3), opts.samples, opts.annulus[0], opts.annulus[1]);

    let fvals = f_values(params, &f_zs);
    let mut checks = vec![
        Check::from_result("theta_functional_p", Comparator::Below, THETA_TOL, Ok(theta_functional(params.p, &wide, n))),
        Check::from_result("theta_functional_q", Comparator::Below, THETA_TOL, Ok(theta_functional(params.q, &wide, n))),
        Check::from_result("gamma_p_shift", Comparator::Below, GAMMA_TOL, gamma_shift(params, true, &gamma_zs)),
        Check::from_result("gamma_q_shift", Comparator::Below, GAMMA_TOL, gamma_shift(params, false, &gamma_zs)),
        Check::from_result("balancing", Comparator::Below, BALANCING_TOL, Ok(params.balancing_residual())),
        Check::from_result("special_balancing", Comparator::Below, BALANCING_TOL, Ok(params.special_residual())),
        Check::from_result("a_ellipticity", Comparator::Below, ELLIPTICITY_TOL, a_ellipticity(params, &a_zs)),
        Check::from_result("coefficient_identity", Comparator::Below, IDENTITY_TOL, coefficient_identity(params, &a_zs)),
        Check::from_result(
            "constant_riccati_excluded",
            Comparator::Above,
            CONSTANT_EXCLUSION,
            constant_riccati(params, &a_zs),
        ),
    ];
    let symmetry = fvals.as_ref().map_err(Clone::clone).and_then(|fv| {
        max_of(f_zs.iter().zip(fv).take(4).map(|(&z, f)| Ok(rel(f_eval(params, 1.0 / z)?.value, f.value))))
    });
    checks.push(Check::from_result("f_symmetry", Comparator::Below, SYMMETRY_TOL, symmetry));
    let doubling = fvals
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|fv| max_of(fv.iter().map(|f| Ok(f.error / f.value.norm()))));
    checks.push(Check::from_result("quadrature_doubling", Comparator::Below, DOUBLING_TOL, doubling));
    let equation = fvals.as_ref().map_err(Clone::clone).and_then(|_| {
        let r = hypergeo_residual(|z| Ok(f_eval(params, z)?.value), params, &f_zs)?;
        if r.degenerate {
            return Err(Error::InvalidArgument("f vanished at every sample".into()));
        }
        Ok(r.max)
    });
    checks.push(Check::from_result("hypergeo_residual", Comparator::Below, EQUATION_TOL, equation));

    let ok = checks.iter().all(|c| c.pass);
    report.outcome = Some(if ok { "pass" } else { "fail" }.into());
    report.reasons = checks.iter().filter(|c| !c.pass).map(|c| c.name.to_string()).collect();
    report.residuals = checks;
    report.details = json!({
        "p": cjson(params.p),
        "q": cjson(params.q),
        "eps": params.eps.iter().map(|e| cjson(*e)).collect::<Vec<_>>(),
        "trunc": params.trunc,
        "nodes": params.nodes,
        "seed": opts.seed,
        "samples": opts.samples,
        "annulus": opts.annulus,
        "nu": cjson(nu_eval(params)),
    });
    (report, ok)
}

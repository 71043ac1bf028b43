//! The elliptic hypergeometric coefficients, the V-integral and `f_ε`.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::products::{double_poch, elliptic_gamma_eval, qpoch, recip_gamma, theta, C64, POLE_EPS};
use crate::error::{Error, Result};

/// Contour points closer than this to a pole of the V-integrand are refused.
pub const CONTOUR_MARGIN: f64 = 1e-6;
/// Relative tolerance for the balancing conditions on numeric input.
pub const BALANCE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericParams {
    pub p: C64,
    pub q: C64,
    pub eps: [C64; 8],
    /// Truncation of every infinite product.
    pub trunc: usize,
    /// Quadrature nodes on the unit circle.
    pub nodes: usize,
}

impl NumericParams {
    /// Parameters of the form `ε(t)` for `t_1..t_5`, `c`, with `t_8` fixed by
    /// `∏ t_j = p²q²`. They satisfy `ε_8 = ε_7 q`; `f_ε` is in the strict
    /// window for `0.25 < |z| < 4`, so `z, qz, z/q` all are for
    /// `0.84 < |z| < 1.2`.
    pub fn demo() -> Self {
        let p = C64::from_polar(1e-4, 0.7);
        let q = C64::from_polar(0.3, 0.1);
        let cc = C64::from_polar(0.075, 0.3);
        let t5 = [
            C64::from_polar(0.07, 0.4),
            C64::from_polar(0.075, -1.1),
            C64::from_polar(0.08, 2.0),
            C64::from_polar(0.085, -2.6),
            C64::from_polar(0.09, 1.3),
        ];
        NumericParams {
            p,
            q,
            eps: eps_from_t(&t5, cc, p, q),
            trunc: 80,
            nodes: 2048,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.trunc < 8 || self.nodes < 8 {
            return Err(Error::InvalidArgument(format!(
                "truncation {} and nodes {} must both be at least 8",
                self.trunc, self.nodes
            )));
        }
        if self.p.norm() >= 1.0 || self.q.norm() >= 1.0 || self.p.norm() == 0.0 || self.q.norm() == 0.0 {
            return Err(Error::InvalidArgument("need 0 < |p|, |q| < 1".into()));
        }
        Ok(())
    }

    /// `|∏ε_j − p²q²| / |p²q²|`.
    pub fn balancing_residual(&self) -> f64 {
        let target = (self.p * self.q).powi(2);
        let prod: C64 = self.eps.iter().product();
        (prod - target).norm() / target.norm()
    }

    /// `|ε_8 − ε_7 q| / |ε_8|`.
    pub fn special_residual(&self) -> f64 {
        (self.eps[7] - self.eps[6] * self.q).norm() / self.eps[7].norm()
    }

    /// Replaces `ε_8` so that `∏ε_j = p²q²` holds to rounding.
    pub fn rebalanced(&self) -> Self {
        let mut out = self.clone();
        let rest: C64 = self.eps[..7].iter().product();
        out.eps[7] = (self.p * self.q).powi(2) / rest;
        out
    }
}

/// `ε` from `t_1..t_5` and `c` (with `ε_8 = ε_7 q`).
pub fn eps_from_t(t5: &[C64; 5], cc: C64, p: C64, q: C64) -> [C64; 8] {
    let prod: C64 = t5.iter().product();
    let t8 = (p * q).powi(2) / (cc * cc * prod);
    let e8 = cc / t8;
    let mut e = [C64::new(0.0, 0.0); 8];
    for j in 0..5 {
        e[j] = q / (cc * t5[j]);
    }
    e[5] = cc * cc * p.powi(4) / e8;
    e[6] = e8 / q;
    e[7] = e8;
    e
}

/// `c = √(ε_6 ε_8)/p²`. Either square root works: flipping `c` negates all
/// eight `t_j`, and `V` is invariant under `z ↦ −z`.
pub fn c_param(params: &NumericParams) -> C64 {
    (params.eps[5] * params.eps[7]).sqrt() / (params.p * params.p)
}

/// The V-arguments attached to `f_ε(z)`.
pub fn t_from_eps(params: &NumericParams, z: C64) -> [C64; 8] {
    let cc = c_param(params);
    let e = &params.eps;
    [
        params.q / (cc * e[0]),
        params.q / (cc * e[1]),
        params.q / (cc * e[2]),
        params.q / (cc * e[3]),
        params.q / (cc * e[4]),
        cc * z,
        cc / z,
        cc / e[7],
    ]
}

/// Violations of `√|pq| < |t_j| < 1` (`j ≤ 5`) and `√|pq| < |q^{±1} t_j| < 1`
/// (`j = 6, 7, 8`).
pub fn window_violations(t: &[C64; 8], p: C64, q: C64) -> Vec<String> {
    let lo = (p * q).norm().sqrt();
    let mut bad = Vec::new();
    for (j, tj) in t.iter().enumerate() {
        let probes: Vec<(String, f64)> = if j < 5 {
            vec![(format!("|t{}|", j + 1), tj.norm())]
        } else {
            vec![
                (format!("|q t{}|", j + 1), (q * tj).norm()),
                (format!("|t{}/q|", j + 1), (tj / q).norm()),
            ]
        };
        for (name, v) in probes {
            if !(lo < v && v < 1.0) {
                bad.push(format!("{name} = {v:.4e} outside ({lo:.4e}, 1)"));
            }
        }
    }
    bad
}

/// `min_k |1 − x p^{-k}|`: how close `x` is to a zero of `θ(·; p)`.
fn dist_to_p_powers(x: C64, p: C64) -> f64 {
    let k = (x.norm().ln() / p.norm().ln()).round() as i32;
    (k - 1..=k + 1)
        .map(|k| (1.0 - x / p.powi(k)).norm())
        .fold(f64::INFINITY, f64::min)
}

/// `A(z) = ∏θ(ε_j z) / (θ(z²) θ(q z²))`.
pub fn a_eval(z: C64, params: &NumericParams) -> Result<C64> {
    let (p, q, n) = (params.p, params.q, params.trunc);
    let z2 = z * z;
    if dist_to_p_powers(z2, p) < POLE_EPS || dist_to_p_powers(q * z2, p) < POLE_EPS {
        return Err(Error::Pole(format!("A at z = {z}")));
    }
    let num: C64 = params.eps.iter().map(|e| theta(e * z, p, n)).product();
    Ok(num / (theta(z2, p, n) * theta(q * z2, p, n)))
}

/// `ν = ∏_{j ≤ 6} θ(ε_j ε_8 / q)`.
pub fn nu_eval(params: &NumericParams) -> C64 {
    let (p, q, n) = (params.p, params.q, params.trunc);
    params.eps[..6]
        .iter()
        .map(|e| theta(e * params.eps[7] / q, p, n))
        .product()
}

/// The coefficient `a = (ν − A(qz) − A(q^{-1}z^{-1})) / A(qz)` of the
/// second-order form.
pub fn a_coeff(z: C64, params: &NumericParams) -> Result<C64> {
    let q = params.q;
    let aq = a_eval(q * z, params)?;
    Ok((nu_eval(params) - aq - a_eval(1.0 / (q * z), params)?) / aq)
}

/// `b = A(q^{-1}z^{-1}) / A(qz)`.
pub fn b_coeff(z: C64, params: &NumericParams) -> Result<C64> {
    let q = params.q;
    Ok(a_eval(1.0 / (q * z), params)? / a_eval(q * z, params)?)
}

/// A quadrature value with its estimated error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: C64,
    pub error: f64,
}

/// Pairwise summation in index order, so parallel evaluation does not change
/// the rounding.
pub fn pairwise_sum(v: &[C64]) -> C64 {
    match v.len() {
        0 => C64::new(0.0, 0.0),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// `f` at the `m` nodes `e^{2πik/m}`, evaluated in parallel, in node order.
pub fn circle_values<F: Fn(C64) -> C64 + Sync>(f: F, m: usize) -> Vec<C64> {
    (0..m)
        .into_par_iter()
        .map(|k| f(C64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)))
        .collect()
}

/// Trapezoid rule for `(1/2πi) ∮_{|z|=1} f(z) dz/z`, i.e. the mean of `f`
/// over the nodes.
pub fn circle_mean<F: Fn(C64) -> C64 + Sync>(f: F, m: usize) -> C64 {
    pairwise_sum(&circle_values(f, m)) / m as f64
}

fn v_integrand(z: C64, t: &[C64; 8], p: C64, q: C64, n: usize) -> C64 {
    let zi = 1.0 / z;
    let mut acc = recip_gamma(z * z, p, q, n) * recip_gamma(zi * zi, p, q, n);
    for tj in t {
        // |t z|, |t/z| < 1 on the circle, so neither gamma has a pole here
        let a = tj * z;
        let b = tj * zi;
        acc *= double_poch(p * q / a, p, q, n)
            / double_poch(a, p, q, n);
        acc *= double_poch(p * q / b, p, q, n)
            / double_poch(b, p, q, n);
    }
    acc
}

fn check_v_args(t: &[C64; 8], p: C64, q: C64) -> Result<()> {
    let target = (p * q).powi(2);
    let prod: C64 = t.iter().product();
    if (prod - target).norm() > BALANCE_TOL * target.norm() {
        return Err(Error::Window(format!(
            "∏t_j = {prod} differs from p²q² = {target}"
        )));
    }
    // poles of the integrand lie on |z| ≤ max|t_j| and |z| ≥ 1/max|t_j|
    let tmax = t.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if tmax >= 1.0 {
        return Err(Error::Window(format!("max |t_j| = {tmax} is not < 1")));
    }
    if 1.0 - tmax < CONTOUR_MARGIN {
        return Err(Error::Pole(format!(
            "integrand pole within {:.1e} of the unit circle",
            1.0 - tmax
        )));
    }
    Ok(())
}

/// `V(t; p, q)` by the `m`-node trapezoid rule on `|z| = 1`. The error is
/// `|V_m − V_{m/2}|`, the `m/2` rule being the even nodes. With `symmetrize`
/// the integrand is replaced by its average over `z ↦ 1/z`.
pub fn v_integral_with(
    t: &[C64; 8],
    p: C64,
    q: C64,
    m: usize,
    n: usize,
    symmetrize: bool,
) -> Result<Estimate> {
    check_v_args(t, p, q)?;
    if m < 8 {
        return Err(Error::InvalidArgument(format!("{m} nodes is below the minimum 8")));
    }
    let g = |z: C64| {
        let g = v_integrand(z, t, p, q, n);
        if symmetrize {
            0.5 * (g + v_integrand(z.conj(), t, p, q, n))
        } else {
            g
        }
    };
    let vals = circle_values(g, m);
    // κ ∮ g dz/z = (p;p)(q;q)/(4π) ∫_0^{2π} g dφ
    let kappa = qpoch(p, p, n) * qpoch(q, q, n) / 2.0;
    let full = kappa * pairwise_sum(&vals) / m as f64;
    let even: Vec<C64> = vals.iter().step_by(2).copied().collect();
    let half = kappa * pairwise_sum(&even) / even.len() as f64;
    Ok(Estimate {
        value: full,
        error: (full - half).norm(),
    })
}

pub fn v_integral_eval(t: &[C64; 8], p: C64, q: C64, m: usize, n: usize) -> Result<Estimate> {
    v_integral_with(t, p, q, m, n, false)
}

/// `f_ε(z) = V(t(z)) / (Γ(c²z/ε_8) Γ(c²/(zε_8)) Γ(ε_8 z) Γ(ε_8/z))`.
pub fn f_eval(params: &NumericParams, z: C64) -> Result<Estimate> {
    params.check()?;
    if params.special_residual() > BALANCE_TOL {
        return Err(Error::Window(format!(
            "f needs ε8 = ε7 q (relative mismatch {:.3e})",
            params.special_residual()
        )));
    }
    let (p, q, n) = (params.p, params.q, params.trunc);
    let t = t_from_eps(params, z);
    let bad = window_violations(&t, p, q);
    if !bad.is_empty() {
        return Err(Error::Window(bad.join("; ")));
    }
    let v = v_integral_eval(&t, p, q, params.nodes, n)?;
    let cc = c_param(params);
    let e8 = params.eps[7];
    let den = elliptic_gamma_eval(cc * cc * z / e8, p, q, n)?
        * elliptic_gamma_eval(cc * cc / (z * e8), p, q, n)?
        * elliptic_gamma_eval(e8 * z, p, q, n)?
        * elliptic_gamma_eval(e8 / z, p, q, n)?;
    Ok(Estimate {
        value: v.value / den,
        error: v.error / den.norm(),
    })
}

//! Truncated infinite products: θ, the double Pochhammer symbol and the
//! elliptic gamma function.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Factors `1 − x` with `|1 − x|` below this are treated as exact zeros.
pub const POLE_EPS: f64 = 1e-14;

/// A truncated product together with a bound on what the dropped factors
/// could change, relative to the value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncated {
    pub value: C64,
    pub rel_tail: f64,
}

/// Tail of `Σ_{j ≥ n} a·r^j` for `0 ≤ r < 1`.
fn geometric_tail(a: f64, r: f64, n: usize) -> f64 {
    if r >= 1.0 {
        return f64::INFINITY;
    }
    a * r.powi(n as i32) / (1.0 - r)
}

/// `|log ∏(1 − x_j)| ≤ 2 Σ|x_j|` once every `|x_j| ≤ 1/2`; converted to a
/// relative bound on the product.
fn rel_from_log_bound(s: f64) -> f64 {
    if s > 0.5 {
        f64::INFINITY
    } else {
        (2.0 * s).exp_m1()
    }
}

/// `(z; p)_N = ∏_{j<N} (1 − z p^j)`.
pub fn qpoch(z: C64, p: C64, n: usize) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    let mut x = z;
    for _ in 0..n {
        acc *= 1.0 - x;
        x *= p;
    }
    acc
}

/// `θ(z; p) = (z; p)_∞ (p/z; p)_∞`, truncated at `j < n`.
pub fn theta_eval(z: C64, p: C64, n: usize) -> Result<Truncated> {
    if z == C64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("theta at z = 0".into()));
    }
    if p.norm() >= 1.0 {
        return Err(Error::InvalidArgument(format!("|p| = {} is not < 1", p.norm())));
    }
    let value = qpoch(z, p, n) * qpoch(p / z, p, n);
    let r = p.norm();
    let s = geometric_tail(z.norm(), r, n) + geometric_tail(r / z.norm(), r, n);
    Ok(Truncated {
        value,
        rel_tail: rel_from_log_bound(s),
    })
}

/// `θ(z; p)` without the tail bookkeeping; `z ≠ 0` and `|p| < 1` assumed.
pub fn theta(z: C64, p: C64, n: usize) -> C64 {
    qpoch(z, p, n) * qpoch(p / z, p, n)
}

/// `(z; p, q)_∞ = ∏_{j,k<n} (1 − z p^j q^k)`.
///
/// Rows whose leading term is already below `f64::EPSILON`-level are
/// skipped: they cannot change a double-precision result.
pub fn double_poch(z: C64, p: C64, q: C64, n: usize) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    let mut row = z;
    for _ in 0..n {
        if row.norm() < 1e-18 {
            break;
        }
        let mut x = row;
        for _ in 0..n {
            if x.norm() < 1e-18 {
                break;
            }
            acc *= 1.0 - x;
            x *= q;
        }
        row *= p;
    }
    acc
}

/// Smallest `|1 − z p^j q^k|` over the truncated grid.
fn nearest_zero(z: C64, p: C64, q: C64, n: usize) -> f64 {
    let mut best = f64::INFINITY;
    let mut row = z;
    for _ in 0..n {
        if row.norm() < 0.5 {
            break;
        }
        let mut x = row;
        for _ in 0..n {
            if x.norm() < 0.5 {
                break;
            }
            best = best.min((1.0 - x).norm());
            x *= q;
        }
        row *= p;
    }
    best
}

fn check_nomes(p: C64, q: C64) -> Result<()> {
    if p.norm() >= 1.0 || q.norm() >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "elliptic gamma needs |p|, |q| < 1 (got {}, {})",
            p.norm(),
            q.norm()
        )));
    }
    Ok(())
}

/// `Γ(z; p, q) = (pq/z; p, q)_∞ / (z; p, q)_∞`.
pub fn elliptic_gamma_eval(z: C64, p: C64, q: C64, n: usize) -> Result<C64> {
    check_nomes(p, q)?;
    if nearest_zero(z, p, q, n) < POLE_EPS {
        return Err(Error::Pole(format!("elliptic gamma at z = {z}")));
    }
    Ok(double_poch(p * q / z, p, q, n) / double_poch(z, p, q, n))
}

/// `1/Γ(z; p, q)`, finite everywhere on `C*`; zero at the poles of `Γ`.
pub fn recip_gamma(z: C64, p: C64, q: C64, n: usize) -> C64 {
    double_poch(z, p, q, n) / double_poch(p * q / z, p, q, n)
}

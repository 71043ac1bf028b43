//! Theta quotients `c · z_k^e · ∏ θ(ξ z_k; p)^{n_ξ}` at a fixed level.
//!
//! `z_k` is the level-`k` variable (`z_k^k = z`). The `z_power` field records
//! the units `(ξ z_k)^{-1}` produced by `θ(p x) = -x^{-1} θ(x)`, so that a
//! normal form is exact without leaving the multiplicative world.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::divisors::Divisor;
use crate::error::{Error, Result};
use crate::exactgroup::point::check_level;
use crate::exactgroup::{int, rat, Monomial, RelationLattice, P, Q};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaQuotient {
    level: u32,
    constant: Monomial,
    z_power: i64,
    factors: BTreeMap<Monomial, i64>,
}

impl ThetaQuotient {
    pub fn constant(level: u32, c: Monomial) -> Self {
        assert!(level >= 1, "level must be positive");
        ThetaQuotient {
            level,
            constant: c,
            z_power: 0,
            factors: BTreeMap::new(),
        }
    }

    pub fn one(level: u32) -> Self {
        Self::constant(level, Monomial::one())
    }

    /// `z_k^e`.
    pub fn z_pow(level: u32, e: i64) -> Self {
        let mut f = Self::one(level);
        f.z_power = e;
        f
    }

    /// `θ(ξ z_k; p)`.
    pub fn theta(level: u32, xi: Monomial) -> Self {
        Self::from_parts(level, Monomial::one(), 0, [(xi, 1)])
    }

    /// `θ(ξ z_k^e; p)` written in linear factors, using `θ(x/..)` reflection
    /// for `e < 0` and `θ(x^m) = ∏_{i,j<m} θ(ζ_m^i p^{j/m} x)` for `|e| > 1`.
    pub fn theta_pow(level: u32, xi: Monomial, e: i64) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidArgument("θ(ξ z^0) is not a theta factor".into()));
        }
        let (xi, m) = if e < 0 {
            (&Monomial::gen(P) / &xi, -e)
        } else {
            (xi, e)
        };
        if m == 1 {
            return Ok(Self::theta(level, xi));
        }
        let root = xi.pow(rat(1, m));
        let mut pts = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let s = &(&root * &Monomial::root_of_unity(rat(i, m)))
                    * &Monomial::gen_pow(P, rat(j, m));
                pts.push((s, 1));
            }
        }
        Ok(Self::from_parts(level, Monomial::one(), 0, pts))
    }

    /// Builds and normalizes.
    pub fn from_parts<I>(level: u32, constant: Monomial, z_power: i64, factors: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut f = Self::constant(level, constant);
        f.z_power = z_power;
        for (xi, n) in factors {
            f.push_factor(xi, n);
        }
        f
    }

    /// Multiplies in `θ(ξ z_k)^n`, reducing the `p`-exponent of `ξ` into
    /// `[0,1)` with `θ(p^n x) = (-1)^n x^{-n} p^{-n(n-1)/2} θ(x)`.
    fn push_factor(&mut self, xi: Monomial, n: i64) {
        if n == 0 {
            return;
        }
        let shift = xi.exponent(P).floor().to_integer();
        let xi = if shift != 0 {
            let rest = &xi / &Monomial::gen_pow(P, int(shift));
            // unit for one factor: (-1)^s rest^{-s} p^{-s(s-1)/2} z^{-s}
            let unit = &(&Monomial::minus_one().powi(shift) * &rest.powi(-shift))
                * &Monomial::gen_pow(P, int(-shift * (shift - 1) / 2));
            self.constant = &self.constant * &unit.powi(n);
            self.z_power -= shift * n;
            rest
        } else {
            xi
        };
        let slot = self.factors.entry(xi.clone()).or_insert(0);
        *slot += n;
        if *slot == 0 {
            self.factors.remove(&xi);
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn constant_part(&self) -> &Monomial {
        &self.constant
    }

    pub fn z_power(&self) -> i64 {
        self.z_power
    }

    pub fn factors(&self) -> &BTreeMap<Monomial, i64> {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty() && self.z_power == 0
    }

    /// Total multiplicity `Σ n_ξ`.
    pub fn theta_degree(&self) -> i64 {
        self.factors.values().sum()
    }

    /// Numerator part: constant, z-power and the positive factors.
    pub fn numerator(&self) -> ThetaQuotient {
        ThetaQuotient {
            factors: self
                .factors
                .iter()
                .filter(|(_, n)| **n > 0)
                .map(|(x, n)| (x.clone(), *n))
                .collect(),
            ..self.clone()
        }
    }

    /// Denominator part as an element of `Θ_k` (positive multiplicities).
    pub fn denominator(&self) -> ThetaQuotient {
        ThetaQuotient {
            level: self.level,
            constant: Monomial::one(),
            z_power: 0,
            factors: self
                .factors
                .iter()
                .filter(|(_, n)| **n < 0)
                .map(|(x, n)| (x.clone(), -n))
                .collect(),
        }
    }

    pub fn inv(&self) -> ThetaQuotient {
        ThetaQuotient {
            level: self.level,
            constant: self.constant.inv(),
            z_power: -self.z_power,
            factors: self.factors.iter().map(|(x, n)| (x.clone(), -n)).collect(),
        }
    }

    /// `f(1/z_k)`, using `θ(ξ/z) = θ(p ξ^{-1} z)`.
    pub fn reflect(&self) -> ThetaQuotient {
        let p = Monomial::gen(P);
        Self::from_parts(
            self.level,
            self.constant.clone(),
            -self.z_power,
            self.factors.iter().map(|(x, n)| (&p / x, *n)),
        )
    }

    /// The same function viewed at level `level·k`, i.e. with `z_k = z_{kl}^l`.
    pub fn lift(&self, l: u32) -> Result<ThetaQuotient> {
        if l == 0 {
            return Err(Error::InvalidArgument("lift factor must be positive".into()));
        }
        let level = self.level * l;
        let mut out = Self::constant(level, self.constant.clone());
        out.z_power = self.z_power * i64::from(l);
        for (xi, n) in &self.factors {
            let t = Self::theta_pow(level, xi.clone(), i64::from(l))?;
            out = tq_mul(&out, &t.powi(*n))?;
        }
        Ok(out)
    }

    pub fn powi(&self, e: i64) -> ThetaQuotient {
        if e == 0 {
            return Self::one(self.level);
        }
        ThetaQuotient {
            level: self.level,
            constant: self.constant.powi(e),
            z_power: self.z_power * e,
            factors: self.factors.iter().map(|(x, n)| (x.clone(), n * e)).collect(),
        }
    }

    /// The multiplier `f(p z_k)/f(z_k)` as `(monomial, z-power)`.
    pub fn p_multiplier(&self) -> (Monomial, i64) {
        let mut m = Monomial::gen_pow(P, int(self.z_power));
        let mut zp = 0;
        for (xi, n) in &self.factors {
            m = &m * &(&Monomial::minus_one() * &xi.inv()).powi(*n);
            zp -= n;
        }
        (m, zp)
    }

    /// Whether `f(p z_k) = f(z_k)` modulo the lattice.
    pub fn is_elliptic(&self, lattice: &RelationLattice) -> bool {
        let (m, zp) = self.p_multiplier();
        zp == 0 && lattice.is_trivial(&m)
    }
}

/// Re-applies the factor reduction; constructors already return normal forms,
/// so this is idempotent.
pub fn tq_normalize(f: &ThetaQuotient) -> ThetaQuotient {
    ThetaQuotient::from_parts(
        f.level,
        f.constant.clone(),
        f.z_power,
        f.factors.iter().map(|(x, n)| (x.clone(), *n)),
    )
}

pub fn tq_mul(f: &ThetaQuotient, g: &ThetaQuotient) -> Result<ThetaQuotient> {
    check_level(f.level, g.level)?;
    Ok(ThetaQuotient::from_parts(
        f.level,
        &f.constant * &g.constant,
        f.z_power + g.z_power,
        f.factors
            .iter()
            .chain(g.factors.iter())
            .map(|(x, n)| (x.clone(), *n)),
    ))
}

pub fn tq_div(f: &ThetaQuotient, g: &ThetaQuotient) -> Result<ThetaQuotient> {
    tq_mul(f, &g.inv())
}

/// `σ^{direction}(f)(z_k) = f(q_k^{direction} z_k)`.
pub fn tq_sigma(f: &ThetaQuotient, direction: i32) -> ThetaQuotient {
    let qk = Monomial::gen_pow(Q, rat(i64::from(direction), i64::from(f.level)));
    ThetaQuotient::from_parts(
        f.level,
        &f.constant * &qk.powi(f.z_power),
        f.z_power,
        f.factors.iter().map(|(x, n)| (x * &qk, *n)),
    )
}

/// `Σ n_ξ [ξ^{-1}]_k`.
pub fn tq_divisor(f: &ThetaQuotient, lattice: &Arc<RelationLattice>) -> Divisor {
    Divisor::from_points(
        f.level,
        lattice.clone(),
        f.factors.iter().map(|(x, n)| (x.inv(), *n)),
    )
}

impl fmt::Display for ThetaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.level == 1 {
            "z".to_string()
        } else {
            format!("z{}", self.level)
        };
        let mut parts = vec![];
        if !self.constant.is_one() || (self.factors.is_empty() && self.z_power == 0) {
            parts.push(format!("({})", self.constant));
        }
        if self.z_power != 0 {
            parts.push(format!("{var}^{}", self.z_power));
        }
        for (x, n) in &self.factors {
            let arg = if x.is_one() {
                var.clone()
            } else {
                format!("{x}*{var}")
            };
            if *n == 1 {
                parts.push(format!("θ({arg})"));
            } else {
                parts.push(format!("θ({arg})^{n}"));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Whether the `p`-exponent of every shift lies in `[0,1)`.
pub fn is_normalized(f: &ThetaQuotient) -> bool {
    f.factors.keys().all(|x| {
        let e = x.exponent(P);
        e >= num_rational::Ratio::zero() && e < num_rational::Ratio::one()
    }) && f.factors.values().all(|n| *n != 0)
}

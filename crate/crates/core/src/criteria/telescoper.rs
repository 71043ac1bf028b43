//! The telescoper obstruction and the constant-solution test.
//!
//! A telescoper for `δb/b` forces every zero or pole `ω` of `b` to have a
//! partner `ω q_k^ℓ`, `ℓ ≠ 0`, that is again a zero or pole. One support
//! point without such a partner therefore rules telescopers out.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactgroup::{int, Monomial, PointClass, Rat, RelationLattice, P, Q};
use crate::thetafield::{tq_divisor, ThetaQuotient};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collision {
    pub from: PointClass,
    pub to: PointClass,
    /// `to = from · q_k^ℓ` mod `p^Z`; `None` when `p` and `q` are dependent in
    /// the lattice and `ℓ` is not determined (reported conservatively).
    pub ell: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescoperReport {
    pub obstructed: bool,
    pub support: Vec<PointClass>,
    pub collisions: Vec<Collision>,
    /// Support points with no partner in their `q_k`-orbit.
    pub isolated: Vec<PointClass>,
}

/// `ℓ` with `ratio ≡ q_k^ℓ p^m` for integers `ℓ ≠ 0`, `m`.
fn orbit_step(ratio: &Monomial, level: u32, lattice: &RelationLattice) -> Option<Option<i64>> {
    let sol = lattice.solve_in_subgroup(ratio, &[Q, P])?;
    if !sol.is_unique() {
        return Some(None);
    }
    let ell = sol.particular[0] * int(i64::from(level));
    let m: Rat = sol.particular[1];
    if ell.is_integer() && !ell.is_zero() && m.is_integer() {
        Some(Some(ell.to_integer()))
    } else {
        None
    }
}

pub fn telescoper_obstruction(
    b: &ThetaQuotient,
    lattice: &Arc<RelationLattice>,
) -> Result<TelescoperReport> {
    let div = tq_divisor(b, lattice);
    if div.is_empty() {
        return Err(Error::EmptyDivisor);
    }
    let level = div.level();
    let support: Vec<PointClass> = div.support().collect();
    let mut collisions = Vec::new();
    let mut has_partner = vec![false; support.len()];
    for (i, a) in support.iter().enumerate() {
        for (j, c) in support.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(ell) = orbit_step(&(&c.value / &a.value), level, lattice) {
                has_partner[i] = true;
                collisions.push(Collision {
                    from: a.clone(),
                    to: c.clone(),
                    ell,
                });
            }
        }
    }
    let isolated: Vec<PointClass> = support
        .iter()
        .zip(&has_partner)
        .filter(|(_, h)| !**h)
        .map(|(p, _)| p.clone())
        .collect();
    Ok(TelescoperReport {
        obstructed: !isolated.is_empty(),
        support,
        collisions,
        isolated,
    })
}

/// True iff `ν = ∏ θ(x_j; p) ≠ 0`, i.e. no argument lies in `p^Z`. A nonzero
/// `ν` excludes constant solutions of the Riccati equation.
pub fn constant_solution_eliminated(nu_factors: &[Monomial], lattice: &RelationLattice) -> bool {
    nu_factors.iter().all(|x| match lattice.solve_in_subgroup(x, &[P]) {
        None => true,
        Some(sol) => sol.is_unique() && !sol.particular[0].is_integer(),
    })
}

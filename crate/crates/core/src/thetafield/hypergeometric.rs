//! The coefficients of the elliptic hypergeometric equation as theta
//! quotients, and the two parameter cases with their relation lattices.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::quotient::{tq_div, tq_mul, tq_sigma, ThetaQuotient};
use crate::error::{Error, Result};
use crate::exactgroup::{rat, Monomial, RelationLattice, P, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    A,
    B,
}

impl Case {
    /// Free generators: `e1..e8, p, q` for A; `e1..e7, p, q` for B.
    pub fn generators(self) -> Vec<String> {
        let n = match self {
            Case::A => 8,
            Case::B => 7,
        };
        (1..=n)
            .map(|j| format!("e{j}"))
            .chain([P.to_string(), Q.to_string()])
            .collect()
    }

    /// The lattice generated by the balancing condition alone.
    pub fn lattice(self) -> RelationLattice {
        let row = match self {
            Case::A => vec![1, 1, 1, 1, 1, 1, 1, 1, -2, -2],
            Case::B => vec![1, 1, 1, 1, 1, 1, 2, -2, -1],
        };
        RelationLattice::new(self.generators(), vec![row]).expect("case lattice is valid")
    }

    /// `ε_1..ε_8` in the case generators (`ε_8 = e7·q` in case B).
    pub fn epsilons(self) -> Vec<Monomial> {
        let mut eps: Vec<Monomial> = (1..=7).map(|j| Monomial::gen(&format!("e{j}"))).collect();
        eps.push(match self {
            Case::A => Monomial::gen("e8"),
            Case::B => &Monomial::gen("e7") * &Monomial::gen(Q),
        });
        eps
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::A => "A",
            Case::B => "B",
        })
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Case::A),
            "B" | "b" => Ok(Case::B),
            _ => Err(Error::Parse(format!("unknown case {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Hypergeometric {
    pub lattice: Arc<RelationLattice>,
    pub epsilons: Vec<Monomial>,
    /// `A(z) = ∏θ(ε_j z) / (θ(z²)θ(qz²))` at level 1.
    pub a: ThetaQuotient,
    /// `b = A(q^{-1}z^{-1}) / A(qz)` at level 1.
    pub b: ThetaQuotient,
    /// `σ^{-1}(b) = A(z^{-1}) / A(z)` at level 1.
    pub sigma_inv_b: ThetaQuotient,
    /// `σ^{-1}(b) = p2/p3` at level 2, with `p3 ∈ Θ_2`.
    pub p2: ThetaQuotient,
    pub p3: ThetaQuotient,
    /// Arguments `ε_j ε_8 / q`, `j = 1..6`, of `ν = ∏ θ(·; p)`.
    pub nu_factors: Vec<Monomial>,
    pub a_num_shifts: Vec<Monomial>,
    pub a_den_shifts: Vec<Monomial>,
}

/// Shifts `ξ` with `θ(z²)θ(qz²) = ∏ θ(ξ z)`.
fn a_denominator_shifts() -> Vec<Monomial> {
    let mut out = Vec::new();
    for base in [Monomial::one(), Monomial::gen_pow(Q, rat(1, 2))] {
        for s in ["1", "-1", "p^1/2", "-1*p^1/2"] {
            out.push(&base * &s.parse::<Monomial>().expect("literal"));
        }
    }
    out
}

pub fn build_hypergeometric(
    eps: &[Monomial],
    lattice: Arc<RelationLattice>,
) -> Result<Hypergeometric> {
    if eps.len() != 8 {
        return Err(Error::InvalidArgument(format!(
            "expected 8 parameters, got {}",
            eps.len()
        )));
    }
    let pq2 = Monomial::gen_pow(P, rat(2, 1)) * Monomial::gen_pow(Q, rat(2, 1));
    let prod: Monomial = eps.iter().cloned().product();
    if !lattice.equivalent(&prod, &pq2) {
        return Err(Error::NotElliptic);
    }
    let num = ThetaQuotient::from_parts(1, Monomial::one(), 0, eps.iter().map(|e| (e.clone(), 1)));
    let den_shifts = a_denominator_shifts();
    let den = ThetaQuotient::from_parts(
        1,
        Monomial::one(),
        0,
        den_shifts.iter().map(|x| (x.clone(), 1)),
    );
    let a = tq_div(&num, &den)?;
    if !a.is_elliptic(&lattice) {
        return Err(Error::NotElliptic);
    }
    let a_refl = a.reflect();
    let b = tq_div(&tq_sigma(&a_refl, 1), &tq_sigma(&a, 1))?;
    let sigma_inv_b = tq_div(&a_refl, &a)?;
    let lifted = sigma_inv_b.lift(2)?;
    let p2 = lifted.numerator();
    let p3 = lifted.denominator();
    debug_assert_eq!(tq_div(&p2, &p3)?, lifted);
    let e8 = &eps[7];
    let q = Monomial::gen(Q);
    let nu_factors = eps[..6].iter().map(|e| &(e * e8) / &q).collect();
    Ok(Hypergeometric {
        lattice,
        epsilons: eps.to_vec(),
        a,
        b,
        sigma_inv_b,
        p2,
        p3,
        nu_factors,
        a_num_shifts: eps.to_vec(),
        a_den_shifts: den_shifts,
    })
}

impl Hypergeometric {
    pub fn for_case(case: Case) -> Result<Self> {
        build_hypergeometric(&case.epsilons(), Arc::new(case.lattice()))
    }

    /// `σ^{-1}(p3)`, whose divisor bounds `div(r2)` in the Riccati analysis.
    pub fn sigma_inv_p3(&self) -> ThetaQuotient {
        tq_sigma(&self.p3, -1)
    }

    /// `A(qz)·b = A(q^{-1}z^{-1})`, handy for round-trip checks.
    pub fn b_times_aq(&self) -> Result<ThetaQuotient> {
        tq_mul(&self.b, &tq_sigma(&self.a, 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thetafield::quotient::tq_divisor;

    #[test]
    fn case_lattices_contain_balancing() {
        for case in [Case::A, Case::B] {
            let l = case.lattice();
            let prod: Monomial = case.epsilons().into_iter().product();
            assert!(l.equivalent(&prod, &"p^2*q^2".parse().unwrap()));
        }
    }

    #[test]
    fn a_is_elliptic_and_b_has_degree_zero() {
        for case in [Case::A, Case::B] {
            let h = Hypergeometric::for_case(case).unwrap();
            assert!(h.a.is_elliptic(&h.lattice));
            assert!(h.b.is_elliptic(&h.lattice));
            assert_eq!(tq_divisor(&h.b, &h.lattice).degree(), 0);
            assert_eq!(tq_divisor(&h.sigma_inv_b, &h.lattice).degree(), 0);
        }
    }

    #[test]
    fn sigma_inv_b_shape() {
        let h = Hypergeometric::for_case(Case::A).unwrap();
        // -z^2 θ(qz^2)/θ(qz^{-2}) ∏ θ(ε_j/z)/θ(ε_j z): 8 + 4 zeros, 8 + 4 poles
        assert!(h.sigma_inv_b.is_elliptic(&h.lattice));
        assert_eq!(h.sigma_inv_b.theta_degree(), 0);
        assert_eq!(h.sigma_inv_b.factors().len(), 24);
    }

    #[test]
    fn p2_p3_are_level_two_and_split_b() {
        let h = Hypergeometric::for_case(Case::A).unwrap();
        assert_eq!(h.p2.level(), 2);
        assert_eq!(h.p2.theta_degree(), 48);
        assert_eq!(h.p3.theta_degree(), 48);
        assert!(h.p3.factors().values().all(|n| *n > 0));
        assert_eq!(tq_div(&h.p2, &h.p3).unwrap(), h.sigma_inv_b.lift(2).unwrap());
    }

    #[test]
    fn b_round_trip() {
        let h = Hypergeometric::for_case(Case::B).unwrap();
        let lhs = h.b_times_aq().unwrap();
        let rhs = tq_sigma(&h.a.reflect(), 1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn unbalanced_parameters_rejected() {
        let mut eps = Case::A.epsilons();
        eps[0] = &eps[0] * &Monomial::gen(Q);
        let r = build_hypergeometric(&eps, Arc::new(Case::A.lattice()));
        assert_eq!(r.unwrap_err(), Error::NotElliptic);
    }

    #[test]
    fn nu_arguments() {
        let h = Hypergeometric::for_case(Case::A).unwrap();
        assert_eq!(h.nu_factors.len(), 6);
        assert_eq!(h.nu_factors[0], "e1*e8*q^-1".parse().unwrap());
    }
}

//! Combining both criteria into a one-directional verdict.

use std::fmt;
use std::sync::Arc;

use super::riccati::{
    attach_counts, general_riccati_enumerator_with_limit, riccati_constraint_search,
    RiccatiCandidate,
};
use super::telescoper::{constant_solution_eliminated, telescoper_obstruction, Collision, TelescoperReport};
use crate::error::{Error, Result};
use crate::exactgroup::{Monomial, RelationLattice};
use crate::thetafield::{build_hypergeometric, tq_divisor, Case, Hypergeometric, ThetaQuotient};

/// Node cap for the general enumerator when the lattice is not generic.
pub const NON_GENERIC_NODE_LIMIT: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Transcendental,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Transcendental => "transcendental",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    RiccatiCandidate(RiccatiCandidate),
    ConstantSolutionPossible,
    TelescoperOrbitCollision(Collision),
    NuZero,
    NonGenericLattice,
    EmptyDivisorB,
    /// The Riccati criterion could not be decided (search limit, or no
    /// coefficient `a` available).
    RiccatiNotEstablished(String),
}

impl Reason {
    pub fn name(&self) -> &'static str {
        match self {
            Reason::RiccatiCandidate(_) => "riccati_candidate",
            Reason::ConstantSolutionPossible => "constant_solution_possible",
            Reason::TelescoperOrbitCollision(_) => "telescoper_orbit_collision",
            Reason::NuZero => "nu_zero",
            Reason::NonGenericLattice => "non_generic_lattice",
            Reason::EmptyDivisorB => "empty_divisor_b",
            Reason::RiccatiNotEstablished(_) => "riccati_not_established",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub reasons: Vec<Reason>,
    pub candidates: Vec<RiccatiCandidate>,
    pub telescoper: Option<TelescoperReport>,
    /// `None` when `ν` was not part of the job.
    pub nu_zero: Option<bool>,
    pub data: Option<Hypergeometric>,
}

impl Verdict {
    fn finish(mut self) -> Self {
        self.outcome = if self.reasons.is_empty() {
            Outcome::Transcendental
        } else {
            Outcome::Inconclusive
        };
        self
    }

    pub fn reason_names(&self) -> Vec<&'static str> {
        self.reasons.iter().map(|r| r.name()).collect()
    }
}

fn telescoper_reasons(b: &ThetaQuotient, lattice: &Arc<RelationLattice>, reasons: &mut Vec<Reason>) -> Option<TelescoperReport> {
    match telescoper_obstruction(b, lattice) {
        Ok(rep) => {
            if !rep.obstructed {
                reasons.extend(rep.collisions.iter().cloned().map(Reason::TelescoperOrbitCollision));
            }
            Some(rep)
        }
        Err(_) => {
            reasons.push(Reason::EmptyDivisorB);
            None
        }
    }
}

/// Runs both criteria on the hypergeometric equation with parameters `eps`.
pub fn transcendence_verdict(
    eps: &[Monomial],
    case: Case,
    lattice: Arc<RelationLattice>,
) -> Result<Verdict> {
    let h = build_hypergeometric(eps, lattice.clone())?;
    let mut reasons = Vec::new();
    let generic = lattice.same_span(&case.lattice());

    let d1 = tq_divisor(&h.p2, &lattice);
    let d2 = tq_divisor(&h.sigma_inv_p3(), &lattice);
    let search = if generic {
        riccati_constraint_search(&d1, &d2, &lattice, case)
    } else {
        reasons.push(Reason::NonGenericLattice);
        let budget = d1.degree().max(d2.degree()).max(0) as usize;
        general_riccati_enumerator_with_limit(&h.p2, &h.p3, &lattice, budget, NON_GENERIC_NODE_LIMIT)
    };
    let mut candidates = match search {
        Ok(c) => c,
        Err(e @ (Error::SearchLimit(_) | Error::NonGenericLattice(_) | Error::BudgetExceeded { .. })) => {
            reasons.push(Reason::RiccatiNotEstablished(e.to_string()));
            Vec::new()
        }
        Err(e) => return Err(e),
    };
    attach_counts(&mut candidates, eps, &lattice);
    let nu_zero = !constant_solution_eliminated(&h.nu_factors, &lattice);
    for c in &candidates {
        if c.is_constant() {
            if nu_zero {
                reasons.push(Reason::ConstantSolutionPossible);
            }
        } else {
            reasons.push(Reason::RiccatiCandidate(c.clone()));
        }
    }
    if nu_zero {
        reasons.push(Reason::NuZero);
    }
    let telescoper = telescoper_reasons(&h.b, &lattice, &mut reasons);
    Ok(Verdict {
        outcome: Outcome::Inconclusive,
        reasons,
        candidates,
        telescoper,
        nu_zero: Some(nu_zero),
        data: Some(h),
    }
    .finish())
}

/// Verdict for a user-supplied `b` without a matching `a`: only the telescoper
/// criterion can be checked, so the result is never `Transcendental`.
pub fn custom_b_verdict(b: &ThetaQuotient, lattice: Arc<RelationLattice>) -> Verdict {
    let mut reasons = vec![Reason::RiccatiNotEstablished(
        "no coefficient a supplied; the Riccati criterion needs the full equation".into(),
    )];
    let telescoper = telescoper_reasons(b, &lattice, &mut reasons);
    Verdict {
        outcome: Outcome::Inconclusive,
        reasons,
        candidates: Vec::new(),
        telescoper,
        nu_zero: None,
        data: None,
    }
    .finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thetafield::tq_div;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn generic_cases_are_transcendental() {
        for case in [Case::A, Case::B] {
            let v = transcendence_verdict(&case.epsilons(), case, Arc::new(case.lattice())).unwrap();
            assert_eq!(v.outcome, Outcome::Transcendental, "{:?}", v.reason_names());
            assert_eq!(v.candidates.len(), 1);
            assert_eq!(v.nu_zero, Some(false));
        }
    }

    #[test]
    fn nu_zero_relation_is_inconclusive() {
        let l = Arc::new(Case::A.lattice().with_relations(&[m("e1*e8*q^-1")]).unwrap());
        let v = transcendence_verdict(&Case::A.epsilons(), Case::A, l).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        let names = v.reason_names();
        assert!(names.contains(&"nu_zero"));
        assert!(names.contains(&"non_generic_lattice"));
        assert!(names.contains(&"constant_solution_possible"));
    }

    #[test]
    fn custom_b_with_orbit_collision() {
        let l = Arc::new(Case::A.lattice());
        let b = tq_div(&ThetaQuotient::theta(1, Monomial::one()), &ThetaQuotient::theta(1, m("q^-1")))
            .unwrap();
        let v = custom_b_verdict(&b, l);
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(v.reason_names().contains(&"telescoper_orbit_collision"));
    }

    #[test]
    fn empty_b_reported() {
        let v = custom_b_verdict(&ThetaQuotient::one(1), Arc::new(Case::A.lattice()));
        assert!(v.reason_names().contains(&"empty_divisor_b"));
    }
}

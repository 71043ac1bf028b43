//! Decision procedures for the two transcendence criteria.

pub mod lp;
pub mod riccati;
pub mod telescoper;
pub mod verdict;

pub use riccati::{
    enumerate_divisors, general_riccati_enumerator, general_riccati_enumerator_with_limit,
    riccati_constraint_search, same_candidates, HypergeometricCounts, RiccatiCandidate,
    DEFAULT_NODE_LIMIT,
};
pub use telescoper::{constant_solution_eliminated, telescoper_obstruction, Collision, TelescoperReport};
pub use verdict::{custom_b_verdict, transcendence_verdict, Outcome, Reason, Verdict};

//! Exact arithmetic in the multiplicative group generated by the parameters.

pub mod lattice;
pub mod monomial;
pub mod point;

pub use lattice::{kernel_lattice, member_with_exponents, Membership, RelationLattice, P, Q};
pub use monomial::{int, mono_mul, rat, Monomial, Rat};
pub use point::{point_eq, PointClass};

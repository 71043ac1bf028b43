//! The field of theta quotients and the hypergeometric coefficients.

pub mod hypergeometric;
pub mod quotient;

pub use hypergeometric::{build_hypergeometric, Case, Hypergeometric};
pub use quotient::{is_normalized, tq_div, tq_divisor, tq_mul, tq_normalize, tq_sigma, ThetaQuotient};

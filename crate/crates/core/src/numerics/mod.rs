//! Floating-point evaluation of θ, the elliptic gamma function, the
//! hypergeometric coefficients, the V-integral and `f_ε`, plus residual
//! checks.

pub mod hypergeo;
pub mod products;
pub mod residual;

pub use hypergeo::{
    a_coeff, a_eval, b_coeff, c_param, circle_mean, circle_values, eps_from_t, f_eval, nu_eval, pairwise_sum, t_from_eps,
    v_integral_eval, v_integral_with, window_violations, Estimate, NumericParams,
};
pub use products::{double_poch, elliptic_gamma_eval, qpoch, recip_gamma, theta, theta_eval, Truncated, C64};
pub use residual::{
    generator_values, hypergeo_residual, monomial_eval, riccati_residual, sample_annulus, tq_eval,
    tq_eval_parts, Residual,
};

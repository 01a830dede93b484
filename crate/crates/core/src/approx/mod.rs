//! Approximation builders: Chebyshev series on an interval, exponential
//! approximations of `erf²`, and rational approximations of erf.

mod chebyshev;
mod erfsq;
pub mod minimize;
mod pade;

pub use chebyshev::{cheb_eval, cheb_fit, cheb_to_monomial, ChebyshevApproximant, Evaluation, MONOMIAL_MAX_DEGREE};
pub use erfsq::{
    erfsq_approx, erfsq_max_error, lsq_objective, objective_tolerance, optimize_a, ErfSqParams, OptimalA, A_BRACKET,
    OBJECTIVE_UPPER,
};
pub use pade::{pade_erf, PadeVariant};

/// Default number of Chebyshev–Gauss nodes for a degree-11 fit.
pub const DEFAULT_NODES: usize = 64;

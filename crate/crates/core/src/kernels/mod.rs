//! Scalar special functions: the erf family, half-integer incomplete gamma,
//! the generalized exponential integral, hypergeometric series and Hermite
//! polynomials.
//!
//! Everything here is a pure function of its arguments.

mod erf;
mod gamma;
mod hermite;
mod hypergeometric;

pub use erf::{erf, erfc, erfc_erfi, erfi, normal_cdf, try_erf, try_normal_cdf, ERF_SERIES_CUTOFF};
pub use gamma::{gamma_half_integer, gen_expint, incomplete_gamma, IncompleteGamma};
pub use hermite::{hermite, HERMITE_MAX_DEGREE};
pub use hypergeometric::{appell_f1, appell_f1_with, hyp1f1, hyp1f1_with, hyp2f1, hyp2f1_with};

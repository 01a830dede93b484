//! Numerics for `T(x) = ∫₀ˣ exp(−t²·erf t) dt`.
//!
//! The crate is organised bottom-up:
//!
//! * [`kernels`]: erf family, incomplete gamma, exponential integral,
//!   hypergeometric functions, Hermite polynomials.
//! * [`quadrature`]: adaptive Gauss–Kronrod integration, the ground truth every
//!   closed form is checked against.
//! * [`approx`]: Chebyshev fitting, exponential erf² approximations, Padé forms.
//! * [`dist`]: the distribution family built on T, fitting and sampling.
//! * [`integrals`]: integrals of erf powers and their closed-form approximations.
//! * [`series`]: exact Maclaurin coefficients of T over ℚ[π^{±1/2}].
//! * [`tfun`]: reference and fast piecewise evaluation of T, and T(∞).
//! * [`verify`]: every closed form checked against its oracle, as a report.
//!
//! The scalar-generic parts work for `f32` and `f64`; the aliases below fix the
//! common double-precision instantiations.

// `!(x > 0.0)` is used on purpose so NaN falls into the rejecting branch, and
// stored coefficients keep every digit they were given with.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod approx;
pub mod dist;
pub mod error;
pub mod integrals;
pub mod kernels;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod tfun;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;
pub use tolerance::ToleranceSpec;

pub type QuadResult64 = quadrature::QuadResult<f64>;
pub type EulerTrace64 = quadrature::EulerTrace<f64>;
pub type ToleranceSpec64 = ToleranceSpec<f64>;
pub type ChebyshevApproximant64 = approx::ChebyshevApproximant<f64>;
pub type ErfSqParams64 = approx::ErfSqParams<f64>;

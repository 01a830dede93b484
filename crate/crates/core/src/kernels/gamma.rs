use crate::error::{Error, Result};
use crate::scalar::Real;

use super::erf::erfc;

const MAX_SERIES_TERMS: usize = 100_000;

/// Lower and upper incomplete gamma functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncompleteGamma<R> {
    /// γ(s, x) = ∫₀ˣ t^{s−1} e^{−t} dt
    pub lower: R,
    /// Γ(s, x) = ∫ₓ^∞ t^{s−1} e^{−t} dt
    pub upper: R,
}

/// Twice `s`, checked to be a positive integer.
fn twice_half_integer<R: Real>(s: R) -> Result<usize> {
    let two_s = (s * R::lit(2.0)).as_f64();
    if !(two_s.is_finite() && two_s >= 1.0 && two_s.fract() == 0.0) {
        return Err(Error::domain(format!(
            "incomplete gamma order must be a positive half-integer, got {s}"
        )));
    }
    Ok(two_s as usize)
}

/// Γ(s) for s ∈ {1/2, 1, 3/2, …} by the product recurrence.
pub fn gamma_half_integer<R: Real>(s: R) -> Result<R> {
    let two_s = twice_half_integer(s)?;
    let (mut g, mut current) = if two_s % 2 == 1 {
        (R::sqrt_pi(), R::lit(0.5))
    } else {
        (R::one(), R::one())
    };
    for _ in 0..(two_s - 1) / 2 {
        g = g * current;
        current = current + R::one();
    }
    Ok(g)
}

/// `(γ(s, x), Γ(s, x))` for positive half-integer `s` and `x ≥ 0`.
///
/// The upper function comes from the upward recurrence
/// `Γ(s+1, x) = s·Γ(s, x) + xˢe^{−x}` seeded with `Γ(1/2, x) = √π·erfc(√x)` or
/// `Γ(1, x) = e^{−x}`. When `x < s + 1` the lower function is summed from its
/// positive power series instead of taken as `Γ(s) − Γ(s, x)`, which would
/// cancel catastrophically.
pub fn incomplete_gamma<R: Real>(s: R, x: R) -> Result<IncompleteGamma<R>> {
    let two_s = twice_half_integer(s)?;
    if !(x >= R::zero()) || !x.is_finite() {
        return Err(Error::domain(format!(
            "incomplete gamma argument must be finite and >= 0, got {x}"
        )));
    }
    let complete = gamma_half_integer(s)?;

    let (mut upper, mut order) = if two_s % 2 == 1 {
        (R::sqrt_pi() * erfc(x.sqrt()), R::lit(0.5))
    } else {
        ((-x).exp(), R::one())
    };
    let ex = (-x).exp();
    while order < s {
        upper = order * upper + x.powf(order) * ex;
        order = order + R::one();
    }

    let lower = if x < s + R::one() {
        lower_series(s, x)?
    } else {
        complete - upper
    };
    Ok(IncompleteGamma { lower, upper })
}

// γ(s, x) = xˢ e^{−x} Σₙ xⁿ / (s(s+1)…(s+n))
fn lower_series<R: Real>(s: R, x: R) -> Result<R> {
    if x == R::zero() {
        return Ok(R::zero());
    }
    let mut term = s.recip();
    let mut sum = term;
    let mut denom = s;
    for _ in 0..MAX_SERIES_TERMS {
        denom = denom + R::one();
        term = term * x / denom;
        sum = sum + term;
        if term <= sum * R::epsilon() * R::lit(0.5) {
            return Ok(sum * x.powf(s) * (-x).exp());
        }
    }
    Err(Error::Convergence {
        what: "lower incomplete gamma series",
        terms: MAX_SERIES_TERMS,
    })
}

/// Generalized exponential integral `E_ν(z) = z^{ν−1}·Γ(1−ν, z)` for the orders
/// `ν = 1/2 − 2k`, `k = 0, 1, 2, …`.
pub fn gen_expint<R: Real>(nu: R, z: R) -> Result<R> {
    if !(z > R::zero()) || !z.is_finite() {
        return Err(Error::domain(format!(
            "exponential integral argument must be > 0, got {z}"
        )));
    }
    let k2 = (R::lit(0.5) - nu).as_f64();
    if !(k2.is_finite() && k2 >= 0.0 && (k2 / 2.0).fract() == 0.0) {
        return Err(Error::UnsupportedOrder(nu.as_f64()));
    }
    let s = R::one() - nu;
    let g = incomplete_gamma(s, z)?;
    Ok(z.powf(nu - R::one()) * g.upper)
}

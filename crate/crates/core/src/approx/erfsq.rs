use serde::{Deserialize, Serialize};

use super::minimize::{brent, maximize_on_grid};
use crate::error::{Error, Result};
use crate::kernels::erf;
use crate::quadrature::integrate;
use crate::scalar::Real;
use crate::tolerance::ToleranceSpec;

/// Exponential approximations of `erf(x)²`.
///
/// * `Simple`: `1 − exp(−a·x²)`
/// * `Pade`: `1 − exp(−(4/π)·x²·(1 + αx²)/(1 + βx²))`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum ErfSqParams<R> {
    Simple { a: R },
    Pade { alpha: R, beta: R },
}

impl<R: Real> ErfSqParams<R> {
    pub fn simple(a: R) -> Result<Self> {
        if !(a > R::zero() && a.is_finite()) {
            return Err(Error::domain(format!("erf² exponent a must be positive, got {a}")));
        }
        Ok(ErfSqParams::Simple { a })
    }

    pub fn pade(alpha: R, beta: R) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::domain("Padé exponent coefficients must be finite"));
        }
        Ok(ErfSqParams::Pade { alpha, beta })
    }

    /// `a = (1 + π)^{2/3}·ln²2`.
    pub fn closed_form_a() -> R {
        let ln2 = R::LN_2();
        (R::one() + R::PI()).powf(R::lit(2.0 / 3.0)) * ln2 * ln2
    }

    /// The exponent that matches the Maclaurin series of `−ln(1 − erf²)`
    /// through `x⁶`: `α = (10 − π²)/(5(π − 3)π)`, `β = (120 − 60π + 7π²)/(15(π − 3)π)`.
    pub fn series_pade() -> Self {
        let pi = R::PI();
        let denom = (pi - R::lit(3.0)) * pi;
        let alpha = (R::lit(10.0) - pi * pi) / (R::lit(5.0) * denom);
        let beta = (R::lit(120.0) - R::lit(60.0) * pi + R::lit(7.0) * pi * pi) / (R::lit(15.0) * denom);
        ErfSqParams::Pade { alpha, beta }
    }

    /// Whether `1 + βx²` stays away from zero for every `|x| ≤ x_max`.
    pub fn is_regular_on(&self, x_max: R) -> bool {
        match *self {
            ErfSqParams::Simple { a } => a > R::zero(),
            ErfSqParams::Pade { beta, .. } => R::one() + beta.min(R::zero()) * x_max * x_max > R::zero(),
        }
    }
}

pub fn erfsq_approx<R: Real>(x: R, p: &ErfSqParams<R>) -> R {
    let x2 = x * x;
    let exponent = match *p {
        ErfSqParams::Simple { a } => a * x2,
        ErfSqParams::Pade { alpha, beta } => {
            R::lit(4.0) / R::PI() * x2 * (R::one() + alpha * x2) / (R::one() + beta * x2)
        }
    };
    -(-exponent).exp_m1()
}

/// `max |erf(x)² − approx(x)|` on `[lo, hi]` and where it is attained.
pub fn erfsq_max_error<R: Real>(p: &ErfSqParams<R>, lo: R, hi: R) -> Result<(R, R)> {
    maximize_on_grid(
        |x| {
            let e = erf(x);
            (e * e - erfsq_approx(x, p)).abs()
        },
        lo,
        hi,
        6000,
    )
}

/// Upper limit used for the least-squares objective; both `erf²` and the
/// approximations have saturated to 1 in double precision well before it.
pub const OBJECTIVE_UPPER: f64 = 8.0;

/// Tolerance that resolves objective values down to about 1e-18.
pub fn objective_tolerance<R: Real>() -> ToleranceSpec<R> {
    ToleranceSpec {
        abs_tol: R::lit(1e-18).max(R::epsilon() * R::epsilon()),
        rel_tol: R::lit(1e-10).max(R::epsilon() * R::lit(64.0)),
        max_terms: 1_000_000,
    }
}

/// `F = ∫₀^∞ (erf(x)² − approx(x))² dx`, truncated at [`OBJECTIVE_UPPER`].
pub fn lsq_objective<R: Real>(p: &ErfSqParams<R>) -> Result<R> {
    let q = integrate(
        |x| {
            let e = erf(x);
            let d = e * e - erfsq_approx(x, p);
            d * d
        },
        R::zero(),
        R::lit(OBJECTIVE_UPPER),
        &objective_tolerance(),
    )?;
    Ok(q.value)
}

/// Result of minimizing the least-squares objective over the simple exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalA<R> {
    pub a_star: R,
    pub f_min: R,
    /// `(1 + π)^{2/3}·ln²2`, for comparison.
    pub closed_form: R,
}

/// Search interval for [`optimize_a`].
pub const A_BRACKET: (f64, f64) = (0.5, 2.5);

pub fn optimize_a<R: Real>() -> Result<OptimalA<R>> {
    let objective = |a: R| lsq_objective(&ErfSqParams::simple(a)?);
    let x_tol = R::lit(1e-9).max(R::epsilon().sqrt());
    let m = brent(objective, R::lit(A_BRACKET.0), R::lit(A_BRACKET.1), x_tol, 200)?;
    let edge = R::lit(1e-3);
    if m.x - R::lit(A_BRACKET.0) < edge || R::lit(A_BRACKET.1) - m.x < edge {
        return Err(Error::Optimization(format!("minimum {} sits on the bracket edge", m.x)));
    }
    Ok(OptimalA {
        a_star: m.x,
        f_min: m.value,
        closed_form: ErfSqParams::closed_form_a(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_at_origin() {
        assert_eq!(erfsq_approx(0.0_f64, &ErfSqParams::simple(1.2).unwrap()), 0.0);
        assert_eq!(erfsq_approx(0.0_f64, &ErfSqParams::series_pade()), 0.0);
    }

    #[test]
    fn closed_form_value() {
        let a: f64 = ErfSqParams::<f64>::closed_form_a();
        assert!((a - 1.239_070_00).abs() < 1e-7, "{a}");
    }

    #[test]
    fn pade_coefficients() {
        match ErfSqParams::<f64>::series_pade() {
            ErfSqParams::Pade { alpha, beta } => {
                assert!((alpha - 0.058_627_6).abs() < 1e-7);
                assert!((beta - 0.088_674_5).abs() < 1e-7);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn simple_max_error_pinned() {
        // Measured with scipy: 0.0051 near x ≈ 1.
        let (_, e) = erfsq_max_error(&ErfSqParams::simple(1.23907_f64).unwrap(), 0.0, 6.0).unwrap();
        assert!((e - 0.0051).abs() < 1e-4, "{e}");
    }

    #[test]
    fn pade_max_error() {
        let (_, e) = erfsq_max_error(&ErfSqParams::<f64>::series_pade(), 0.0, 6.0).unwrap();
        assert!((e - 3.8267e-4).abs() < 1e-7, "{e}");
    }

    #[test]
    fn objectives() {
        let f_star = lsq_objective(&ErfSqParams::simple(1.239_071_27_f64).unwrap()).unwrap();
        assert!((f_star - 2.5716e-5).abs() < 1e-8, "{f_star}");
        let f_pade = lsq_objective(&ErfSqParams::<f64>::series_pade()).unwrap();
        assert!((f_pade - 1.1568e-7).abs() < 1e-10, "{f_pade}");
    }

    #[test]
    fn bounded_and_saturating() {
        let p = ErfSqParams::simple(1.23907_f64).unwrap();
        for x in [-4.0, -1.0, 0.3, 2.0, 30.0] {
            let v = erfsq_approx(x, &p);
            assert!((0.0..=1.0).contains(&v));
        }
        assert_eq!(erfsq_approx(40.0, &p), 1.0);
    }

    #[test]
    fn rejects_nonpositive_a() {
        assert!(ErfSqParams::simple(0.0_f64).is_err());
        assert!(!ErfSqParams::pade(0.0_f64, -1.0).unwrap().is_regular_on(2.0));
    }
}

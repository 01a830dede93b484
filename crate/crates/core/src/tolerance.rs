use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Accuracy contract for series summation and quadrature.
///
/// For series, `max_terms` bounds the number of summed terms. For quadrature it is
/// the integrand-evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSpec<R> {
    pub abs_tol: R,
    pub rel_tol: R,
    pub max_terms: usize,
}

impl<R: Real> ToleranceSpec<R> {
    pub fn new(abs_tol: R, rel_tol: R, max_terms: usize) -> Result<Self> {
        let tol = ToleranceSpec {
            abs_tol,
            rel_tol,
            max_terms,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let ok_sign = self.abs_tol >= R::zero() && self.rel_tol >= R::zero();
        let some_positive = self.abs_tol > R::zero() || self.rel_tol > R::zero();
        if !ok_sign || !some_positive {
            return Err(Error::Precondition(format!(
                "tolerances must be non-negative with one strictly positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(Error::Precondition("max_terms must be at least 1".into()));
        }
        Ok(())
    }

    /// Series summation: stop at relative machine precision.
    pub fn series() -> Self {
        ToleranceSpec {
            abs_tol: R::zero(),
            rel_tol: R::epsilon(),
            max_terms: 20_000,
        }
    }

    /// Quadrature default: 1e-13 absolute, 1e-12 relative, 10⁶ evaluations.
    /// In single precision the tolerances are floored at 64 ulp.
    pub fn quadrature() -> Self {
        let floor = R::epsilon() * R::lit(64.0);
        ToleranceSpec {
            abs_tol: R::lit(1e-13).max(floor),
            rel_tol: R::lit(1e-12).max(floor),
            max_terms: 1_000_000,
        }
    }

    /// Largest of the absolute and relative bounds for a value of magnitude `scale`.
    #[inline]
    pub fn bound(&self, scale: R) -> R {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}

impl<R: Real> Default for ToleranceSpec<R> {
    fn default() -> Self {
        Self::series()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_all_zero_tolerances() {
        assert!(ToleranceSpec::<f64>::new(0.0, 0.0, 10).is_err());
        assert!(ToleranceSpec::<f64>::new(1e-3, 0.0, 0).is_err());
        assert!(ToleranceSpec::<f64>::new(-1.0, 1e-3, 5).is_err());
        assert!(ToleranceSpec::<f64>::new(0.0, 1e-3, 5).is_ok());
    }

    #[test]
    fn quadrature_defaults() {
        let t = ToleranceSpec::<f64>::quadrature();
        assert_eq!(t.abs_tol, 1e-13);
        assert_eq!(t.rel_tol, 1e-12);
        assert_eq!(t.max_terms, 1_000_000);
        let s = ToleranceSpec::<f32>::quadrature();
        assert!(s.abs_tol > 1e-6);
    }
}

//! Hypergeometric series ₁F₁, ₂F₁ and Appell F₁, summed directly.
//!
//! Summation stops once two consecutive terms (anti-diagonals for F₁) fall
//! below `max(abs_tol, rel_tol·|sum|)` while the term ratio is contracting.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerance::ToleranceSpec;

fn is_nonpositive_integer<R: Real>(c: R) -> bool {
    c <= R::zero() && c.fract() == R::zero()
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
pub fn hyp1f1<R: Real>(a: R, b: R, z: R) -> Result<R> {
    hyp1f1_with(a, b, z, &ToleranceSpec::series())
}

pub fn hyp1f1_with<R: Real>(a: R, b: R, z: R, tol: &ToleranceSpec<R>) -> Result<R> {
    tol.validate()?;
    if is_nonpositive_integer(b) {
        return Err(Error::domain(format!(
            "1F1 lower parameter {b} is a non-positive integer"
        )));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::domain("1F1 arguments must be finite"));
    }
    // Kummer's transformation keeps the series positive for negative z.
    if z < -R::one() {
        let s = kummer_series(b - a, b, -z, tol)?;
        return Ok(z.exp() * s);
    }
    kummer_series(a, b, z, tol)
}

fn kummer_series<R: Real>(a: R, b: R, z: R, tol: &ToleranceSpec<R>) -> Result<R> {
    let mut term = R::one();
    let mut sum = R::one();
    let mut small_run = 0;
    for n in 0..tol.max_terms {
        let nf = R::from_count(n);
        let ratio = (a + nf) * z / ((b + nf) * (nf + R::one()));
        term = term * ratio;
        sum = sum + term;
        if term == R::zero() {
            return Ok(sum);
        }
        if term.abs() <= tol.bound(sum) && ratio.abs() < R::one() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Convergence {
        what: "1F1 series",
        terms: tol.max_terms,
    })
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for |z| < 1.
pub fn hyp2f1<R: Real>(a: R, b: R, c: R, z: R) -> Result<R> {
    hyp2f1_with(a, b, c, z, &ToleranceSpec::series())
}

pub fn hyp2f1_with<R: Real>(a: R, b: R, c: R, z: R, tol: &ToleranceSpec<R>) -> Result<R> {
    tol.validate()?;
    if !(z.abs() < R::one()) {
        return Err(Error::domain(format!("2F1 requires |z| < 1, got {z}")));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!(
            "2F1 lower parameter {c} is a non-positive integer"
        )));
    }
    let mut term = R::one();
    let mut sum = R::one();
    let mut small_run = 0;
    for n in 0..tol.max_terms {
        let nf = R::from_count(n);
        let ratio = (a + nf) * (b + nf) * z / ((c + nf) * (nf + R::one()));
        term = term * ratio;
        sum = sum + term;
        if term == R::zero() {
            return Ok(sum);
        }
        if term.abs() <= tol.bound(sum) && ratio.abs() < R::one() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Convergence {
        what: "2F1 series",
        terms: tol.max_terms,
    })
}

/// Appell's two-variable function F₁(a; b₁, b₂; c; x, y) for |x|, |y| < 1.
///
/// Summed over anti-diagonals `m + n = d`:
/// `Σ_d (a)_d/(c)_d · Σ_{m+n=d} (b₁)_m xᵐ/m! · (b₂)_n yⁿ/n!`.
pub fn appell_f1<R: Real>(a: R, b1: R, b2: R, c: R, x: R, y: R) -> Result<R> {
    appell_f1_with(a, b1, b2, c, x, y, &ToleranceSpec::series())
}

#[allow(clippy::too_many_arguments)]
pub fn appell_f1_with<R: Real>(a: R, b1: R, b2: R, c: R, x: R, y: R, tol: &ToleranceSpec<R>) -> Result<R> {
    tol.validate()?;
    if !(x.abs() < R::one() && y.abs() < R::one()) {
        return Err(Error::domain(format!(
            "Appell F1 requires |x|, |y| < 1, got ({x}, {y})"
        )));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!(
            "Appell F1 lower parameter {c} is a non-positive integer"
        )));
    }
    // px[m] = (b1)_m x^m / m!, py[n] = (b2)_n y^n / n!
    let mut px = vec![R::one()];
    let mut py = vec![R::one()];
    let mut prefix = R::one(); // (a)_d / (c)_d
    let mut sum = R::one();
    let mut small_run = 0;
    let max_diag = tol.max_terms.min(10_000);
    for d in 1..max_diag {
        let k = R::from_count(d - 1);
        px.push(px[d - 1] * (b1 + k) * x / (k + R::one()));
        py.push(py[d - 1] * (b2 + k) * y / (k + R::one()));
        prefix = prefix * (a + k) / (c + k);
        let inner = (0..=d).fold(R::zero(), |acc, m| acc + px[m] * py[d - m]);
        let diag = prefix * inner;
        sum = sum + diag;
        let tail_shrinking = R::from_count(d) > (a.abs() + c.abs() + b1.abs() + b2.abs());
        if diag.abs() <= tol.bound(sum) && tail_shrinking {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Convergence {
        what: "Appell F1 series",
        terms: max_diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::erf;

    #[test]
    fn trivial_arguments() {
        assert_eq!(hyp1f1(0.3_f64, 1.7, 0.0).unwrap(), 1.0);
        assert_eq!(hyp2f1(0.3_f64, 1.2, 1.7, 0.0).unwrap(), 1.0);
        assert_eq!(appell_f1(0.3_f64, 1.2, -0.4, 1.7, 0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn erf_through_kummer() {
        let x = 1.2_f64;
        let via = 2.0 / std::f64::consts::PI.sqrt() * x * hyp1f1(0.5, 1.5, -x * x).unwrap();
        assert!((via - erf(x)).abs() < 1e-13);
    }

    #[test]
    fn kummer_at_heuristic_argument() {
        // ₁F₁(1/2; 3/2; −x²) = √π·erf(x)/(2x) with x = e√π.
        let x = std::f64::consts::E * std::f64::consts::PI.sqrt();
        let oracle = std::f64::consts::PI.sqrt() * erf(x) / (2.0 * x);
        let v = hyp1f1(0.5, 1.5, -x * x).unwrap();
        assert!((v - oracle).abs() < 1e-14);
        assert!((v - 0.18393972058397180).abs() < 1e-14);
    }

    #[test]
    fn gauss_log_identity() {
        let z = -1.0_f64 / 3.0;
        let v = hyp2f1(1.0, 1.0, 2.0, z).unwrap();
        assert!((v - (-(1.0 - z).ln() / z)).abs() < 1e-13);
    }

    #[test]
    fn appell_diagonal_reduction() {
        let (a, b1, b2, c, x) = (1.5_f64, 0.5, 1.0, 2.5, 0.2);
        let f1 = appell_f1(a, b1, b2, c, x, x).unwrap();
        let f21 = hyp2f1(a, b1 + b2, c, x).unwrap();
        assert!((f1 - f21).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(hyp2f1(1.0_f64, 1.0, 2.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(hyp2f1(1.0_f64, 1.0, -2.0, 0.1), Err(Error::Domain(_))));
        assert!(matches!(hyp1f1(1.0_f64, 0.0, 0.1), Err(Error::Domain(_))));
        assert!(matches!(
            appell_f1(1.0_f64, 1.0, 1.0, 2.0, 0.5, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn non_convergence_reported() {
        let tol = ToleranceSpec::new(0.0, 1e-16, 3).unwrap();
        assert!(matches!(
            hyp2f1_with(1.0_f64, 1.0, 2.0, 0.9, &tol),
            Err(Error::Convergence { .. })
        ));
    }
}

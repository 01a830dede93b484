use crate::error::{Error, Result};
use crate::scalar::Real;

/// Below this magnitude erf is summed from its alternating Maclaurin series;
/// above it, from the erfc continued fraction.
pub const ERF_SERIES_CUTOFF: f64 = 2.0;

const MAX_SERIES_TERMS: usize = 200;
const MAX_CF_TERMS: usize = 5_000;

/// The error function.
///
/// Total on the extended reals: `erf(±∞) = ±1` and NaN propagates. Use [`try_erf`]
/// to reject non-finite input.
pub fn erf<R: Real>(x: R) -> R {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    if ax <= R::lit(ERF_SERIES_CUTOFF) {
        erf_series(x)
    } else {
        let v = R::one() - erfc_cf(ax);
        if x < R::zero() {
            -v
        } else {
            v
        }
    }
}

pub fn try_erf<R: Real>(x: R) -> Result<R> {
    if !x.is_finite() {
        return Err(Error::domain(format!("erf argument must be finite, got {x}")));
    }
    Ok(erf(x))
}

/// Complementary error function `1 − erf(x)`, accurate in the right tail.
pub fn erfc<R: Real>(x: R) -> R {
    if x.is_nan() {
        return x;
    }
    if x.abs() <= R::lit(ERF_SERIES_CUTOFF) {
        R::one() - erf_series(x)
    } else if x > R::zero() {
        erfc_cf(x)
    } else {
        R::lit(2.0) - erfc_cf(-x)
    }
}

/// Imaginary error function `−i·erf(ix)`, summed as the positive series
/// `(2/√π) Σ x^{2n+1} / (n!(2n+1))`.
pub fn erfi<R: Real>(x: R) -> Result<R> {
    if !x.is_finite() {
        return Err(Error::domain(format!("erfi argument must be finite, got {x}")));
    }
    if x.abs() > R::lit(6.0) {
        return Err(Error::range(format!("erfi({x}) is only evaluated for |x| <= 6")));
    }
    let x2 = x * x;
    let mut power = x; // x^{2n+1} / n!
    let mut sum = x;
    for n in 1..MAX_SERIES_TERMS {
        power = power * x2 / R::from_count(n);
        let term = power / R::from_count(2 * n + 1);
        sum = sum + term;
        if term.abs() <= R::epsilon() * sum.abs() * R::lit(0.5) {
            return Ok(sum * R::lit(2.0) / R::sqrt_pi());
        }
    }
    Err(Error::Convergence {
        what: "erfi series",
        terms: MAX_SERIES_TERMS,
    })
}

pub fn erfc_erfi<R: Real>(x: R) -> Result<(R, R)> {
    if !x.is_finite() {
        return Err(Error::domain(format!("argument must be finite, got {x}")));
    }
    Ok((erfc(x), erfi(x)?))
}

/// Standard normal CDF, `Φ(x) = (1 + erf(x/√2))/2`, evaluated as `erfc(−x/√2)/2`.
pub fn normal_cdf<R: Real>(x: R) -> R {
    R::lit(0.5) * erfc(-x * R::FRAC_1_SQRT_2())
}

pub fn try_normal_cdf<R: Real>(x: R) -> Result<R> {
    if !x.is_finite() {
        return Err(Error::domain(format!("normal_cdf argument must be finite, got {x}")));
    }
    Ok(normal_cdf(x))
}

// (2/√π) Σ (−1)ⁿ x^{2n+1} / (n!(2n+1)); alternating, so the first neglected
// term bounds the remainder.
fn erf_series<R: Real>(x: R) -> R {
    let x2 = x * x;
    let mut power = x; // (−1)ⁿ x^{2n+1} / n!
    let mut sum = x;
    for n in 1..MAX_SERIES_TERMS {
        power = -power * x2 / R::from_count(n);
        let term = power / R::from_count(2 * n + 1);
        sum = sum + term;
        if term.abs() <= R::epsilon() * sum.abs() * R::lit(0.25) {
            break;
        }
    }
    sum * R::FRAC_2_SQRT_PI()
}

// Laplace continued fraction, modified Lentz:
// erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))), x > 0.
fn erfc_cf<R: Real>(x: R) -> R {
    if x.is_infinite() {
        return R::zero();
    }
    let tiny = R::min_positive_value().sqrt();
    let mut f = x;
    let mut c = x;
    let mut d = R::zero();
    for n in 1..MAX_CF_TERMS {
        let a = R::from_count(n) * R::lit(0.5);
        d = x + a * d;
        if d == R::zero() {
            d = tiny;
        }
        c = x + a / c;
        if c == R::zero() {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f = f * delta;
        if (delta - R::one()).abs() <= R::epsilon() {
            break;
        }
    }
    (-x * x).exp() / (R::sqrt_pi() * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_known_values() {
        assert_eq!(erf(0.0_f64), 0.0);
        assert!((erf(1.0_f64) - 0.8427007929497149).abs() <= 1e-15);
        assert!((erf(2.0_f64) - 0.9953222650189527).abs() <= 1e-15);
        assert!((erf(2.5_f64) - 0.9995930479825550).abs() <= 1e-15);
        assert!((erf(0.7_f64) + erf(-0.7_f64)).abs() == 0.0);
        assert_eq!(erf(f64::INFINITY), 1.0);
        assert_eq!(erf(f64::NEG_INFINITY), -1.0);
    }

    #[test]
    fn erf_is_continuous_at_cutoff() {
        let below = erf(2.0_f64);
        let above = erf(2.0_f64 + 1e-15);
        assert!((above - below).abs() < 1e-15);
    }

    #[test]
    fn try_erf_rejects_non_finite() {
        assert!(matches!(try_erf(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(try_erf(f64::INFINITY), Err(Error::Domain(_))));
        assert!(try_erf(0.3_f64).is_ok());
    }

    #[test]
    fn erfc_and_erfi() {
        let (c, i) = erfc_erfi(0.0_f64).unwrap();
        assert_eq!((c, i), (1.0, 0.0));
        assert!((erfi(1.0_f64).unwrap() - 1.6504257587975429).abs() <= 1e-15);
        assert!((erfc(2.5_f64) + erf(2.5_f64) - 1.0).abs() <= 1e-15);
        // erfc(5) from a 30-digit reference
        assert!((erfc(5.0_f64) / 1.5374597944280348502e-12 - 1.0).abs() < 1e-13);
        assert!((erfc(-3.0_f64) - (2.0 - erfc(3.0_f64))).abs() == 0.0);
        assert!(matches!(erfi(6.5_f64), Err(Error::Range(_))));
    }

    #[test]
    fn normal_cdf_bridge() {
        assert_eq!(normal_cdf(0.0_f64), 0.5);
        let x = 0.9_f64;
        assert!((erf(x) - (2.0 * normal_cdf(x * 2f64.sqrt()) - 1.0)).abs() <= 1e-15);
        assert!((normal_cdf(1.3_f64) + normal_cdf(-1.3_f64) - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn single_precision() {
        assert!((erf(1.0_f32) - 0.842_700_8).abs() < 1e-6);
        assert!((erfc(3.0_f32) - 2.209_05e-5).abs() < 1e-9);
    }
}

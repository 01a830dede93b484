use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Rational approximations of erf.
///
/// * `Simple`: `2x / (√π·(1 + x²/3))`, the [1/2] Padé approximant.
/// * `Refined`: `(2x/√π)·(1 − x²/30) / (1 + 3x²/10)`, the [3/2] Padé approximant.
/// * `Split`: `2x/√π − (x³/(15√π))/(1 + 3x²/10)`, an alternative expression
///   sometimes quoted for the refined form. It does not match the x³ Taylor
///   coefficient of erf and is kept only for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PadeVariant {
    Simple,
    Refined,
    Split,
}

pub fn pade_erf<R: Real>(x: R, variant: PadeVariant) -> R {
    let x2 = x * x;
    let lead = R::lit(2.0) * x / R::sqrt_pi();
    match variant {
        PadeVariant::Simple => lead / (R::one() + x2 / R::lit(3.0)),
        PadeVariant::Refined => lead * (R::one() - x2 / R::lit(30.0)) / (R::one() + R::lit(0.3) * x2),
        PadeVariant::Split => lead - x * x2 / (R::lit(15.0) * R::sqrt_pi()) / (R::one() + R::lit(0.3) * x2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::erf;

    #[test]
    fn odd_and_zero() {
        for v in [PadeVariant::Simple, PadeVariant::Refined, PadeVariant::Split] {
            assert_eq!(pade_erf(0.0_f64, v), 0.0);
            assert_eq!(pade_erf(-0.7_f64, v), -pade_erf(0.7_f64, v));
        }
    }

    #[test]
    fn small_argument() {
        assert!((pade_erf(0.1_f64, PadeVariant::Simple) - erf(0.1)).abs() < 1e-6);
        assert!((pade_erf(0.1_f64, PadeVariant::Refined) - erf(0.1)).abs() < 1e-9);
    }

    #[test]
    fn refined_closer_below_crossing() {
        // The two error curves cross near x = 0.99487; at x = 1 the simple form
        // is marginally better (3.584e-3 against 3.650e-3).
        let gap = |x: f64| {
            let e = erf(x);
            (pade_erf(x, PadeVariant::Simple) - e).abs() - (pade_erf(x, PadeVariant::Refined) - e).abs()
        };
        for x in [0.25, 0.5, 0.75, 0.9, 0.99] {
            assert!(gap(x) > 0.0, "x = {x}");
        }
        assert!((gap(1.0) + 6.6035e-5).abs() < 1e-8, "{}", gap(1.0));
    }

    #[test]
    fn simple_increasing_below_sqrt3() {
        let mut prev = pade_erf(0.0_f64, PadeVariant::Simple);
        for i in 1..1000 {
            let x = 3.0_f64.sqrt() * i as f64 / 1000.0;
            let v = pade_erf(x, PadeVariant::Simple);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn taylor_prefix() {
        // Both forms expand as (2/√π)(x − x³/3 + …): check the cubic term by a divided difference.
        let h = 1e-3_f64;
        let cubic = |v| (pade_erf(h, v) - 2.0 * h / std::f64::consts::PI.sqrt()) / h.powi(3);
        let want = -2.0 / (3.0 * std::f64::consts::PI.sqrt());
        assert!((cubic(PadeVariant::Simple) - want).abs() < 1e-5);
        assert!((cubic(PadeVariant::Refined) - want).abs() < 1e-5);
        assert!((cubic(PadeVariant::Split) - want).abs() > 0.1);
    }
}

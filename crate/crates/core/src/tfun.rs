//! `T(x) = ∫₀ˣ exp(−t²·erf t) dt` and its fast evaluator.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::approx::{cheb_fit, ChebyshevApproximant, DEFAULT_NODES};
use crate::error::{Error, Result};
use crate::kernels::{erf, erfc, hyp1f1};
use crate::quadrature::{integrate, integrate_semi_infinite, GaussLegendre};
use crate::tolerance::ToleranceSpec;

/// `T(∞)` to 50 decimals.
pub const T_INFINITY_DIGITS: &str = "0.97210699276917859315107787544239117555427218338557";

/// Breakpoints of the piecewise evaluator.
pub const PIECE_BREAKS: [f64; 3] = [0.0, 1.5, 3.0];

/// Degree of each Chebyshev piece.
pub const PIECE_DEGREE: usize = 11;

/// Published monomial coefficients on `[0, 3/2]`, ascending powers.
pub const STORED_PIECE1: [f64; 12] = [
    0.0,
    1.00003172454,
    -0.00104123958376,
    0.0133517048763,
    -0.370071852413,
    0.338453415662,
    -0.746480407376,
    1.31691631085,
    -1.16161653976,
    0.548169602543,
    -0.135129528505,
    0.0137936039435,
];

/// Published monomial coefficients on `[3/2, 3]`, ascending powers.
pub const STORED_PIECE2: [f64; 12] = [
    1.04191571066,
    -4.69093970289,
    13.5920479951,
    -18.4622672665,
    15.3046428836,
    -8.55140470408,
    3.35913844398,
    -0.937675010268,
    0.183255163671,
    -0.0239397852528,
    0.00188305739843,
    -0.0000675632422240,
];

const GAMMA_FOUR_THIRDS: f64 = 0.892_979_511_569_249_2;

/// The integrand `exp(−x²·erf x)`.
#[inline]
pub fn t_integrand(x: f64) -> f64 {
    (-x * x * erf(x)).exp()
}

/// `∫₀ˣ e^{−t²}·erf t dt = (√π/4)·erf(x)²`, the elementary product-form integral.
pub fn product_form(x: f64) -> f64 {
    let e = erf(x);
    std::f64::consts::PI.sqrt() / 4.0 * e * e
}

/// Ground-truth `T(x)` by adaptive quadrature. Negative `x` integrates backwards.
pub fn t_reference(x: f64, tol: &ToleranceSpec<f64>) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("T needs a finite argument, got {x}")));
    }
    if x >= 0.0 {
        Ok(integrate(t_integrand, 0.0, x, tol)?.value)
    } else {
        Ok(-integrate(t_integrand, x, 0.0, tol)?.value)
    }
}

fn gauss30() -> &'static GaussLegendre<f64> {
    static RULE: OnceLock<GaussLegendre<f64>> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(30).expect("30 nodes"))
}

/// `T(x)` by composite 30-point Gauss–Legendre on panels of width ≤ 1/4.
///
/// Accurate to a few ulp and smooth in `x`, which the quadratic-mean norms
/// need. Past `x = 12` the integrand is below 1e-62 and the value is frozen.
pub fn t_smooth(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain(format!("t_smooth needs finite x >= 0, got {x}")));
    }
    Ok(gauss30().integrate_composite(t_integrand, 0.0, x.min(12.0), 0.25))
}

/// `I(a) ≈ a − a⁴/(2√π)`, the two leading Maclaurin terms. Only useful for small `a`.
pub fn taylor_head(a: f64) -> Result<f64> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("taylor_head needs a >= 0, got {a}")));
    }
    Ok(a - a.powi(4) / (2.0 * std::f64::consts::PI.sqrt()))
}

/// How to obtain `T(∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfinityMode {
    /// The 50-digit constant rounded to double.
    Stored,
    /// Semi-infinite quadrature.
    Quadrature,
    /// `(π^{1/6}·Γ(4/3)/2^{1/3})·₁F₁(1/2; 3/2; −πe²)`, a closed-form guess.
    Heuristic,
}

pub fn t_infinity(mode: InfinityMode) -> Result<f64> {
    use std::f64::consts::{E, PI};
    match mode {
        InfinityMode::Stored => Ok(T_INFINITY_DIGITS.parse().expect("valid literal")),
        InfinityMode::Quadrature => Ok(integrate_semi_infinite(t_integrand, 0.0, &ToleranceSpec::quadrature())?.value),
        InfinityMode::Heuristic => {
            let prefactor = PI.powf(1.0 / 6.0) * GAMMA_FOUR_THIRDS / 2f64.powf(1.0 / 3.0);
            Ok(prefactor * hyp1f1(0.5, 1.5, -PI * E * E)?)
        }
    }
}

/// Where the Chebyshev pieces came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluatorSource {
    /// The stored degree-11 monomial coefficients.
    Stored,
    /// A fresh degree-11 Chebyshev–Gauss fit of [`t_reference`].
    Regenerated,
}

/// Piecewise evaluator: degree-11 Chebyshev pieces on `[0, 3/2]` and `[3/2, 3]`,
/// then `T(3) + (√π/2)(erf x − erf 3)` beyond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TEvaluator {
    pub piece1: ChebyshevApproximant<f64>,
    pub piece2: ChebyshevApproximant<f64>,
    pub tail_constant: f64,
    pub source: EvaluatorSource,
}

pub fn build_evaluator(source: EvaluatorSource) -> Result<TEvaluator> {
    let tol = ToleranceSpec::quadrature();
    let [a, m, b] = PIECE_BREAKS;
    let (piece1, piece2) = match source {
        EvaluatorSource::Stored => (
            ChebyshevApproximant::from_monomial(a, m, &STORED_PIECE1)?,
            ChebyshevApproximant::from_monomial(m, b, &STORED_PIECE2)?,
        ),
        EvaluatorSource::Regenerated => {
            let f = |x: f64| t_reference(x, &tol);
            (
                cheb_fit(f, a, m, PIECE_DEGREE, DEFAULT_NODES)?,
                cheb_fit(f, m, b, PIECE_DEGREE, DEFAULT_NODES)?,
            )
        }
    };
    Ok(TEvaluator {
        piece1,
        piece2,
        tail_constant: t_reference(b, &tol)?,
        source,
    })
}

impl TEvaluator {
    /// `T(3) + (√π/2)(erf x − erf 3)`, written with erfc to keep the difference accurate.
    pub fn tail(&self, x: f64) -> f64 {
        let b = PIECE_BREAKS[2];
        self.tail_constant + std::f64::consts::PI.sqrt() / 2.0 * (erfc(b) - erfc(x))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::Domain(format!(
                "fast evaluator covers x >= 0 only (got {x}); use t_reference for other arguments"
            )));
        }
        let [_, m, b] = PIECE_BREAKS;
        Ok(if x <= m {
            self.piece1.eval(x)
        } else if x <= b {
            self.piece2.eval(x)
        } else {
            self.tail(x)
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn t_eval(ev: &TEvaluator, x: f64) -> Result<f64> {
    ev.eval(x)
}

fn stored_evaluator() -> &'static TEvaluator {
    static EV: OnceLock<TEvaluator> = OnceLock::new();
    EV.get_or_init(|| build_evaluator(EvaluatorSource::Stored).expect("stored coefficients are valid"))
}

/// `T(x)` through a process-wide evaluator built from the published coefficients.
pub fn t_fast(x: f64) -> Result<f64> {
    stored_evaluator().eval(x)
}

/// Monomial polynomial value, ascending coefficients.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceSpec<f64> {
        ToleranceSpec::quadrature()
    }

    #[test]
    fn reference_values() {
        assert_eq!(t_reference(0.0, &tol()).unwrap(), 0.0);
        assert!((t_reference(1.0, &tol()).unwrap() - 0.816_376_616_644_011_2).abs() < 1e-13);
        assert!((t_reference(10.0, &tol()).unwrap() - 0.972_106_992_769_178_6).abs() < 1e-12);
        assert!(t_reference(f64::NAN, &tol()).is_err());
        // The integrand is not even: exp(+x²·erf x) on the negative side.
        assert!(t_reference(-1.0, &tol()).unwrap() < -1.0);
    }

    #[test]
    fn smooth_matches_reference() {
        for (x, want) in [
            (0.5, 0.483_903_917_506_114_9),
            (2.0, 0.967_917_967_830_701_8),
            (3.0, 0.972_087_413_526_559),
        ] {
            let got = t_smooth(x).unwrap();
            assert!((got - want).abs() < 4e-16, "x = {x}: {got}");
        }
        assert_eq!(t_smooth(50.0).unwrap(), t_smooth(12.0).unwrap());
    }

    #[test]
    fn head() {
        assert_eq!(taylor_head(0.0).unwrap(), 0.0);
        let h = taylor_head(0.5).unwrap();
        assert!((h - 0.482_369_075_514_132_6).abs() < 1e-15);
        // The dropped t⁶ and t⁷ terms alone contribute about 1e-3.
        assert!((t_reference(0.5, &tol()).unwrap() - h - 1.534_842e-3).abs() < 1e-9);
        assert!((taylor_head(1.0).unwrap() - 0.717_905_2).abs() < 1e-7);
        assert!(taylor_head(-0.1).is_err());
    }

    #[test]
    fn infinity_modes() {
        let stored = t_infinity(InfinityMode::Stored).unwrap();
        assert_eq!(stored, 0.972_106_992_769_178_6);
        let quad = t_infinity(InfinityMode::Quadrature).unwrap();
        assert!(((quad - stored) / stored).abs() < 1e-12);
        // The closed-form guess as written evaluates far from T(∞).
        let h = t_infinity(InfinityMode::Heuristic).unwrap();
        assert!((h - 0.157_772_750_668_918_22).abs() < 1e-14, "{h}");
    }

    #[test]
    fn stored_evaluator_coefficients() {
        let ev = build_evaluator(EvaluatorSource::Stored).unwrap();
        let m1 = ev.piece1.to_monomial().unwrap();
        let m2 = ev.piece2.to_monomial().unwrap();
        assert!((m1[1] - 1.00003172454).abs() < 1e-12);
        assert!((m2[0] - 1.04191571066).abs() < 1e-10);
        assert!((ev.eval(1.0).unwrap() - 0.816377).abs() < 1e-5);
        assert!(ev.eval(0.0).unwrap().abs() <= 2e-6);
        assert!((ev.piece1.eval(1.5) - ev.piece2.eval(1.5)).abs() <= 1e-5);
        assert!(ev.tail_constant > 0.97 && ev.tail_constant < 0.973);
        assert!((ev.eval(50.0).unwrap() - 0.972_106_992_7).abs() < 1e-7);
        assert!(matches!(ev.eval(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn json_round_trip() {
        let ev = build_evaluator(EvaluatorSource::Stored).unwrap();
        let back = TEvaluator::from_json(&ev.to_json().unwrap()).unwrap();
        assert_eq!(back, ev);
        assert!(ev.to_json().unwrap().contains("\"stored\""));
    }
}

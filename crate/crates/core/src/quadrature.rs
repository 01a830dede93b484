//! Ground-truth numerical integration.
//!
//! Globally adaptive Gauss–Kronrod (7/15-point) bisection, a rational map for
//! `[a, ∞)`, the L² distance between two functions, and the plain explicit
//! Euler scheme for `y' = g(x)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerance::ToleranceSpec;

/// Evaluations spent by one Gauss–Kronrod panel.
pub const RULE_SIZE: usize = 15;

const MAX_DEPTH_WIDTH_RATIO: f64 = 1e-13;

// Kronrod abscissae on [0, 1]; the odd-indexed ones are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of a quadrature: value, error estimate, and integrand evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult<R> {
    pub value: R,
    pub err_estimate: R,
    pub n_evals: usize,
}

/// Samples of an explicit Euler integration, starting at the initial condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerTrace<R> {
    pub step: R,
    pub samples: Vec<(R, R)>,
}

impl<R: Real> EulerTrace<R> {
    pub fn last(&self) -> (R, R) {
        *self.samples.last().expect("trace always holds the initial sample")
    }
}

struct Panel<R> {
    lo: R,
    hi: R,
    value: R,
    err: R,
}

impl<R: Real> PartialEq for Panel<R> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<R: Real> Eq for Panel<R> {}
impl<R: Real> PartialOrd for Panel<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<R: Real> Ord for Panel<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

fn kronrod<R: Real, F: Fn(R) -> R>(f: &F, lo: R, hi: R) -> Panel<R> {
    let half = R::lit(0.5);
    let center = half * (lo + hi);
    let radius = half * (hi - lo);
    let fc = f(center);
    let mut k = fc * R::lit(WGK[7]);
    let mut g = fc * R::lit(WG[3]);
    for j in 0..7 {
        let dx = radius * R::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        k = k + R::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            g = g + R::lit(WG[j / 2]) * pair;
        }
    }
    Panel {
        lo,
        hi,
        value: k * radius,
        err: ((k - g) * radius).abs(),
    }
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// Returns [`Error::AccuracyNotReached`] with the best estimate when the
/// evaluation budget (`tol.max_terms`) runs out first.
pub fn integrate<R, F>(f: F, a: R, b: R, tol: &ToleranceSpec<R>) -> Result<QuadResult<R>>
where
    R: Real,
    F: Fn(R) -> R,
{
    tol.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(Error::domain(format!("integration limits out of order: [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult {
            value: R::zero(),
            err_estimate: R::zero(),
            n_evals: 0,
        });
    }

    let first = kronrod(&f, a, b);
    let mut n_evals = RULE_SIZE;
    let mut value = first.value;
    let mut err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let min_width = (b - a) * R::lit(MAX_DEPTH_WIDTH_RATIO);

    while err > tol.bound(value) {
        if n_evals + 2 * RULE_SIZE > tol.max_terms {
            return Err(Error::AccuracyNotReached {
                best: value.as_f64(),
                err_estimate: err.as_f64(),
                n_evals,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.hi - worst.lo < min_width {
            // Cannot refine further; the remaining error is rounding noise.
            heap.push(worst);
            break;
        }
        let mid = R::lit(0.5) * (worst.lo + worst.hi);
        let left = kronrod(&f, worst.lo, mid);
        let right = kronrod(&f, mid, worst.hi);
        n_evals += 2 * RULE_SIZE;
        value = value - worst.value + left.value + right.value;
        err = err - worst.err + left.err + right.err;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            // Re-sum to shed drift from the running updates.
            value = heap.iter().fold(R::zero(), |s, p| s + p.value);
            err = heap.iter().fold(R::zero(), |s, p| s + p.err);
        }
    }
    let value = heap.iter().fold(R::zero(), |s, p| s + p.value);
    let err_estimate = heap.iter().fold(R::zero(), |s, p| s + p.err);
    Ok(QuadResult {
        value,
        err_estimate,
        n_evals,
    })
}

/// Integral of `f` over `[a, ∞)` through `t = a + u/(1−u)`, `u ∈ [0, 1)`.
///
/// The caller guarantees at least exponential decay of `f`.
pub fn integrate_semi_infinite<R, F>(f: F, a: R, tol: &ToleranceSpec<R>) -> Result<QuadResult<R>>
where
    R: Real,
    F: Fn(R) -> R,
{
    if !a.is_finite() {
        return Err(Error::domain(format!("lower limit must be finite, got {a}")));
    }
    let mapped = |u: R| {
        let w = R::one() - u;
        let t = a + u / w;
        if !t.is_finite() {
            return R::zero();
        }
        let v = f(t) / (w * w);
        if v.is_finite() {
            v
        } else {
            R::zero()
        }
    };
    integrate(mapped, R::zero(), R::one(), tol)
}

/// Quadratic-mean distance `√(∫ₐᵇ (f − g)²)`.
pub fn l2_distance<R, F, G>(f: F, g: G, a: R, b: R, tol: &ToleranceSpec<R>) -> Result<R>
where
    R: Real,
    F: Fn(R) -> R,
    G: Fn(R) -> R,
{
    if !(a < b) {
        return Err(Error::domain(format!("L2 distance needs a < b, got [{a}, {b}]")));
    }
    let q = integrate(
        |x| {
            let d = f(x) - g(x);
            d * d
        },
        a,
        b,
        tol,
    )?;
    Ok(q.value.max(R::zero()).sqrt())
}

/// Explicit Euler for `y' = deriv(x)`: `y_{k+1} = y_k + h·deriv(x_k)`.
pub fn euler_scheme<R, F>(deriv: F, x0: R, y0: R, h: R, n_steps: usize) -> Result<EulerTrace<R>>
where
    R: Real,
    F: Fn(R) -> R,
{
    if !(h > R::zero()) || !h.is_finite() {
        return Err(Error::domain(format!("Euler step must be positive, got {h}")));
    }
    if n_steps == 0 {
        return Err(Error::Precondition("Euler scheme needs at least one step".into()));
    }
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push((x0, y0));
    let mut y = y0;
    for k in 0..n_steps {
        let x = x0 + R::from_count(k) * h;
        let slope = deriv(x);
        if !slope.is_finite() {
            return Err(Error::Propagation { step: k, x: x.as_f64() });
        }
        y = y + h * slope;
        samples.push((x0 + R::from_count(k + 1) * h, y));
    }
    Ok(EulerTrace { step: h, samples })
}

/// A fixed `n`-point Gauss–Legendre rule on `[−1, 1]`.
///
/// Unlike [`integrate`], the result is a smooth function of the limits, which
/// matters when the integral is itself differenced or squared.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<R> {
    nodes: Vec<R>,
    weights: Vec<R>,
}

impl<R: Real> GaussLegendre<R> {
    /// Nodes by Newton iteration on `Pₙ` from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition(
                "Gauss-Legendre rule needs at least one node".into(),
            ));
        }
        let mut nodes = vec![0.0_f64; n];
        let mut weights = vec![0.0_f64; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pm = if n == 1 { 1.0 } else { p0 };
                dp = nf * (x * pn - pm) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            if n == 1 {
                nodes[0] = 0.0;
                weights[0] = 2.0;
                break;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(GaussLegendre {
            nodes: nodes.into_iter().map(R::lit).collect(),
            weights: weights.into_iter().map(R::lit).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ₐᵇ f` with the fixed rule.
    pub fn integrate<F: Fn(R) -> R>(&self, f: F, a: R, b: R) -> R {
        let half = R::lit(0.5) * (b - a);
        let mid = R::lit(0.5) * (a + b);
        let s = self
            .nodes
            .iter()
            .zip(&self.weights)
            .fold(R::zero(), |acc, (&x, &w)| acc + w * f(mid + half * x));
        s * half
    }

    /// `∫ₐᵇ f` over equal panels no wider than `max_width`.
    pub fn integrate_composite<F: Fn(R) -> R>(&self, f: F, a: R, b: R, max_width: R) -> R {
        let span = (b - a).abs();
        let panels = (span / max_width).ceil().to_usize().unwrap_or(1).max(1);
        let h = (b - a) / R::from_count(panels);
        (0..panels).fold(R::zero(), |acc, i| {
            let lo = a + h * R::from_count(i);
            acc + self.integrate(&f, lo, lo + h)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::erf;
    use std::f64::consts::PI;

    fn tol() -> ToleranceSpec<f64> {
        ToleranceSpec::quadrature()
    }

    #[test]
    fn constant_integrand() {
        let q = integrate(|_| 1.0, 0.0, 1.0, &tol()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-15);
        assert!(q.err_estimate >= 0.0);
        assert!(q.n_evals >= RULE_SIZE);
    }

    #[test]
    fn empty_and_reversed_intervals() {
        assert_eq!(integrate(|x: f64| x, 2.0, 2.0, &tol()).unwrap().value, 0.0);
        assert!(matches!(integrate(|x: f64| x, 2.0, 1.0, &tol()), Err(Error::Domain(_))));
    }

    #[test]
    fn product_form_antiderivative() {
        let q = integrate(|x: f64| (-x * x).exp() * erf(x), 0.0, 1.0, &tol()).unwrap();
        let exact = PI.sqrt() / 4.0 * erf(1.0f64).powi(2);
        assert!((q.value - exact).abs() < 1e-14);
        assert!((exact - 0.3146746444575076).abs() < 1e-15);
    }

    #[test]
    fn composition_form_on_unit_interval() {
        let q = integrate(|x: f64| (-x * x * erf(x)).exp(), 0.0, 1.0, &tol()).unwrap();
        assert!((q.value - 0.816377).abs() < 5e-7);
    }

    #[test]
    fn semi_infinite_gaussians() {
        let q = integrate_semi_infinite(|x: f64| (-x * x).exp(), 0.0, &tol()).unwrap();
        assert!((q.value - PI.sqrt() / 2.0).abs() < 1e-13);
        let q = integrate_semi_infinite(|x: f64| (-x * x).exp() * erf(x), 0.0, &tol()).unwrap();
        assert!((q.value - PI.sqrt() / 4.0).abs() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_carries_estimate() {
        let tight = ToleranceSpec::new(1e-300, 0.0, 100).unwrap();
        match integrate(|x: f64| x.sqrt(), 0.0, 1.0, &tight) {
            Err(Error::AccuracyNotReached { best, .. }) => assert!((best - 2.0 / 3.0).abs() < 1e-4),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn l2_of_identical_functions_is_zero() {
        let d = l2_distance(|x: f64| x.sin(), |x: f64| x.sin(), 0.0, 1.0, &tol()).unwrap();
        assert_eq!(d, 0.0);
        // ‖x − 0‖ on [0, 1] = 1/√3
        let d = l2_distance(|x: f64| x, |_| 0.0, 0.0, 1.0, &tol()).unwrap();
        assert!((d - 1.0 / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn euler_zero_derivative() {
        let tr = euler_scheme(|_| 0.0_f64, 0.0, 0.0, 0.1, 10).unwrap();
        assert_eq!(tr.samples.len(), 11);
        assert!(tr.samples.iter().all(|&(_, y)| y == 0.0));
        assert_eq!(tr.samples[0], (0.0, 0.0));
    }

    #[test]
    fn euler_reports_non_finite_slope() {
        let r = euler_scheme(|x: f64| if x > 0.25 { f64::NAN } else { 1.0 }, 0.0, 0.0, 0.1, 10);
        assert!(matches!(r, Err(Error::Propagation { step: 3, .. })));
    }

    #[test]
    fn single_precision_quadrature() {
        let q = integrate(|x: f32| (-x * x).exp(), 0.0, 1.0, &ToleranceSpec::quadrature()).unwrap();
        assert!((q.value - 0.746_824_1).abs() < 1e-6);
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in [1usize, 2, 5, 20, 30] {
            let rule = GaussLegendre::<f64>::new(n).unwrap();
            let wsum = rule.integrate(|_| 1.0, -1.0, 1.0);
            assert!((wsum - 2.0).abs() < 1e-14, "n={n}");
            let p = 2 * n as i32 - 1;
            let got = rule.integrate(|x: f64| x.powi(p), 0.0, 1.0);
            assert!((got - 1.0 / (p as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
        let rule = GaussLegendre::<f64>::new(30).unwrap();
        let v = rule.integrate_composite(|x| (-x * x).exp() * erf(x), 0.0, 2.0, 0.5);
        assert!((v - PI.sqrt() / 4.0 * erf(2.0_f64).powi(2)).abs() < 1e-15);
    }
}

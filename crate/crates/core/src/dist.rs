//! The two-parameter family with density `∝ exp(−x²(λ + μ·erf x))` on `[0, ∞)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::erf;
use crate::quadrature::{integrate, integrate_semi_infinite};
use crate::tolerance::ToleranceSpec;

fn tol() -> ToleranceSpec<f64> {
    ToleranceSpec::quadrature()
}

/// `(λ, μ)` with the normalizer `c = ∫₀^∞ exp(−ξ²(λ + μ·erf ξ)) dξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TDistParams {
    pub lambda: f64,
    pub mu: f64,
    pub c: f64,
}

/// Requires `λ > 0` and `λ + μ > 0`, so the density decays like `exp(−(λ + μ)x²)`.
pub fn make_params(lambda: f64, mu: f64) -> Result<TDistParams> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    if !(mu.is_finite() && lambda + mu > 0.0) {
        return Err(Error::Domain(format!(
            "lambda + mu must be positive for the density to decay, got {lambda} + {mu}"
        )));
    }
    let c = integrate_semi_infinite(|x| kernel(lambda, mu, x), 0.0, &tol())?.value;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Range(format!("normalizer did not converge (c = {c})")));
    }
    Ok(TDistParams { lambda, mu, c })
}

#[inline]
fn kernel(lambda: f64, mu: f64, x: f64) -> f64 {
    (-x * x * (lambda + mu * erf(x))).exp()
}

/// Point beyond which [`TDistParams::cdf`] works from the upper tail.
pub const UPPER_TAIL_SPLIT: f64 = 2.0;

fn check_x(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        Err(Error::Domain(format!("distribution is supported on x >= 0, got {x}")))
    } else {
        Ok(())
    }
}

impl TDistParams {
    /// `exp(−x²(λ + μ·erf x))`, the density before normalization.
    #[inline]
    pub fn kernel(&self, x: f64) -> f64 {
        kernel(self.lambda, self.mu, x)
    }

    /// `F(x) = ∫₀ˣ kernel`.
    pub fn unnormalized_cdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        if x.is_infinite() {
            return Ok(self.c);
        }
        Ok(integrate(|t| self.kernel(t), 0.0, x, &tol())?.value)
    }

    /// Past [`UPPER_TAIL_SPLIT`] the complement is integrated instead, so the
    /// result stays monotone where increments approach quadrature noise.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        if x > UPPER_TAIL_SPLIT && x.is_finite() {
            let tail = integrate_semi_infinite(|t| self.kernel(t), x, &tol())?.value;
            return Ok((1.0 - tail / self.c).clamp(0.0, 1.0));
        }
        Ok((self.unnormalized_cdf(x)? / self.c).clamp(0.0, 1.0))
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(self.kernel(x) / self.c)
    }

    /// `x` with `cdf(x) = q`: a bracket grown from `[0, 1]`, then Newton steps
    /// that fall back to bisection when they leave the bracket.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {q}")));
        }
        let target = q * self.c;
        let (mut lo, mut f_lo) = (0.0, 0.0);
        let mut hi = 1.0;
        let mut f_hi = self.unnormalized_cdf(hi)?;
        while f_hi < target {
            lo = hi;
            f_lo = f_hi;
            hi *= 2.0;
            if hi > 1e3 {
                return Err(Error::Range(format!("quantile {q} beyond the search range")));
            }
            f_hi = f_lo + integrate(|t| self.kernel(t), lo, hi, &tol())?.value;
        }
        // Walk from the closer end, integrating increments only.
        let (mut x, mut fx) = if target - f_lo < f_hi - target {
            (lo, f_lo)
        } else {
            (hi, f_hi)
        };
        for _ in 0..100 {
            let g = fx - target;
            if g.abs() <= 1e-13 * self.c {
                return Ok(x);
            }
            if g < 0.0 {
                lo = x;
                f_lo = fx;
            } else {
                hi = x;
                f_hi = fx;
            }
            let newton = x - g / self.kernel(x);
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (hi - lo) <= 4.0 * f64::EPSILON * hi {
                return Ok(x);
            }
            let (base, f_base) = if (next - lo).abs() < (hi - next).abs() {
                (lo, f_lo)
            } else {
                (hi, f_hi)
            };
            let inc = if next >= base {
                integrate(|t| self.kernel(t), base, next, &tol())?.value
            } else {
                -integrate(|t| self.kernel(t), next, base, &tol())?.value
            };
            x = next;
            fx = f_base + inc;
        }
        Err(Error::Convergence {
            what: "quantile",
            terms: 100,
        })
    }

    /// `n` inverse-transform draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::Precondition("sample size must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let mut u: f64 = rng.random();
                while u == 0.0 {
                    u = rng.random();
                }
                self.quantile(u)
            })
            .collect()
    }

    /// `∫₀^∞ x·pdf(x) dx`.
    pub fn mean(&self) -> Result<f64> {
        Ok(integrate_semi_infinite(|x| x * self.kernel(x), 0.0, &tol())?.value / self.c)
    }

    /// `∫₀^∞ x²·pdf(x) dx − mean²`.
    pub fn variance(&self) -> Result<f64> {
        let m2 = integrate_semi_infinite(|x| x * x * self.kernel(x), 0.0, &tol())?.value / self.c;
        let m = self.mean()?;
        Ok(m2 - m * m)
    }

    /// Defect of `√π·x·y″ = 2e^{−x²}·y′·(√π·e^{x²}·ln y′ − μx³)` for `y = F`
    /// (unnormalized), with `y′` exact and `y″` by central differences of step `h`.
    ///
    /// `ln y′` is not scale invariant, so the normalized cdf does not satisfy it.
    pub fn ode_residual(&self, x: f64, h: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) || !(h > 0.0) {
            return Err(Error::Domain(format!(
                "ODE check needs x > 0 and h > 0, got x = {x}, h = {h}"
            )));
        }
        let pi = std::f64::consts::PI;
        let y1 = self.kernel(x);
        let y2 = (self.kernel(x + h) - self.kernel(x - h)) / (2.0 * h);
        let lhs = pi.sqrt() * x * y2;
        let rhs = 2.0 * (-x * x).exp() * y1 * (pi.sqrt() * (x * x).exp() * y1.ln() - self.mu * x.powi(3));
        Ok(lhs - rhs)
    }
}

/// Defect of `x·y″ = 2y′·ln y′` for `y = erf(√λ·x)`, `y″` by central differences.
///
/// Analytically the defect is `−2y′·ln(2√λ/√π)`, zero only at `λ = π/4`.
pub fn reduced_ode_residual(lambda: f64, x: f64, h: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(x > 0.0) || !(h > 0.0) {
        return Err(Error::Domain("reduced ODE check needs lambda, x, h > 0".into()));
    }
    let dy = |t: f64| 2.0 * lambda.sqrt() / std::f64::consts::PI.sqrt() * (-lambda * t * t).exp();
    let y1 = dy(x);
    let y2 = (dy(x + h) - dy(x - h)) / (2.0 * h);
    Ok(x * y2 - 2.0 * y1 * y1.ln())
}

/// Which derivative the fit matches at the fit point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeMatch {
    /// `exp(−x₀²(λ + μ·erf x₀)) = target′(x₀)`: the unnormalized density.
    #[default]
    Unnormalized,
    /// `pdf(x₀) = target′(x₀)`: the normalized density.
    Normalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub derivative: DerivativeMatch,
    /// Hold `μ` at its initial value and solve only the value condition.
    pub freeze_mu: bool,
    pub max_iter: usize,
    pub residual_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            derivative: DerivativeMatch::Unnormalized,
            freeze_mu: false,
            max_iter: 60,
            residual_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub lambda: f64,
    pub mu: f64,
    pub c: f64,
    /// Euclidean norm of the defects in the matching conditions.
    pub residual: f64,
    pub iterations: usize,
    /// `(λ, μ, residual)` per iterate.
    pub trace: Vec<(f64, f64, f64)>,
}

impl FitResult {
    pub fn params(&self) -> TDistParams {
        TDistParams {
            lambda: self.lambda,
            mu: self.mu,
            c: self.c,
        }
    }
}

/// Persisted form of a fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub lambda: f64,
    pub mu: f64,
    pub c: f64,
    pub target: String,
    pub fit_point: f64,
    pub residual: f64,
}

impl FitRecord {
    pub fn new(fit: &FitResult, target: impl Into<String>, fit_point: f64) -> Self {
        FitRecord {
            lambda: fit.lambda,
            mu: fit.mu,
            c: fit.c,
            target: target.into(),
            fit_point,
            residual: fit.residual,
        }
    }
}

fn defects<F, G>(target: &F, target_deriv: &G, x0: f64, p: &TDistParams, opts: &FitOptions) -> Result<[f64; 2]>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let value = p.cdf(x0)? - target(x0);
    let slope = match opts.derivative {
        DerivativeMatch::Unnormalized => p.kernel(x0),
        DerivativeMatch::Normalized => p.pdf(x0)?,
    };
    Ok([value, slope - target_deriv(x0)])
}

fn feasible(lambda: f64, mu: f64) -> bool {
    lambda > 0.0 && lambda + mu > 0.0
}

/// Match `cdf(x₀) = target(x₀)` and the chosen derivative condition by damped
/// Newton with a forward-difference Jacobian.
pub fn fit_to_target<F, G>(
    target: F,
    target_deriv: G,
    x0: f64,
    init: (f64, f64),
    opts: &FitOptions,
) -> Result<FitResult>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(x0 > 0.0 && x0.is_finite()) {
        return Err(Error::Domain(format!("fit point must be positive, got {x0}")));
    }
    let (mut lambda, mut mu) = init;
    if !feasible(lambda, mu) {
        return Err(Error::Domain(format!("initial guess ({lambda}, {mu}) is infeasible")));
    }
    let norm = |r: &[f64; 2], frozen: bool| if frozen { r[0].abs() } else { r[0].hypot(r[1]) };
    let fail = |reason: String, lambda: f64, mu: f64, residual: f64, trace: Vec<(f64, f64, f64)>| Error::Fit {
        reason,
        lambda,
        mu,
        residual,
        trace,
    };

    let mut p = make_params(lambda, mu)?;
    let mut r = defects(&target, &target_deriv, x0, &p, opts)?;
    let mut res = norm(&r, opts.freeze_mu);
    let mut trace = vec![(lambda, mu, res)];

    for it in 0..opts.max_iter {
        if res <= opts.residual_tol {
            return Ok(FitResult {
                lambda,
                mu,
                c: p.c,
                residual: res,
                iterations: it,
                trace,
            });
        }
        let hl = 1e-6 * (1.0 + lambda.abs());
        let rl = defects(&target, &target_deriv, x0, &make_params(lambda + hl, mu)?, opts)?;
        let (dl, dm) = if opts.freeze_mu {
            let j = (rl[0] - r[0]) / hl;
            if j == 0.0 || !j.is_finite() {
                return Err(fail("zero derivative".into(), lambda, mu, res, trace));
            }
            (-r[0] / j, 0.0)
        } else {
            let hm = 1e-6 * (1.0 + mu.abs());
            let rm = defects(&target, &target_deriv, x0, &make_params(lambda, mu + hm)?, opts)?;
            let (a, b) = ((rl[0] - r[0]) / hl, (rm[0] - r[0]) / hm);
            let (c, d) = ((rl[1] - r[1]) / hl, (rm[1] - r[1]) / hm);
            let det = a * d - b * c;
            if det.abs() < 1e-300 || !det.is_finite() {
                return Err(fail("singular Jacobian".into(), lambda, mu, res, trace));
            }
            (-(d * r[0] - b * r[1]) / det, -(a * r[1] - c * r[0]) / det)
        };

        let mut step = 1.0;
        loop {
            let (nl, nm) = (lambda + step * dl, mu + step * dm);
            if feasible(nl, nm) {
                let np = make_params(nl, nm)?;
                let nr = defects(&target, &target_deriv, x0, &np, opts)?;
                let nres = norm(&nr, opts.freeze_mu);
                if nres < res || nres <= opts.residual_tol {
                    lambda = nl;
                    mu = nm;
                    p = np;
                    r = nr;
                    res = nres;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-10 {
                if res <= 1e3 * opts.residual_tol {
                    // Quadrature noise floor: accept the iterate we have.
                    return Ok(FitResult {
                        lambda,
                        mu,
                        c: p.c,
                        residual: res,
                        iterations: it,
                        trace,
                    });
                }
                return Err(fail("line search stalled".into(), lambda, mu, res, trace));
            }
        }
        trace.push((lambda, mu, res));
    }
    if res <= opts.residual_tol {
        return Ok(FitResult {
            lambda,
            mu,
            c: p.c,
            residual: res,
            iterations: opts.max_iter,
            trace,
        });
    }
    Err(fail(
        format!("no convergence in {} iterations", opts.max_iter),
        lambda,
        mu,
        res,
        trace,
    ))
}

/// `erf(x/(√2a)) − √(2/π)·(x/a)·exp(−x²/(2a²))`.
pub fn maxwell_cdf(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("Maxwell scale must be positive, got {a}")));
    }
    check_x(x)?;
    if x.is_infinite() {
        return Ok(1.0);
    }
    let s = x / a;
    Ok(erf(s / std::f64::consts::SQRT_2) - (2.0 / std::f64::consts::PI).sqrt() * s * (-0.5 * s * s).exp())
}

/// `√(2/π)·x²·exp(−x²/(2a²))/a³`.
pub fn maxwell_pdf(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("Maxwell scale must be positive, got {a}")));
    }
    check_x(x)?;
    Ok((2.0 / std::f64::consts::PI).sqrt() * x * x * (-0.5 * x * x / (a * a)).exp() / a.powi(3))
}

/// Maxwell–Boltzmann cdf with `erf(x/(√2a))` replaced by a fitted `cdf_{λ,μ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxwellApprox {
    pub a: f64,
    pub fit_point: f64,
    pub params: TDistParams,
    pub residual: f64,
}

/// Largest scale `a` accepted by the Maxwell–Boltzmann approximation.
pub const MAXWELL_MAX_SCALE: f64 = 1.0;

impl MaxwellApprox {
    /// Fit `cdf_{λ,μ}` to `erf(x/(√2a))` at `fit_point`, starting from `λ = μ = 1/(4a²)`.
    pub fn fit(a: f64, fit_point: f64, derivative: DerivativeMatch) -> Result<Self> {
        if !(a > 0.0 && a <= MAXWELL_MAX_SCALE) {
            return Err(Error::Domain(format!(
                "Maxwell approximation needs 0 < a <= 1, got {a}"
            )));
        }
        let k = 1.0 / (std::f64::consts::SQRT_2 * a);
        let target = |x: f64| erf(k * x);
        let target_deriv = |x: f64| 2.0 / std::f64::consts::PI.sqrt() * k * (-(k * x).powi(2)).exp();
        let opts = FitOptions {
            derivative,
            ..FitOptions::default()
        };
        let init = (0.5 * k * k, 0.5 * k * k);
        let fit = fit_to_target(target, target_deriv, fit_point, init, &opts)?;
        Ok(MaxwellApprox {
            a,
            fit_point,
            params: fit.params(),
            residual: fit.residual,
        })
    }

    /// `λ = 1/(2a²)`, `μ = 0`, which reproduces the exact cdf.
    pub fn degenerate(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("Maxwell scale must be positive, got {a}")));
        }
        Ok(MaxwellApprox {
            a,
            fit_point: f64::NAN,
            params: make_params(1.0 / (2.0 * a * a), 0.0)?,
            residual: 0.0,
        })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let s = x / self.a;
        Ok(self.params.cdf(x)? - (2.0 / std::f64::consts::PI).sqrt() * s * (-0.5 * s * s).exp())
    }

    /// `max |approx − exact|` over `n + 1` equally spaced points of `[0, x_max]`.
    pub fn sup_gap(&self, x_max: f64, n: usize) -> Result<f64> {
        (0..=n).try_fold(0.0_f64, |m, i| {
            let x = x_max * i as f64 / n as f64;
            Ok(m.max((self.eval(x)? - maxwell_cdf(self.a, x)?).abs()))
        })
    }
}

pub fn maxwell_approx(a: f64, x: f64, fit_point: f64) -> Result<f64> {
    MaxwellApprox::fit(a, fit_point, DerivativeMatch::default())?.eval(x)
}

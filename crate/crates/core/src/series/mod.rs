//! Exact Maclaurin coefficients of T and the series machinery behind them.
//!
//! Every coefficient of `T(t) = ∫₀ᵗ exp(−x²·erf x) dx` is a finite sum of
//! rational multiples of half-integer powers of π, so the series is built in
//! that ring exactly and only rounded at evaluation time.

mod bell;
mod pihalf;
mod power_series;

pub use bell::{bell_partial, bell_table, BellScalar};
pub use pihalf::{eval_pihalf, PiHalfRational, TermRecord, MAX_EVAL_EXPONENT};
pub use power_series::PowerSeries;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernels;
use crate::scalar::Real;

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::from(1), |acc, k| acc * k)
}

/// Maclaurin series of erf to order `n`: `z^{2k+1}` carries `2(−1)ᵏ/(k!(2k+1))·π^{−1/2}`.
pub fn erf_series(n: usize) -> PowerSeries {
    let mut coeffs = vec![PiHalfRational::zero(); n + 1];
    for (p, c) in coeffs.iter_mut().enumerate() {
        if p % 2 == 1 {
            let k = (p - 1) / 2;
            let sign = if k % 2 == 0 { 2 } else { -2 };
            let den = factorial(k) * BigInt::from(2 * k + 1);
            *c = PiHalfRational::term(-1, BigRational::new(BigInt::from(sign), den));
        }
    }
    PowerSeries::from_coeffs(coeffs)
}

/// Maclaurin series of `−x²·erf(x)` to order `n`.
///
/// Only odd powers `j ≥ 3` are non-zero, with coefficient
/// `2(−1)^{(j−1)/2} / ((j−2)·((j−3)/2)!·√π)`.
pub fn inner_series(n: usize) -> PowerSeries {
    let e = erf_series(n.saturating_sub(2));
    let mut coeffs = vec![PiHalfRational::zero(); n + 1];
    for (j, c) in coeffs.iter_mut().enumerate().skip(2) {
        *c = -e.coeff(j - 2);
    }
    PowerSeries::from_coeffs(coeffs)
}

/// `exp(f)` truncated at order `n` (at most `f.order()`).
pub fn exp_compose(f: &PowerSeries, n: usize) -> Result<PowerSeries> {
    f.truncate(n).exp()
}

/// Coefficients `c_0 … c_n` of T, from `c_p = d_{p−1}/p` where `d` is the
/// series of `exp(−x²·erf x)`.
pub fn t_series(n: usize) -> Result<PowerSeries> {
    if n == 0 {
        return Err(Error::Precondition("T series needs order >= 1".into()));
    }
    let d = exp_compose(&inner_series(n - 1), n - 1)?;
    Ok(d.integral())
}

/// The same coefficients by Faà di Bruno: with `f = Σ (a_j/j!) x^j` and
/// `g = exp`, `n!·dₙ = Σ_k B_{n,k}(a₁, …, a_{n−k+1})`.
pub fn t_series_via_bell(n: usize) -> Result<PowerSeries> {
    if n == 0 {
        return Err(Error::Precondition("T series needs order >= 1".into()));
    }
    let m = n - 1;
    let inner = inner_series(m);
    let args: Vec<PiHalfRational> = (1..=m)
        .map(|j| inner.coeff(j).scale(&BigRational::from_integer(factorial(j))))
        .collect();
    let table = bell_table(m, &args)?;
    let mut d = Vec::with_capacity(m + 1);
    d.push(PiHalfRational::from(1));
    for (k_row, row) in table.iter().enumerate().skip(1) {
        let mut sum = PiHalfRational::zero();
        for b in &row[1..=k_row] {
            sum += b;
        }
        d.push(sum.scale(&BigRational::new(BigInt::from(1), factorial(k_row))));
    }
    Ok(PowerSeries::from_coeffs(d).integral())
}

/// `Σ_{p ≤ n} c_p tᵖ` by Horner's rule.
pub fn partial_sum<R: Real>(ps: &PowerSeries, t: R, n: usize) -> Result<R> {
    if n > ps.order() {
        return Err(Error::Precondition(format!(
            "partial sum order {n} exceeds series order {}",
            ps.order()
        )));
    }
    let mut acc = R::zero();
    for p in (0..=n).rev() {
        acc = acc * t + ps.coeff(p).eval::<R>()?;
    }
    Ok(acc)
}

/// Taylor coefficients of erf about `a`, for powers `(x − a)⁰ … (x − a)ⁿ`:
/// `erf(a)` then `(2/√π)·e^{−a²}·(−1)^{k−1}·H_{k−1}(a)/k!`.
pub fn erf_taylor_at<R: Real>(a: R, n: usize) -> Result<Vec<R>> {
    if n > kernels::HERMITE_MAX_DEGREE {
        return Err(Error::range(format!(
            "erf Taylor order {n} exceeds {}",
            kernels::HERMITE_MAX_DEGREE
        )));
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(kernels::erf(a));
    let scale = R::FRAC_2_SQRT_PI() * (-a * a).exp();
    // u_k = H_k(a)/k!, u_{k+1} = (2a·u_k − 2·u_{k−1})/(k+1)
    let two = R::lit(2.0);
    let mut u_prev = R::zero();
    let mut u = R::one();
    for k in 1..=n {
        let sign = if (k - 1) % 2 == 0 { R::one() } else { -R::one() };
        out.push(scale * sign * u / R::from_count(k));
        let next = (two * a * u - two * u_prev) / R::from_count(k);
        u_prev = u;
        u = next;
    }
    Ok(out)
}

/// Evaluate a list of Taylor coefficients about `a` at `x`.
pub fn eval_taylor<R: Real>(coeffs: &[R], a: R, x: R) -> R {
    let h = x - a;
    coeffs.iter().rev().fold(R::zero(), |acc, &c| acc * h + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_coefficients() {
        let s = erf_series(12);
        assert_eq!(s.coeff(1), &PiHalfRational::ratio(-1, 2, 1));
        assert_eq!(s.coeff(9), &PiHalfRational::ratio(-1, 1, 108));
        for p in (0..=12).step_by(2) {
            assert!(s.coeff(p).is_zero());
        }
    }

    #[test]
    fn inner_coefficients() {
        let f = inner_series(9);
        assert_eq!(f.coeff(3), &PiHalfRational::ratio(-1, -2, 1));
        assert!(f.coeff(4).is_zero());
        assert_eq!(f.coeff(5), &PiHalfRational::ratio(-1, 2, 3));
        // closed form 2(−1)^{(j−1)/2} / ((j−2)((j−3)/2)!√π) for odd j
        for j in (3..=9).step_by(2) {
            let sign: i64 = if ((j - 1) / 2) % 2 == 0 { 2 } else { -2 };
            let den = (j as i64 - 2) * (1..=((j as i64 - 3) / 2)).product::<i64>();
            assert_eq!(f.coeff(j), &PiHalfRational::ratio(-1, sign, den));
        }
    }

    #[test]
    fn exp_compose_low_orders() {
        let e = exp_compose(&inner_series(8), 8).unwrap();
        assert_eq!(e.coeff(3), &PiHalfRational::ratio(-1, -2, 1));
        // f²/2 contributes (−2/√π)²/2 = 2/π at x⁶; integrating gives 2/(7π) at t⁷
        assert_eq!(e.coeff(6), &PiHalfRational::ratio(-2, 2, 1));
    }

    #[test]
    fn t_series_listing() {
        let c = t_series(10).unwrap();
        assert_eq!(c.coeff(1), &PiHalfRational::from(1));
        assert!(c.coeff(2).is_zero() && c.coeff(3).is_zero() && c.coeff(5).is_zero());
        assert_eq!(c.coeff(4), &PiHalfRational::ratio(-1, -1, 2));
        assert_eq!(c.coeff(6), &PiHalfRational::ratio(-1, 1, 9));
        assert_eq!(c.coeff(7), &PiHalfRational::ratio(-2, 2, 7));
        assert_eq!(c.coeff(8), &PiHalfRational::ratio(-1, -1, 40));
        assert_eq!(c.coeff(9), &PiHalfRational::ratio(-2, -4, 27));
        let c10 = &PiHalfRational::ratio(-1, 1, 210) - &PiHalfRational::ratio(-3, 2, 15);
        assert_eq!(c.coeff(10), &c10);
    }

    #[test]
    fn bell_route_agrees() {
        assert_eq!(t_series(12).unwrap(), t_series_via_bell(12).unwrap());
    }

    #[test]
    fn truncation_consistency() {
        let long = t_series(18).unwrap();
        assert_eq!(long.truncate(9), t_series(9).unwrap());
    }

    #[test]
    fn partial_sums() {
        let c = t_series(4).unwrap();
        assert_eq!(partial_sum(&c, 0.3_f64, 1).unwrap(), 0.3);
        assert!(partial_sum(&c, 0.3_f64, 5).is_err());
    }

    #[test]
    fn erf_taylor_coefficients() {
        let c0 = erf_taylor_at(0.0_f64, 3).unwrap();
        assert!((c0[1] - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-16);
        let c1 = erf_taylor_at(1.0_f64, 2).unwrap();
        let expect = -(2.0 / std::f64::consts::PI.sqrt()) * (-1.0f64).exp();
        assert!((c1[2] - expect).abs() < 1e-15);
        let c = erf_taylor_at(1.0_f64, 30).unwrap();
        assert!((eval_taylor(&c, 1.0, 1.4) - 0.9522851197626488).abs() < 1e-10);
    }

    #[test]
    fn erf_taylor_at_zero_matches_exact_series() {
        let n = 20;
        let num = erf_taylor_at(0.0_f64, n).unwrap();
        let exact = erf_series(n);
        for (p, v) in num.iter().enumerate() {
            let e: f64 = exact.coeff(p).eval().unwrap();
            assert!((v - e).abs() <= 1e-15, "p = {p}");
        }
    }
}

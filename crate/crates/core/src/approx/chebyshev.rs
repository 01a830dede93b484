use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Degree limit for conversions to and from the monomial basis.
pub const MONOMIAL_MAX_DEGREE: usize = 30;

/// A Chebyshev expansion on `[lo, hi]`:
/// `Qₙ(x) = c₀/2 + Σ_{j≥1} c_j·T_j(u)`, `u = (lo + hi − 2x)/(lo − hi)`.
///
/// The map sends `lo ↦ −1` and `hi ↦ +1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevApproximant<R> {
    #[serde(rename = "a")]
    pub lo: R,
    #[serde(rename = "b")]
    pub hi: R,
    pub coeffs: Vec<R>,
}

/// An evaluation, flagged when `x` lies outside the fitted interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<R> {
    pub value: R,
    pub extrapolated: bool,
}

impl<R: Real> ChebyshevApproximant<R> {
    pub fn new(lo: R, hi: R, coeffs: Vec<R>) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::domain(format!(
                "Chebyshev interval needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if coeffs.is_empty() {
            return Err(Error::domain("Chebyshev approximant needs at least c₀"));
        }
        Ok(ChebyshevApproximant { lo, hi, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Image of `x` on `[−1, 1]`.
    #[inline]
    pub fn map_to_unit(&self, x: R) -> R {
        (self.lo + self.hi - R::lit(2.0) * x) / (self.lo - self.hi)
    }

    /// Point of `[lo, hi]` mapped to `u`.
    #[inline]
    pub fn map_from_unit(&self, u: R) -> R {
        let half = R::lit(0.5);
        half * (self.lo + self.hi) + half * (self.hi - self.lo) * u
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, x: R) -> R {
        let u = self.map_to_unit(x);
        let two_u = R::lit(2.0) * u;
        let mut b1 = R::zero();
        let mut b2 = R::zero();
        for &c in self.coeffs[1..].iter().rev() {
            let b0 = two_u * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        u * b1 - b2 + R::lit(0.5) * self.coeffs[0]
    }

    pub fn eval_checked(&self, x: R) -> Evaluation<R> {
        Evaluation {
            value: self.eval(x),
            extrapolated: x < self.lo || x > self.hi,
        }
    }

    /// Coefficients in powers of the original variable `x`, ascending.
    ///
    /// The basis change and the affine substitution are done in exact rational
    /// arithmetic on the binary values of the stored floats; only the final
    /// coefficients are rounded.
    pub fn to_monomial(&self) -> Result<Vec<R>> {
        if self.degree() > MONOMIAL_MAX_DEGREE {
            return Err(Error::range(format!(
                "monomial conversion limited to degree {MONOMIAL_MAX_DEGREE}, got {}",
                self.degree()
            )));
        }
        let mut cheb: Vec<BigRational> = self.coeffs.iter().map(|&c| exact(c)).collect::<Result<_>>()?;
        cheb[0] = &cheb[0] / BigRational::from_integer(BigInt::from(2));
        let in_u = chebyshev_to_power(&cheb);
        let (lo, hi) = (exact(self.lo)?, exact(self.hi)?);
        // u = α + βx
        let alpha = (&lo + &hi) / (&lo - &hi);
        let beta = BigRational::from_integer(BigInt::from(-2)) / (&lo - &hi);
        let in_x = compose_affine(&in_u, &alpha, &beta);
        in_x.iter().map(round).collect()
    }

    /// The exact Chebyshev re-expansion of a polynomial given by ascending
    /// monomial coefficients in `x`, on `[lo, hi]`.
    pub fn from_monomial(lo: R, hi: R, monomial: &[R]) -> Result<Self> {
        if monomial.is_empty() {
            return Err(Error::domain("empty monomial coefficient list"));
        }
        if monomial.len() - 1 > MONOMIAL_MAX_DEGREE {
            return Err(Error::range(format!(
                "monomial conversion limited to degree {MONOMIAL_MAX_DEGREE}"
            )));
        }
        if !(lo < hi) {
            return Err(Error::domain(format!(
                "Chebyshev interval needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        let p: Vec<BigRational> = monomial.iter().map(|&c| exact(c)).collect::<Result<_>>()?;
        let (l, h) = (exact(lo)?, exact(hi)?);
        let two = BigRational::from_integer(BigInt::from(2));
        // x = (lo + hi)/2 + (hi − lo)/2 · u
        let alpha = (&l + &h) / &two;
        let beta = (&h - &l) / &two;
        let in_u = compose_affine(&p, &alpha, &beta);
        let mut cheb = power_to_chebyshev(&in_u);
        cheb[0] = &cheb[0] * &two;
        let coeffs = cheb.iter().map(round).collect::<Result<_>>()?;
        Self::new(lo, hi, coeffs)
    }
}

fn exact<R: Real>(x: R) -> Result<BigRational> {
    BigRational::from_float(x.as_f64()).ok_or_else(|| Error::domain(format!("non-finite coefficient {x}")))
}

fn round<R: Real>(q: &BigRational) -> Result<R> {
    q.to_f64()
        .map(R::lit)
        .ok_or_else(|| Error::range("coefficient outside double range"))
}

/// Integer coefficient table of T_0..T_n in the power basis, `[j][k]` = coeff of uᵏ in T_j.
fn chebyshev_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); n + 1]; n + 1];
    t[0][0] = BigInt::from(1);
    if n >= 1 {
        t[1][1] = BigInt::from(1);
    }
    for j in 2..=n {
        for k in 0..=j {
            let mut v = -t[j - 2][k].clone();
            if k >= 1 {
                v += &t[j - 1][k - 1] * 2;
            }
            t[j][k] = v;
        }
    }
    t
}

fn chebyshev_to_power(c: &[BigRational]) -> Vec<BigRational> {
    let n = c.len() - 1;
    let table = chebyshev_table(n);
    let mut out = vec![BigRational::zero(); n + 1];
    for (j, cj) in c.iter().enumerate() {
        for k in 0..=j {
            if !table[j][k].is_zero() {
                out[k] += cj * BigRational::from_integer(table[j][k].clone());
            }
        }
    }
    out
}

// uᵏ = 2^{1−k} Σ_{i ≤ k/2} C(k, i)·T_{k−2i}  (halving the T₀ term)
fn power_to_chebyshev(p: &[BigRational]) -> Vec<BigRational> {
    let n = p.len() - 1;
    let mut out = vec![BigRational::zero(); n + 1];
    for (k, pk) in p.iter().enumerate() {
        if pk.is_zero() {
            continue;
        }
        if k == 0 {
            out[0] += pk;
            continue;
        }
        let scale = BigRational::new(BigInt::from(1), BigInt::from(2).pow(k as u32 - 1));
        let mut binom = BigInt::from(1);
        for i in 0..=k / 2 {
            let mut w = BigRational::from_integer(binom.clone()) * &scale;
            if 2 * i == k {
                w /= BigRational::from_integer(BigInt::from(2));
            }
            out[k - 2 * i] += pk * &w;
            binom = binom * BigInt::from(k - i) / BigInt::from(i + 1);
        }
    }
    out
}

/// Coefficients of `p(α + βx)` given those of `p(u)`.
fn compose_affine(p: &[BigRational], alpha: &BigRational, beta: &BigRational) -> Vec<BigRational> {
    let n = p.len() - 1;
    let mut out = vec![BigRational::zero(); n + 1];
    // Horner: acc ← acc·(α + βx) + p_k
    for pk in p.iter().rev() {
        let mut next = vec![BigRational::zero(); n + 1];
        for (i, a) in out.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            next[i] += a * alpha;
            if i < n {
                next[i + 1] += a * beta;
            }
        }
        next[0] += pk;
        out = next;
    }
    out
}

/// Chebyshev–Gauss projection of `f` onto degree `n` on `[lo, hi]`:
/// `c_j ≈ (2/m)·Σᵢ f(x(cos θᵢ))·cos(jθᵢ)`, `θᵢ = π(i + 1/2)/m`.
pub fn cheb_fit<R, F>(f: F, lo: R, hi: R, n: usize, m_nodes: usize) -> Result<ChebyshevApproximant<R>>
where
    R: Real,
    F: Fn(R) -> Result<R>,
{
    if m_nodes <= n {
        return Err(Error::Precondition(format!(
            "Chebyshev fit needs more nodes ({m_nodes}) than the degree ({n})"
        )));
    }
    let shell = ChebyshevApproximant::new(lo, hi, vec![R::zero()])?;
    let m = R::from_count(m_nodes);
    let thetas: Vec<R> = (0..m_nodes)
        .map(|i| R::PI() * (R::from_count(i) + R::lit(0.5)) / m)
        .collect();
    let values: Vec<R> = thetas
        .iter()
        .map(|&th| f(shell.map_from_unit(th.cos())))
        .collect::<Result<_>>()?;
    let coeffs = (0..=n)
        .map(|j| {
            let jr = R::from_count(j);
            let s = thetas
                .iter()
                .zip(&values)
                .fold(R::zero(), |acc, (&th, &v)| acc + v * (jr * th).cos());
            R::lit(2.0) * s / m
        })
        .collect();
    ChebyshevApproximant::new(lo, hi, coeffs)
}

pub fn cheb_eval<R: Real>(p: &ChebyshevApproximant<R>, x: R) -> Evaluation<R> {
    p.eval_checked(x)
}

pub fn cheb_to_monomial<R: Real>(p: &ChebyshevApproximant<R>) -> Result<Vec<R>> {
    p.to_monomial()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cheb_t(j: usize, u: f64) -> f64 {
        (j as f64 * u.clamp(-1.0, 1.0).acos()).cos()
    }

    #[test]
    fn map_endpoints() {
        let p = ChebyshevApproximant::new(0.0_f64, 1.5, vec![1.0]).unwrap();
        assert_eq!(p.map_to_unit(0.0), -1.0);
        assert_eq!(p.map_to_unit(1.5), 1.0);
    }

    #[test]
    fn constant_projection() {
        let p = cheb_fit(|_| Ok(1.0_f64), -1.0, 1.0, 3, 16).unwrap();
        assert!((p.coeffs[0] - 2.0).abs() < 1e-14);
        assert!(p.coeffs[1..].iter().all(|c| c.abs() < 1e-14));
        assert!((p.eval(0.3) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthogonality() {
        for k in 0..=8 {
            let p = cheb_fit(|u| Ok(cheb_t(k, u)), -1.0_f64, 1.0, 8, 64).unwrap();
            for (j, c) in p.coeffs.iter().enumerate() {
                let want = match (j == k, k) {
                    (true, 0) => 2.0,
                    (true, _) => 1.0,
                    _ => 0.0,
                };
                assert!((c - want).abs() < 1e-13, "k={k} j={j} c={c}");
            }
        }
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        let p = ChebyshevApproximant::new(2.0_f64, 5.0, vec![0.3, -1.2, 0.5, 0.25, -0.125]).unwrap();
        for x in [2.0, 2.7, 3.9, 5.0] {
            let u = p.map_to_unit(x);
            let direct = 0.15 + (1..5).map(|j| p.coeffs[j] * cheb_t(j, u)).sum::<f64>();
            assert!((p.eval(x) - direct).abs() < 1e-14);
        }
        assert!(p.eval_checked(5.5).extrapolated);
        assert!(!p.eval_checked(5.0).extrapolated);
    }

    #[test]
    fn monomial_round_trip() {
        let p = ChebyshevApproximant::new(1.5_f64, 3.0, vec![0.4, 0.2, -0.1, 0.05, 0.01]).unwrap();
        let mono = p.to_monomial().unwrap();
        for x in [1.5, 2.0, 2.9] {
            let direct: f64 = mono.iter().rev().fold(0.0, |a, &c| a * x + c);
            assert!((direct - p.eval(x)).abs() < 1e-12);
        }
        let back = ChebyshevApproximant::from_monomial(1.5, 3.0, &mono).unwrap();
        for (a, b) in back.coeffs.iter().zip(&p.coeffs) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_monomial() {
        let p = ChebyshevApproximant::new(0.0_f64, 1.0, vec![4.0]).unwrap();
        assert_eq!(p.to_monomial().unwrap(), vec![2.0]);
    }

    #[test]
    fn degree_guard() {
        let p = ChebyshevApproximant::new(0.0_f64, 1.0, vec![0.0; 32]).unwrap();
        assert!(matches!(p.to_monomial(), Err(Error::Range(_))));
    }

    #[test]
    fn fit_needs_enough_nodes() {
        assert!(cheb_fit(|x: f64| Ok(x), 0.0, 1.0, 5, 5).is_err());
        assert!(ChebyshevApproximant::new(1.0_f64, 1.0, vec![1.0]).is_err());
    }
}

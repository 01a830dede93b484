use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::pihalf::PiHalfRational;
use crate::error::{Error, Result};

/// A truncated power series `Σ_{p ≤ N} c_p xᵖ` over [`PiHalfRational`].
///
/// Coefficients beyond the order are unknown, not zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<PiHalfRational>,
}

impl PowerSeries {
    pub fn from_coeffs(coeffs: Vec<PiHalfRational>) -> Self {
        assert!(!coeffs.is_empty(), "a power series holds at least c₀");
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![PiHalfRational::zero(); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, p: usize) -> &PiHalfRational {
        &self.coeffs[p]
    }

    pub fn coeffs(&self) -> &[PiHalfRational] {
        &self.coeffs
    }

    /// Drop everything above order `m`.
    pub fn truncate(&self, m: usize) -> Self {
        PowerSeries {
            coeffs: self.coeffs[..=m.min(self.order())].to_vec(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return PowerSeries::zero(0);
        }
        let coeffs = (1..=self.order())
            .map(|p| self.coeffs[p].scale(&int(p as i64)))
            .collect();
        PowerSeries { coeffs }
    }

    /// Term-by-term antiderivative with zero constant; order grows by one.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(PiHalfRational::zero());
        for (p, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&BigRational::new(BigInt::from(1), BigInt::from(p as i64 + 1))));
        }
        PowerSeries { coeffs }
    }

    /// `exp(self)` for a series with exactly zero constant term.
    ///
    /// Uses the recurrence from `h' = f'·h`: `n·hₙ = Σ_{k=1}^{n} k·f_k·h_{n−k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "exp of a power series requires a zero constant term".into(),
            ));
        }
        let n_max = self.order();
        let mut h = Vec::with_capacity(n_max + 1);
        h.push(PiHalfRational::from(1));
        for n in 1..=n_max {
            let mut acc = PiHalfRational::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() || h[n - k].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[k] * &h[n - k];
                acc += &prod.scale(&int(k as i64));
            }
            h.push(acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(n as i64))));
        }
        Ok(PowerSeries { coeffs: h })
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Serialize, Deserialize)]
struct CoeffRecord {
    power: usize,
    terms: PiHalfRational,
}

impl Serialize for PowerSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for (power, c) in self.coeffs.iter().enumerate() {
            seq.serialize_element(&CoeffRecord {
                power,
                terms: c.clone(),
            })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let mut recs = Vec::<CoeffRecord>::deserialize(d)?;
        if recs.is_empty() {
            return Err(D::Error::custom("empty series"));
        }
        recs.sort_by_key(|r| r.power);
        if recs.iter().enumerate().any(|(i, r)| r.power != i) {
            return Err(D::Error::custom("series powers must be 0..=N without gaps"));
        }
        Ok(PowerSeries {
            coeffs: recs.into_iter().map(|r| r.terms).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_is_one() {
        let e = PowerSeries::zero(6).exp().unwrap();
        assert_eq!(e.coeff(0), &PiHalfRational::from(1));
        assert!(e.coeffs()[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn exp_of_x_is_exponential_series() {
        let mut c = vec![PiHalfRational::zero(); 8];
        c[1] = PiHalfRational::from(1);
        let e = PowerSeries::from_coeffs(c).exp().unwrap();
        assert_eq!(e.coeff(5), &PiHalfRational::ratio(0, 1, 120));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let s = PowerSeries::from_coeffs(vec![PiHalfRational::from(1); 3]);
        assert!(matches!(s.exp(), Err(Error::Precondition(_))));
    }

    #[test]
    fn integral_then_derivative() {
        let s = PowerSeries::from_coeffs(vec![
            PiHalfRational::ratio(-1, 3, 7),
            PiHalfRational::ratio(2, 1, 2),
            PiHalfRational::ratio(0, -5, 1),
        ]);
        assert_eq!(s.integral().derivative(), s);
    }
}

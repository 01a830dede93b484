use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exponents beyond this are refused by [`PiHalfRational::eval`]; π^{±500}
/// is already far outside the double range.
pub const MAX_EVAL_EXPONENT: i32 = 1000;

/// An exact value `Σ q_m·π^{m/2}` with rational `q_m`.
///
/// Stored canonically: no zero coefficient is kept, so structural equality is
/// value equality within the ring.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PiHalfRational {
    terms: BTreeMap<i32, BigRational>,
}

impl PiHalfRational {
    /// `q·π^{m/2}`
    pub fn term(m: i32, q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(m, q);
        }
        PiHalfRational { terms }
    }

    /// `(num/den)·π^{m/2}`
    pub fn ratio(m: i32, num: i64, den: i64) -> Self {
        Self::term(m, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(q: BigRational) -> Self {
        Self::term(0, q)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().map(|(&m, q)| (m, q))
    }

    pub fn coefficient(&self, m: i32) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        PiHalfRational {
            terms: self.terms.iter().map(|(&m, c)| (m, c * q)).collect(),
        }
    }

    fn accumulate(&mut self, m: i32, q: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !q.is_zero() {
                    v.insert(q);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Numeric value in the target precision.
    pub fn eval<R: Real>(&self) -> Result<R> {
        let mut sum = R::zero();
        for (&m, q) in &self.terms {
            if m.abs() > MAX_EVAL_EXPONENT {
                return Err(Error::range(format!("pi exponent {m}/2 out of range")));
            }
            let pi_half = if m % 2 == 0 {
                R::PI().powi(m / 2)
            } else {
                R::PI().powi(m.div_euclid(2)) * R::sqrt_pi()
            };
            let qv = q
                .to_f64()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::range("rational coefficient outside double range"))?;
            sum = sum + R::lit(qv) * pi_half;
        }
        if !sum.is_finite() {
            return Err(Error::range("value overflows"));
        }
        Ok(sum)
    }
}

pub fn eval_pihalf<R: Real>(x: &PiHalfRational) -> Result<R> {
    x.eval()
}

impl Zero for PiHalfRational {
    fn zero() -> Self {
        PiHalfRational::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for PiHalfRational {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

impl From<i64> for PiHalfRational {
    fn from(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl<'a> Add<&'a PiHalfRational> for &'a PiHalfRational {
    type Output = PiHalfRational;
    fn add(self, rhs: &PiHalfRational) -> PiHalfRational {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&PiHalfRational> for PiHalfRational {
    fn add_assign(&mut self, rhs: &PiHalfRational) {
        for (&m, q) in &rhs.terms {
            self.accumulate(m, q.clone());
        }
    }
}

impl Add for PiHalfRational {
    type Output = PiHalfRational;
    fn add(mut self, rhs: PiHalfRational) -> PiHalfRational {
        self += &rhs;
        self
    }
}

impl Neg for PiHalfRational {
    type Output = PiHalfRational;
    fn neg(self) -> PiHalfRational {
        PiHalfRational {
            terms: self.terms.into_iter().map(|(m, q)| (m, -q)).collect(),
        }
    }
}

impl Neg for &PiHalfRational {
    type Output = PiHalfRational;
    fn neg(self) -> PiHalfRational {
        -self.clone()
    }
}

impl<'a> Sub<&'a PiHalfRational> for &'a PiHalfRational {
    type Output = PiHalfRational;
    fn sub(self, rhs: &PiHalfRational) -> PiHalfRational {
        let mut out = self.clone();
        for (&m, q) in &rhs.terms {
            out.accumulate(m, -q.clone());
        }
        out
    }
}

impl Sub for PiHalfRational {
    type Output = PiHalfRational;
    fn sub(self, rhs: PiHalfRational) -> PiHalfRational {
        &self - &rhs
    }
}

impl<'a> Mul<&'a PiHalfRational> for &'a PiHalfRational {
    type Output = PiHalfRational;
    fn mul(self, rhs: &PiHalfRational) -> PiHalfRational {
        let mut out = PiHalfRational::zero();
        for (&m1, q1) in &self.terms {
            for (&m2, q2) in &rhs.terms {
                out.accumulate(m1 + m2, q1 * q2);
            }
        }
        out
    }
}

impl Mul for PiHalfRational {
    type Output = PiHalfRational;
    fn mul(self, rhs: PiHalfRational) -> PiHalfRational {
        &self * &rhs
    }
}

impl Mul<&BigRational> for &PiHalfRational {
    type Output = PiHalfRational;
    fn mul(self, rhs: &BigRational) -> PiHalfRational {
        self.scale(rhs)
    }
}

impl fmt::Display for PiHalfRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&m, q)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(if q.is_negative() { " - " } else { " + " })?;
            } else if q.is_negative() {
                f.write_str("-")?;
            }
            write!(f, "{}", q.abs())?;
            if m != 0 {
                write!(f, "·π^({m}/2)")?;
            }
        }
        Ok(())
    }
}

/// Wire form of one term: `numerator/denominator · π^{m/2}`, big integers as
/// decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub m: i32,
    pub numerator: String,
    pub denominator: String,
}

impl Serialize for PiHalfRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let recs: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(&m, q)| TermRecord {
                m,
                numerator: q.numer().to_string(),
                denominator: q.denom().to_string(),
            })
            .collect();
        recs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiHalfRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let recs = Vec::<TermRecord>::deserialize(d)?;
        let mut out = PiHalfRational::zero();
        for r in recs {
            let num: BigInt = r.numerator.parse().map_err(D::Error::custom)?;
            let den: BigInt = r.denominator.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            out.accumulate(r.m, BigRational::new(num, den));
        }
        Ok(out)
    }
}

use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::pihalf::PiHalfRational;
use crate::error::{Error, Result};

/// Coefficient types the Bell-polynomial recurrence can run over.
pub trait BellScalar: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> {
    fn from_count(n: u64) -> Self;
}

impl BellScalar for f64 {
    fn from_count(n: u64) -> Self {
        n as f64
    }
}

impl BellScalar for f32 {
    fn from_count(n: u64) -> Self {
        n as f32
    }
}

impl BellScalar for BigRational {
    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl BellScalar for PiHalfRational {
    fn from_count(n: u64) -> Self {
        PiHalfRational::rational(BigRational::from_integer(BigInt::from(n)))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All partial Bell polynomials `B_{m,k}` for `0 ≤ k ≤ m ≤ n`, indexed `[m][k]`.
///
/// `args[j-1]` holds `a_j`; at least `n` arguments are needed.
pub fn bell_table<T: BellScalar>(n: usize, args: &[T]) -> Result<Vec<Vec<T>>> {
    if args.len() < n {
        return Err(Error::Precondition(format!(
            "Bell table of order {n} needs {n} arguments, got {}",
            args.len()
        )));
    }
    let mut table = vec![vec![T::zero(); n + 1]; n + 1];
    table[0][0] = T::one();
    for m in 1..=n {
        for k in 1..=m {
            let mut acc = T::zero();
            for j in 1..=(m - k + 1) {
                let prev = &table[m - j][k - 1];
                if prev.is_zero() || args[j - 1].is_zero() {
                    continue;
                }
                let c = T::from_count(binomial(m as u64 - 1, j as u64 - 1));
                acc = acc + c * args[j - 1].clone() * prev.clone();
            }
            table[m][k] = acc;
        }
    }
    Ok(table)
}

/// The partial Bell polynomial `B_{n,k}(a₁, …, a_{n−k+1})`.
pub fn bell_partial<T: BellScalar>(n: usize, k: usize, args: &[T]) -> Result<T> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::domain(format!("Bell index out of range: n = {n}, k = {k}")));
    }
    let needed = n - k + 1;
    if args.len() < needed {
        return Err(Error::Precondition(format!(
            "B_{{{n},{k}}} needs {needed} arguments, got {}",
            args.len()
        )));
    }
    // Arguments past a_{n-k+1} never enter B_{n,k}; pad with zeros.
    let mut padded: Vec<T> = args[..needed].to_vec();
    padded.resize(n, T::zero());
    Ok(bell_table(n, &padded)?[n][k].clone())
}

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const HERMITE_MAX_DEGREE: usize = 200;

/// Physicists' Hermite polynomial `Hₙ(x)` by the three-term recurrence
/// `H_{n+1} = 2x·Hₙ − 2n·H_{n−1}`.
pub fn hermite<R: Real>(n: usize, x: R) -> Result<R> {
    if n > HERMITE_MAX_DEGREE {
        return Err(Error::range(format!("Hermite degree {n} exceeds {HERMITE_MAX_DEGREE}")));
    }
    let two = R::lit(2.0);
    let mut prev = R::one();
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = two * x;
    for k in 1..n {
        let next = two * x * cur - two * R::from_count(k) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

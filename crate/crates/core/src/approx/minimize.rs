use crate::error::{Error, Result};
use crate::scalar::Real;

/// A located minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<R> {
    pub x: R,
    pub value: R,
    pub evals: usize,
}

/// Brent's method on `[lo, hi]`: golden-section steps with parabolic
/// interpolation when it behaves.
///
/// `x_tol` is the absolute tolerance on the abscissa. The objective may fail,
/// and failures are propagated unchanged.
#[allow(clippy::explicit_counter_loop)]
pub fn brent<R, F>(f: F, lo: R, hi: R, x_tol: R, max_iter: usize) -> Result<Minimum<R>>
where
    R: Real,
    F: Fn(R) -> Result<R>,
{
    if !(lo < hi) {
        return Err(Error::Optimization(format!("empty bracket [{lo}, {hi}]")));
    }
    let golden = R::lit(0.381_966_011_250_105_2);
    let (mut a, mut b) = (lo, hi);
    let mut x = a + golden * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x)?;
    let (mut fw, mut fv) = (fx, fx);
    let mut d = R::zero();
    let mut e = R::zero();
    let mut evals = 1;
    let half = R::lit(0.5);
    let tiny = R::epsilon().sqrt();

    for _ in 0..max_iter {
        let m = half * (a + b);
        let tol1 = tiny * x.abs() + x_tol / R::lit(3.0);
        let tol2 = R::lit(2.0) * tol1;
        if (x - m).abs() <= tol2 - half * (b - a) {
            return Ok(Minimum { x, value: fx, evals });
        }
        let mut golden_step = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = R::lit(2.0) * (q - r);
            if q > R::zero() {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            if p.abs() < (half * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x < m { b - x } else { a - x };
            d = golden * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > R::zero() {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u)?;
        evals += 1;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Err(Error::Optimization(format!(
        "no convergence in {max_iter} iterations (best x = {x})"
    )))
}

/// Largest value of `g` on `[lo, hi]`: a uniform scan with `n_grid` intervals,
/// then golden-section polishing around the best grid point.
pub fn maximize_on_grid<R, G>(g: G, lo: R, hi: R, n_grid: usize) -> Result<(R, R)>
where
    R: Real,
    G: Fn(R) -> R,
{
    if !(lo < hi) || n_grid == 0 {
        return Err(Error::domain(format!("bad scan interval [{lo}, {hi}]")));
    }
    let h = (hi - lo) / R::from_count(n_grid);
    let (mut best_i, mut best) = (0, g(lo));
    for i in 1..=n_grid {
        let v = g(lo + h * R::from_count(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let x_best = lo + h * R::from_count(best_i);
    let a = (x_best - h).max(lo);
    let b = (x_best + h).min(hi);
    let polished = brent(
        |x| Ok(-g(x)),
        a,
        b,
        R::epsilon().sqrt() * (R::one() + x_best.abs()),
        200,
    )?;
    if -polished.value > best {
        Ok((polished.x, -polished.value))
    } else {
        Ok((x_best, best))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let m = brent(|x: f64| Ok((x - 1.3) * (x - 1.3) + 2.0), 0.0, 4.0, 1e-10, 200).unwrap();
        assert!((m.x - 1.3).abs() < 1e-8);
        assert!((m.value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn nonsmooth_minimum_at_edge() {
        let m = brent(|x: f64| Ok(x.abs()), -0.5, 3.0, 1e-10, 500).unwrap();
        assert!(m.x.abs() < 1e-8);
    }

    #[test]
    fn grid_maximum() {
        let (x, v) = maximize_on_grid(|x: f64| (x * 3.0).sin(), 0.0, 2.0, 50).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_6).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn empty_bracket() {
        assert!(matches!(
            brent(|x: f64| Ok(x), 1.0, 1.0, 1e-8, 10),
            Err(Error::Optimization(_))
        ));
    }
}

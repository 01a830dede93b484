use proptest::prelude::*;
use tspecial::kernels::{erf, erfc, hermite, hyp1f1, incomplete_gamma, normal_cdf};
use tspecial::quadrature::{integrate, integrate_semi_infinite};
use tspecial::ToleranceSpec;

fn gauss(x: f64) -> f64 {
    (-x * x).exp()
}

/// n-th central difference quotient of `f` at `x` with step `h`.
fn central_difference(f: impl Fn(f64) -> f64, n: usize, x: f64, h: f64) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for k in 0..=n {
        let offset = (n as f64 / 2.0 - k as f64) * h;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * f(x + offset);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    sum / h.powi(n as i32)
}

#[test]
fn rodrigues_by_finite_differences() {
    let steps = [1e-5, 1e-4, 1e-3, 2e-3];
    let tols = [1e-9, 1e-7, 1e-5, 1e-4];
    for x in [0.3, 1.1] {
        for n in 1..=4 {
            let fd = central_difference(gauss, n, x, steps[n - 1]);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let exact = sign * hermite(n, x).unwrap() * gauss(x);
            assert!((fd - exact).abs() <= tols[n - 1], "n = {n}, x = {x}: {fd} vs {exact}");
        }
    }
}

#[test]
fn incomplete_gamma_matches_quadrature() {
    let tol = ToleranceSpec::quadrature();
    for two_s in 1..=13 {
        let s = two_s as f64 / 2.0;
        for x in [0.25, 1.0, 2.5, 6.0, 10.0] {
            let g = incomplete_gamma(s, x).unwrap();
            // t = u² removes the endpoint singularity at s = 1/2.
            let lower = integrate(
                |u: f64| 2.0 * u.powf(2.0 * s - 1.0) * (-u * u).exp(),
                0.0,
                x.sqrt(),
                &tol,
            )
            .unwrap()
            .value;
            let upper = integrate_semi_infinite(|t: f64| t.powf(s - 1.0) * (-t).exp(), x, &tol)
                .unwrap()
                .value;
            assert!(
                (g.lower - lower).abs() <= 1e-12 * lower.max(1.0),
                "lower s = {s}, x = {x}: {} vs {lower}",
                g.lower
            );
            assert!(
                (g.upper - upper).abs() <= 1e-12 * upper.max(1.0),
                "upper s = {s}, x = {x}: {} vs {upper}",
                g.upper
            );
        }
    }
}

#[test]
fn erf_strictly_increasing_on_grid() {
    let mut prev = erf(-5.0);
    for i in 1..=10_000 {
        let x = -5.0 + 1e-3 * i as f64;
        let v = erf(x);
        assert!(v > prev, "erf not increasing at {x}");
        prev = v;
    }
}

#[test]
fn kernels_are_pure_across_threads() {
    let xs: Vec<f64> = (0..200).map(|i| -4.0 + 0.0437 * i as f64).collect();
    let eval = |xs: &[f64]| -> Vec<u64> {
        xs.iter()
            .flat_map(|&x| [erf(x), erfc(x), normal_cdf(x), hyp1f1(0.5, 1.5, -x * x).unwrap()])
            .map(f64::to_bits)
            .collect()
    };
    let here = eval(&xs);
    let there = std::thread::scope(|s| s.spawn(|| eval(&xs)).join().unwrap());
    assert_eq!(here, there);
    assert_eq!(here, eval(&xs));
}

proptest! {
    #[test]
    fn kummer_transformation(a in 0.1f64..3.0, b in 0.5f64..4.0, z in -3.0f64..3.0) {
        let lhs = hyp1f1(a, b, z).unwrap();
        let rhs = z.exp() * hyp1f1(b - a, b, -z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn erf_monotone_pairs(x1 in -6.0f64..6.0, dx in 0.0f64..3.0) {
        prop_assert!(erf(x1) <= erf(x1 + dx));
    }

    #[test]
    fn erf_odd(x in -8.0f64..8.0) {
        prop_assert_eq!(erf(-x), -erf(x));
    }
}

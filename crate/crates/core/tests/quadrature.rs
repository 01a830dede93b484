use proptest::prelude::*;
use tspecial::kernels::erf;
use tspecial::quadrature::{euler_scheme, integrate};
use tspecial::ToleranceSpec;

fn tol() -> ToleranceSpec<f64> {
    ToleranceSpec::quadrature()
}

fn f(x: f64) -> f64 {
    (-x * x * erf(x)).exp()
}

fn g(x: f64) -> f64 {
    x.sin() * (-x * x).exp()
}

#[test]
fn euler_error_is_first_order() {
    let exact = std::f64::consts::PI.sqrt() / 4.0 * erf(1.0f64).powi(2);
    let (logh, loge): (Vec<f64>, Vec<f64>) = [10usize, 20, 50, 100]
        .iter()
        .map(|&n| {
            let h = 1.0 / n as f64;
            let trace = euler_scheme(|a: f64| (-a * a).exp() * erf(a), 0.0, 0.0, h, n).unwrap();
            (h.ln(), (trace.last().1 - exact).abs().ln())
        })
        .unzip();
    let n = logh.len() as f64;
    let mx = logh.iter().sum::<f64>() / n;
    let my = loge.iter().sum::<f64>() / n;
    let sxy: f64 = logh.iter().zip(&loge).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logh.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((0.9..=1.1).contains(&slope), "slope {slope}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn additivity(a in -3.0f64..3.0, w1 in 0.01f64..3.0, w2 in 0.01f64..3.0) {
        let (b, c) = (a + w1, a + w1 + w2);
        let whole = integrate(f, a, c, &tol()).unwrap();
        let left = integrate(f, a, b, &tol()).unwrap();
        let right = integrate(f, b, c, &tol()).unwrap();
        let slack = tol().bound(whole.value) + tol().bound(left.value) + tol().bound(right.value);
        prop_assert!((whole.value - left.value - right.value).abs() <= slack);
    }

    #[test]
    fn linearity(alpha in -5.0f64..5.0, beta in -5.0f64..5.0, a in -2.0f64..0.0, b in 0.0f64..4.0) {
        let combo = integrate(|x| alpha * f(x) + beta * g(x), a, b, &tol()).unwrap().value;
        let fi = integrate(f, a, b, &tol()).unwrap().value;
        let gi = integrate(g, a, b, &tol()).unwrap().value;
        let parts = alpha * fi + beta * gi;
        let slack = tol().bound(combo) + alpha.abs() * tol().bound(fi) + beta.abs() * tol().bound(gi);
        prop_assert!((combo - parts).abs() <= slack, "{} vs {}", combo, parts);
    }
}

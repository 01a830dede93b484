use tspecial::kernels::erf;
use tspecial::quadrature::integrate;
use tspecial::ToleranceSpec;

#[test]
fn erf_in_single_precision() {
    for x in [0.1f32, 0.5, 1.0, 2.5, 4.0] {
        assert!((erf(x) as f64 - erf(x as f64)).abs() < 1e-6, "x = {x}");
    }
}

#[test]
fn product_form_integral_in_single_precision() {
    let v = integrate(|t: f32| (-t * t).exp() * erf(t), 0.0, 1.0, &ToleranceSpec::quadrature()).unwrap();
    let exact = std::f32::consts::PI.sqrt() / 4.0 * erf(1.0f32).powi(2);
    assert!((v.value - exact).abs() < 1e-5);
}

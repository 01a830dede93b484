//! Integrals of powers of erf over `[−1, 1]`, their closed-form approximations,
//! and the exponential expansion of `∫₋₁¹ exp(−x²·erf x) dx`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::approx::{pade_erf, ErfSqParams, PadeVariant};
use crate::error::{Error, Result};
use crate::kernels::{appell_f1, erf, gen_expint, hyp2f1, incomplete_gamma};
use crate::quadrature::integrate;
use crate::tolerance::ToleranceSpec;

/// Largest `n` accepted by [`j_n`]; the alternating binomial sum loses all
/// accuracy well before the binomials overflow.
pub const J_N_MAX: usize = 60;
/// Largest `k` accepted by the quadrature oracles.
pub const I2K_MAX: usize = 20;
/// Largest `k` accepted by the hypergeometric forms.
pub const PADE_K_MAX: usize = 8;
/// Largest truncation order of [`exp_expansion`].
pub const EXP_EXPANSION_MAX: usize = 20;

fn tol() -> ToleranceSpec<f64> {
    ToleranceSpec::quadrature()
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn check_positive(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("exponent a must be positive, got {a}")))
    }
}

/// `∫₋₁¹ f` for an even integrand, as `2∫₀¹ f`.
fn symmetric(f: impl Fn(f64) -> f64) -> Result<f64> {
    Ok(2.0 * integrate(f, 0.0, 1.0, &tol())?.value)
}

/// `Jₙ = ∫₋₁¹ (1 − e^{−ax²})ⁿ dx = 2 + √(π/a)·Σ_{k=1}^{n} (−1)ᵏ/√k · C(n,k)·erf(√(ak))`.
pub fn j_n(n: usize, a: f64) -> Result<f64> {
    check_positive(a)?;
    if n > J_N_MAX {
        return Err(Error::Range(format!("j_n limited to n <= {J_N_MAX}, got {n}")));
    }
    let pref = (std::f64::consts::PI / a).sqrt();
    let sum: f64 = (1..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign / (k as f64).sqrt() * binomial(n, k) * erf((a * k as f64).sqrt())
        })
        .sum();
    Ok(2.0 + pref * sum)
}

/// `Jₙ` by quadrature.
pub fn j_n_quadrature(n: usize, a: f64) -> Result<f64> {
    check_positive(a)?;
    symmetric(|x| (-(-a * x * x).exp_m1()).powi(n as i32))
}

/// `J_{n,k} = ∫₋₁¹ x^{4k}·e^{−nax²} dx = (na)^{−(2k+1/2)}·γ(2k + 1/2, na)`, and `2/(4k+1)` at `n = 0`.
pub fn j_nk(n: usize, k: usize, a: f64) -> Result<f64> {
    check_positive(a)?;
    if n == 0 {
        return Ok(2.0 / (4 * k + 1) as f64);
    }
    let s = 2.0 * k as f64 + 0.5;
    let z = n as f64 * a;
    Ok(z.powf(-s) * incomplete_gamma(s, z)?.lower)
}

/// `J_{n,k}` from the antiderivative `−(1/2)·x^{4k+1}·E_{1/2−2k}(nax²)`.
///
/// The antiderivative does not vanish at `x → 0`; its limit there is
/// `−(1/2)(na)^{−s}Γ(s)`, `s = 2k + 1/2`. The symmetric interval doubles the half-range value.
pub fn j_nk_antiderivative(n: usize, k: usize, a: f64) -> Result<f64> {
    check_positive(a)?;
    if n == 0 {
        return Ok(2.0 / (4 * k + 1) as f64);
    }
    let s = 2.0 * k as f64 + 0.5;
    let z = n as f64 * a;
    let at_one = -0.5 * gen_expint(0.5 - 2.0 * k as f64, z)?;
    let full = incomplete_gamma(s, 0.0)?.upper;
    let at_zero = -0.5 * z.powf(-s) * full;
    Ok(2.0 * (at_one - at_zero))
}

/// `I₂ₖ = ∫₋₁¹ x^{4k}·erf(x)^{2k} dx` by quadrature.
pub fn i2k_oracle(k: usize) -> Result<f64> {
    if k > I2K_MAX {
        return Err(Error::Range(format!("i2k_oracle limited to k <= {I2K_MAX}, got {k}")));
    }
    let p = k as i32;
    symmetric(|x| (x * x * erf(x)).powi(2 * p))
}

/// `∫₋₁¹ x^{2k}·erf(x)^k dx`, which vanishes for odd `k` (odd integrand).
pub fn i_odd(k: usize) -> Result<f64> {
    if k > 2 * I2K_MAX {
        return Err(Error::Range(format!("i_odd limited to k <= {}, got {k}", 2 * I2K_MAX)));
    }
    let p = k as i32;
    Ok(integrate(|x| (x * x).powi(p) * erf(x).powi(p), -1.0, 1.0, &tol())?.value)
}

/// `I₂ₖ` with `erf² ≈ 1 − e^{−ax²}`: `Σ_j (−1)ʲ·C(k,j)·J_{j,k}`.
pub fn i2k_gauss(k: usize, a: f64) -> Result<f64> {
    if k > I2K_MAX {
        return Err(Error::Range(format!("i2k_gauss limited to k <= {I2K_MAX}, got {k}")));
    }
    (0..=k).try_fold(0.0, |acc, j| {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        Ok(acc + sign * binomial(k, j) * j_nk(j, k, a)?)
    })
}

/// Quadrature of `x^{4k}·(1 − e^{−ax²})ᵏ`, the integrand [`i2k_gauss`] sums exactly.
pub fn i2k_gauss_quadrature(k: usize, a: f64) -> Result<f64> {
    check_positive(a)?;
    let p = k as i32;
    symmetric(|x| x.powi(4 * p) * (-(-a * x * x).exp_m1()).powi(p))
}

/// `∫₋₁¹ x^{2w}·R(x)^{2n} dx` for a Padé form `R`, with `u = x²` and `shifted = n + w`:
/// `(2/(2·shifted + 1))·(4/π)ⁿ·F(shifted + 1/2, …; shifted + 3/2; …)`.
fn pade_moment(n: usize, variant: PadeVariant, shifted: f64) -> Result<f64> {
    let nf = n as f64;
    let lead = 2.0 / (2.0 * shifted + 1.0) * (4.0 / std::f64::consts::PI).powi(n as i32);
    let a = shifted + 0.5;
    let c = shifted + 1.5;
    let f = match variant {
        PadeVariant::Simple => hyp2f1(2.0 * nf, a, c, -1.0 / 3.0)?,
        PadeVariant::Refined => appell_f1(a, -2.0 * nf, 2.0 * nf, c, 1.0 / 30.0, -0.3)?,
        PadeVariant::Split => {
            return Err(Error::Precondition(
                "the split form has no hypergeometric closed form".into(),
            ))
        }
    };
    Ok(lead * f)
}

fn check_pade_k(k: usize) -> Result<()> {
    if k == 0 || k > PADE_K_MAX {
        return Err(Error::Range(format!(
            "Padé closed forms need 1 <= k <= {PADE_K_MAX}, got {k}"
        )));
    }
    Ok(())
}

/// Closed form of `∫₋₁¹ x^{4k}·R(x)^{2k} dx` for the Padé form `R`:
///
/// * `Simple`: `(2/(6k+1))(4/π)ᵏ·₂F₁(2k, 3k + 1/2; 3k + 3/2; −1/3)`
/// * `Refined`: `(2/(6k+1))(4/π)ᵏ·F₁(3k + 1/2; −2k, 2k; 3k + 3/2; 1/30, −3/10)`
pub fn i2k_pade(k: usize, variant: PadeVariant) -> Result<f64> {
    check_pade_k(k)?;
    pade_moment(k, variant, 3.0 * k as f64)
}

/// The same forms with the parameter shift `6k` in place of `3k`, as they are
/// sometimes quoted. They do not represent the Padé integral and are kept for comparison.
pub fn i2k_pade_doubled_shift(k: usize, variant: PadeVariant) -> Result<f64> {
    check_pade_k(k)?;
    let kf = k as f64;
    let lead = 2.0 / (6.0 * kf + 1.0) * (4.0 / std::f64::consts::PI).powi(k as i32);
    let (a, c) = (6.0 * kf + 0.5, 6.0 * kf + 1.5);
    let f = match variant {
        PadeVariant::Simple => hyp2f1(2.0 * kf, a, c, -1.0 / 3.0)?,
        PadeVariant::Refined => appell_f1(a, -2.0 * kf, 2.0 * kf, c, 1.0 / 30.0, -0.3)?,
        PadeVariant::Split => return pade_moment(k, variant, 0.0),
    };
    Ok(lead * f)
}

/// Quadrature of `x^{4k}·R(x)^{2k}`, the integrand behind [`i2k_pade`].
pub fn i2k_pade_quadrature(k: usize, variant: PadeVariant) -> Result<f64> {
    let p = k as i32;
    symmetric(|x| (x * x * pade_erf(x, variant)).powi(2 * p))
}

/// `Iₙ = ∫₋₁¹ erf(x)^{2n} dx` by quadrature.
pub fn i_n_oracle(n: usize) -> Result<f64> {
    if n > I2K_MAX {
        return Err(Error::Range(format!("i_n_oracle limited to n <= {I2K_MAX}, got {n}")));
    }
    symmetric(|x| erf(x).powi(2 * n as i32))
}

/// Closed form of `∫₋₁¹ R(x)^{2n} dx`:
/// `(2/(2n+1))(4/π)ⁿ·F(n + 1/2, …; n + 3/2; …)` with the same hypergeometric kernels as [`i2k_pade`].
pub fn i_n_pade(n: usize, variant: PadeVariant) -> Result<f64> {
    check_pade_k(n)?;
    pade_moment(n, variant, n as f64)
}

/// Same forms with the parameter shift `2n` in place of `n`, as sometimes quoted.
pub fn i_n_pade_doubled_shift(n: usize, variant: PadeVariant) -> Result<f64> {
    check_pade_k(n)?;
    let nf = n as f64;
    let lead = 2.0 / (2.0 * nf + 1.0) * (4.0 / std::f64::consts::PI).powi(n as i32);
    let (a, c) = (2.0 * nf + 0.5, 2.0 * nf + 1.5);
    let f = match variant {
        PadeVariant::Simple => hyp2f1(2.0 * nf, a, c, -1.0 / 3.0)?,
        PadeVariant::Refined => appell_f1(a, -2.0 * nf, 2.0 * nf, c, 1.0 / 30.0, -0.3)?,
        PadeVariant::Split => return pade_moment(n, variant, 0.0),
    };
    Ok(lead * f)
}

/// One row of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub index: usize,
    pub oracle: f64,
    pub closed_form: f64,
    pub approx_variants: BTreeMap<String, f64>,
    pub abs_errors: BTreeMap<String, f64>,
}

impl ComparisonRow {
    pub fn new(index: usize, oracle: f64, closed_form: f64, variants: BTreeMap<String, f64>) -> Self {
        let abs_errors = variants.iter().map(|(k, v)| (k.clone(), (v - oracle).abs())).collect();
        ComparisonRow {
            index,
            oracle,
            closed_form,
            approx_variants: variants,
            abs_errors,
        }
    }

    /// The variant closest to the oracle.
    pub fn best_variant(&self) -> Option<(&str, f64)> {
        self.abs_errors
            .iter()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, &v)| (k.as_str(), v))
    }
}

/// The erf² exponent used by default: `(1 + π)^{2/3}·ln²2`.
pub fn default_a() -> f64 {
    ErfSqParams::<f64>::closed_form_a()
}

/// `Iₙ` against its approximations. `closed_form` is the `Jₙ` value.
///
/// Variants: `jn_gauss`, `hyp2f1`, `appell` (exact for the Padé-squared
/// integrands) and `hyp2f1_doubled_shift`, `appell_doubled_shift` (the `2n`-shifted parameters).
pub fn i_n_forms(n: usize) -> Result<ComparisonRow> {
    if n > PADE_K_MAX {
        return Err(Error::Range(format!("i_n_forms limited to n <= {PADE_K_MAX}, got {n}")));
    }
    let oracle = i_n_oracle(n)?;
    let jn = j_n(n, default_a())?;
    let mut v = BTreeMap::new();
    v.insert("jn_gauss".to_string(), jn);
    if n == 0 {
        for name in ["hyp2f1", "appell", "hyp2f1_doubled_shift", "appell_doubled_shift"] {
            v.insert(name.to_string(), 2.0);
        }
    } else {
        v.insert("hyp2f1".into(), i_n_pade(n, PadeVariant::Simple)?);
        v.insert("appell".into(), i_n_pade(n, PadeVariant::Refined)?);
        v.insert(
            "hyp2f1_doubled_shift".into(),
            i_n_pade_doubled_shift(n, PadeVariant::Simple)?,
        );
        v.insert(
            "appell_doubled_shift".into(),
            i_n_pade_doubled_shift(n, PadeVariant::Refined)?,
        );
    }
    Ok(ComparisonRow::new(n, oracle, jn, v))
}

/// `I₂ₖ` against its approximations. `closed_form` is the binomial Gaussian sum.
pub fn i2k_forms(k: usize) -> Result<ComparisonRow> {
    let oracle = i2k_oracle(k)?;
    let gauss = i2k_gauss(k, default_a())?;
    let mut v = BTreeMap::new();
    v.insert("gauss".to_string(), gauss);
    if k == 0 {
        for name in [
            "pade_simple",
            "pade_refined",
            "pade_simple_doubled_shift",
            "pade_refined_doubled_shift",
        ] {
            v.insert(name.to_string(), 2.0);
        }
    } else {
        v.insert("pade_simple".into(), i2k_pade(k, PadeVariant::Simple)?);
        v.insert("pade_refined".into(), i2k_pade(k, PadeVariant::Refined)?);
        v.insert(
            "pade_simple_doubled_shift".into(),
            i2k_pade_doubled_shift(k, PadeVariant::Simple)?,
        );
        v.insert(
            "pade_refined_doubled_shift".into(),
            i2k_pade_doubled_shift(k, PadeVariant::Refined)?,
        );
    }
    Ok(ComparisonRow::new(k, oracle, gauss, v))
}

/// CSV with columns `index, oracle, closed_form, <variants…>, abs_error_<variants…>`.
/// All rows must share the same variant names. Numbers carry 17 significant digits.
pub fn write_csv<W: Write>(rows: &[ComparisonRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let names: Vec<&String> = rows
        .first()
        .map(|r| r.approx_variants.keys().collect())
        .unwrap_or_default();
    let mut header = vec!["index".to_string(), "oracle".into(), "closed_form".into()];
    header.extend(names.iter().map(|n| n.to_string()));
    header.extend(names.iter().map(|n| format!("abs_error_{n}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.index.to_string(), sci(r.oracle), sci(r.closed_form)];
        for n in &names {
            let v = r
                .approx_variants
                .get(*n)
                .ok_or_else(|| Error::Precondition(format!("row {} lacks variant {n}", r.index)))?;
            rec.push(sci(*v));
        }
        for n in &names {
            rec.push(sci(r.abs_errors[*n]));
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// 17 significant digits in scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// `Σ_{j≤K} I₄ⱼ-type terms`: `Σ_{j=0}^{K} ∫₋₁¹ x^{4j}erf(x)^{2j} dx / (2j)!`.
///
/// Expanding `exp(−x²·erf x)` in powers, the odd powers integrate to zero over
/// `[−1, 1]` and the even ones carry weight `1/(2j)!`.
pub fn exp_expansion(k_max: usize) -> Result<f64> {
    Ok(exp_expansion_partials(k_max)?.last().copied().unwrap_or(0.0))
}

/// All partial sums of [`exp_expansion`] for `K = 0..=k_max`.
pub fn exp_expansion_partials(k_max: usize) -> Result<Vec<f64>> {
    if k_max > EXP_EXPANSION_MAX {
        return Err(Error::Range(format!(
            "exp_expansion limited to K <= {EXP_EXPANSION_MAX}, got {k_max}"
        )));
    }
    let mut acc = 0.0;
    (0..=k_max)
        .map(|j| {
            acc += i2k_oracle(j)? / factorial(2 * j);
            Ok(acc)
        })
        .collect()
}

/// `Σ_{k=0}^{K} (−1)ᵏ/k!·I₂ₖ`, an alternative weighting sometimes quoted. It does not converge to the integral.
pub fn exp_expansion_alternating(k_max: usize) -> Result<f64> {
    if k_max > EXP_EXPANSION_MAX {
        return Err(Error::Range(format!(
            "exp_expansion limited to K <= {EXP_EXPANSION_MAX}, got {k_max}"
        )));
    }
    (0..=k_max).try_fold(0.0, |acc, k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        Ok(acc + sign / factorial(k) * i2k_oracle(k)?)
    })
}

/// `∫₋₁¹ exp(−x²·erf x) dx` by quadrature.
pub fn exp_integral_oracle() -> Result<f64> {
    Ok(integrate(|x| (-x * x * erf(x)).exp(), -1.0, 1.0, &tol())?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const A: f64 = 1.23907;

    #[test]
    fn j1_closed_form() {
        let want = 2.0 - (PI / A).sqrt() * erf(A.sqrt());
        assert!((j_n(1, A).unwrap() - want).abs() < 1e-15);
        assert_eq!(j_n(0, A).unwrap(), 2.0);
        assert!(j_n(61, A).is_err());
    }

    #[test]
    fn j3_expanded() {
        let p = (PI / A).sqrt();
        let want = 2.0 - 3.0 * p * erf(A.sqrt()) + 3.0 * p / 2f64.sqrt() * erf((2.0 * A).sqrt())
            - p / 3f64.sqrt() * erf((3.0 * A).sqrt());
        assert!((j_n(3, A).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn jn_against_quadrature() {
        for n in 1..=10 {
            let d = (j_n(n, A).unwrap() - j_n_quadrature(n, A).unwrap()).abs();
            assert!(d <= 1e-10, "n = {n}: {d}");
        }
    }

    #[test]
    fn jnk_cases() {
        let want = (PI / 1.0).sqrt() * erf(1.0);
        assert!((j_nk(1, 0, 1.0).unwrap() - want).abs() < 1e-13);
        let quad = symmetric(|x| x.powi(4) * (-A * x * x).exp()).unwrap();
        assert!((j_nk(1, 1, A).unwrap() - quad).abs() < 1e-12);
        for k in 0..=2 {
            let vals: Vec<f64> = (1..=5).map(|n| j_nk(n, k, A).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn jnk_antiderivative_agrees() {
        for n in 1..=4 {
            for k in 0..=3 {
                let d = (j_nk(n, k, A).unwrap() - j_nk_antiderivative(n, k, A).unwrap()).abs();
                assert!(d <= 1e-11, "n = {n}, k = {k}: {d}");
            }
        }
    }

    #[test]
    fn oracles() {
        assert!((i2k_oracle(0).unwrap() - 2.0).abs() < 1e-15);
        assert!((i2k_oracle(1).unwrap() - 0.229_599_375_020_123_1).abs() < 1e-13);
        assert!((i2k_oracle(2).unwrap() - 0.089_978_821_790_507_45).abs() < 1e-13);
        assert!(i_odd(1).unwrap().abs() < 1e-12);
        assert!((i_n_oracle(1).unwrap() - 0.596_750_881_892_560_2).abs() < 1e-13);
    }

    #[test]
    fn gauss_sum() {
        assert_eq!(i2k_gauss(0, A).unwrap(), 2.0);
        let rel = (i2k_gauss(1, A).unwrap() / i2k_oracle(1).unwrap() - 1.0).abs();
        assert!(rel < 5e-3, "{rel}");
        for k in 1..=5 {
            let d = (i2k_gauss(k, A).unwrap() - i2k_gauss_quadrature(k, A).unwrap()).abs();
            assert!(d < 1e-10, "k = {k}: {d}");
        }
    }

    #[test]
    fn pade_closed_forms() {
        for k in 1..=3 {
            for v in [PadeVariant::Simple, PadeVariant::Refined] {
                let d = (i2k_pade(k, v).unwrap() - i2k_pade_quadrature(k, v).unwrap()).abs();
                assert!(d < 1e-9, "k = {k} {v:?}: {d}");
            }
            let o = i2k_oracle(k).unwrap();
            let s = (i2k_pade(k, PadeVariant::Simple).unwrap() - o).abs();
            let r = (i2k_pade(k, PadeVariant::Refined).unwrap() - o).abs();
            assert!(r < s);
        }
        assert!(i2k_pade(9, PadeVariant::Simple).is_err());
        assert!(i2k_pade(0, PadeVariant::Simple).is_err());
    }

    #[test]
    fn n_forms() {
        let row = i_n_forms(1).unwrap();
        assert!(row.abs_errors["jn_gauss"] <= 0.01);
        let want = symmetric(|x| pade_erf(x, PadeVariant::Simple).powi(2)).unwrap();
        assert!((row.approx_variants["hyp2f1"] - want).abs() < 1e-12);
        let row0 = i_n_forms(0).unwrap();
        assert!(row0.approx_variants.values().all(|&v| (v - 2.0).abs() < 1e-15));
    }

    #[test]
    fn expansion() {
        assert_eq!(exp_expansion(0).unwrap(), 2.0);
        let partials = exp_expansion_partials(20).unwrap();
        assert!(partials.windows(2).all(|w| w[1] >= w[0]));
        let oracle = exp_integral_oracle().unwrap();
        assert!((oracle - 2.118_610_770_469_005).abs() < 1e-12);
        assert!((partials[20] - oracle).abs() < 1e-8);
        assert!(partials[20] <= oracle + 1e-12);
        assert!(exp_expansion(21).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = vec![i2k_forms(1).unwrap(), i2k_forms(2).unwrap()];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        let cols = lines[0].split(',').count();
        assert!(lines.iter().all(|l| l.split(',').count() == cols));
        assert!(lines[0].starts_with("index,oracle,closed_form,"));
    }
}

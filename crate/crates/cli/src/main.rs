#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tspecial::approx::{cheb_fit, DEFAULT_NODES};
use tspecial::dist::{fit_to_target, make_params, maxwell_cdf, DerivativeMatch, FitOptions, FitRecord, MaxwellApprox};
use tspecial::integrals::{i2k_forms, i_n_forms, ComparisonRow};
use tspecial::kernels::{erf, erfc, erfi, normal_cdf, try_erf};
use tspecial::quadrature::{euler_scheme, l2_distance};
use tspecial::series::{partial_sum, t_series};
use tspecial::tfun::{product_form, t_fast, t_infinity, t_reference, t_smooth, InfinityMode, T_INFINITY_DIGITS};
use tspecial::verify::{l2_tolerance, run_all, run_selected, Check};
use tspecial::{Error, Result, ToleranceSpec};

mod output;
use output::{emit_table, envelope, sink, write_json, Cell, Table};

const FITTED_LAMBDA: f64 = 0.1671645;
const FITTED_MU: f64 = 0.8449657;

#[derive(Parser, Debug)]
#[command(
    name = "tspecial",
    version,
    about = "Evaluate, tabulate and verify T(x) = ∫₀ˣ exp(−t²·erf t) dt"
)]
struct Cli {
    /// Machine-readable JSON instead of CSV or text.
    #[arg(long, global = true)]
    json: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Func {
    /// T(x) by adaptive quadrature.
    #[value(name = "T")]
    T,
    /// Same as T; kept as an explicit name for the quadrature reference.
    #[value(name = "Tref")]
    Tref,
    /// T(x) from the piecewise Chebyshev/erf-tail evaluator.
    #[value(name = "Tfast")]
    Tfast,
    Erf,
    Erfc,
    Erfi,
    /// Standard normal cdf.
    Phi,
    /// Density of the (λ, μ) family.
    Pdf,
    /// Cdf of the (λ, μ) family.
    Cdf,
    /// Maxwell–Boltzmann cdf with scale --a.
    Maxwell,
    /// Maxwell–Boltzmann cdf with erf replaced by a fitted (λ, μ) cdf.
    MaxwellApprox,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Curve {
    /// One column per function value on the --range grid (uses --fn).
    Function,
    /// Explicit Euler for ∫ e^{−a²}erf(a) da with the --steps step sizes, plus the exact value.
    Euler,
    /// Maclaurin partial sums of T at --x for N = 1..--max-order.
    PartialSums,
    /// Exact and approximate Maxwell–Boltzmann cdf on the --range grid.
    Maxwell,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableKind {
    /// ∫₋₁¹ x^{4k} erf(x)^{2k} dx and its approximations.
    I2k,
    /// ∫₋₁¹ erf(x)^{2n} dx and its approximations.
    In,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    /// erf(x).
    Erf,
    /// erf(x/(√2·a)), the erf part of the Maxwell–Boltzmann cdf.
    Maxwell,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Deriv {
    Unnormalized,
    Normalized,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct DistArgs {
    /// λ of the (λ, μ) family.
    #[arg(long, default_value_t = FITTED_LAMBDA, allow_hyphen_values = true)]
    lambda: f64,
    /// μ of the (λ, μ) family.
    #[arg(long, default_value_t = FITTED_MU, allow_hyphen_values = true)]
    mu: f64,
    /// Maxwell–Boltzmann scale.
    #[arg(long, default_value_t = 0.75)]
    a: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function at one point.
    Eval {
        #[arg(long = "fn", value_enum, default_value = "T")]
        func: Func,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[command(flatten)]
        dist: DistArgs,
    },
    /// Tabulate a curve as CSV (x, value...).
    Tabulate {
        #[arg(long, value_enum, default_value = "function")]
        curve: Curve,
        #[arg(long = "fn", value_enum, default_value = "T")]
        func: Func,
        /// Grid a:b:h; rows at a + i·h for i = 0..⌊(b−a)/h⌋.
        #[arg(long, default_value = "0:10:0.01", allow_hyphen_values = true)]
        range: String,
        /// Euler step counts on [0, 1].
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 50])]
        steps: Vec<usize>,
        /// Evaluation point for partial sums.
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        /// Largest order for partial sums.
        #[arg(long, default_value_t = 25)]
        max_order: usize,
        #[command(flatten)]
        dist: DistArgs,
    },
    /// Print T(∞) (stored, quadrature, heuristic) and related constants.
    Constants,
    /// Chebyshev fit of T on an interval.
    ChebFit {
        /// Interval a:b.
        #[arg(long, default_value = "0:1.5")]
        range: String,
        #[arg(long, default_value_t = 11)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
    },
    /// Fit (λ, μ) so the family matches a target cdf and its slope at one point.
    FitDist {
        #[arg(long, value_enum, default_value = "erf")]
        target: Target,
        /// Fit point.
        #[arg(long, default_value_t = 1.0)]
        x0: f64,
        /// Maxwell scale for --target maxwell.
        #[arg(long, default_value_t = 0.75)]
        a: f64,
        /// Initial λ.
        #[arg(long, default_value_t = 0.2)]
        lambda: f64,
        /// Initial μ.
        #[arg(long, default_value_t = 0.8, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, value_enum, default_value = "unnormalized")]
        derivative: Deriv,
        /// Keep μ at its initial value.
        #[arg(long)]
        freeze_mu: bool,
    },
    /// Comparison table of erf-power integrals and their approximations.
    IntegralsTable {
        #[arg(long, value_enum, default_value = "i2k")]
        kind: TableKind,
        /// Largest index.
        #[arg(long, default_value_t = 5)]
        max: usize,
    },
    /// Run every cross-check; exit 0 only when all pass.
    Verify {
        /// Run only these criteria (1-18); repeatable or comma-separated.
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=18))]
        criterion: Vec<u8>,
    },
    /// Inverse-transform samples from the (λ, μ) family.
    Sample {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn parse_range(s: &str, parts: usize) -> std::result::Result<Vec<f64>, Failure> {
    let v: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("cannot parse range '{s}'")))?;
    if v.len() != parts || v.iter().any(|x| !x.is_finite()) {
        return Err(Failure::Usage(format!(
            "range '{s}' needs {parts} finite ':'-separated numbers"
        )));
    }
    if v[1] < v[0] || (parts == 2 && v[1] == v[0]) {
        return Err(Failure::Usage(format!("range '{s}' is empty or reversed")));
    }
    if parts == 3 && !(v[2] > 0.0) {
        return Err(Failure::Usage(format!("range step must be positive in '{s}'")));
    }
    Ok(v)
}

/// `⌊(b − a)/h⌋ + 1` grid points, tolerant of representation error in `h`.
fn grid(a: f64, b: f64, h: f64) -> Vec<f64> {
    let ratio = (b - a) / h;
    let n = (ratio * (1.0 + 4.0 * f64::EPSILON) + 1e-12).floor() as usize;
    (0..=n).map(|i| a + i as f64 * h).collect()
}

fn eval_func(func: Func, x: f64, d: &DistArgs) -> Result<f64> {
    let tol = ToleranceSpec::quadrature();
    match func {
        Func::T | Func::Tref => {
            if x < 0.0 {
                return Err(Error::Domain(format!("T is tabulated for x >= 0 only, got {x}")));
            }
            t_reference(x, &tol)
        }
        Func::Tfast => t_fast(x),
        Func::Erf => try_erf(x),
        Func::Erfc => {
            try_erf(x)?;
            Ok(erfc(x))
        }
        Func::Erfi => erfi(x),
        Func::Phi => {
            try_erf(x)?;
            Ok(normal_cdf(x))
        }
        Func::Pdf => make_params(d.lambda, d.mu)?.pdf(x),
        Func::Cdf => make_params(d.lambda, d.mu)?.cdf(x),
        Func::Maxwell => maxwell_cdf(d.a, x),
        Func::MaxwellApprox => MaxwellApprox::fit(d.a, 1.0, DerivativeMatch::default())?.eval(x),
    }
}

fn fn_name(func: Func) -> String {
    func.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn run(cli: &Cli) -> std::result::Result<bool, Failure> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Eval { func, x, dist } => {
            let v = eval_func(*func, *x, dist)?;
            let mut w = sink(out)?;
            if cli.json {
                write_json(
                    w,
                    &envelope("eval", json!({ "fn": fn_name(*func), "x": x, "value": v })),
                )?;
            } else {
                writeln!(w, "{v:.16e}").map_err(io_err)?;
            }
            Ok(true)
        }
        Command::Tabulate {
            curve,
            func,
            range,
            steps,
            x,
            max_order,
            dist,
        } => {
            let table = tabulate(*curve, *func, range, steps, *x, *max_order, dist)?;
            emit_table("tabulate", &table, cli.json, out)?;
            Ok(true)
        }
        Command::Constants => constants(cli.json, out),
        Command::ChebFit { range, degree, nodes } => cheb_fit_cmd(range, *degree, *nodes, cli.json, out),
        Command::FitDist {
            target,
            x0,
            a,
            lambda,
            mu,
            derivative,
            freeze_mu,
        } => fit_dist(*target, *x0, *a, (*lambda, *mu), *derivative, *freeze_mu, cli.json, out),
        Command::IntegralsTable { kind, max } => integrals_table(*kind, *max, cli.json, out),
        Command::Verify { criterion } => verify(criterion, cli.json, out),
        Command::Sample { dist, seed, n } => {
            let draws = make_params(dist.lambda, dist.mu)?.sample(*seed, *n)?;
            let mut t = Table::new(["x"]);
            for d in draws {
                t.push(vec![Cell::Num(d)]);
            }
            emit_table("sample", &t, cli.json, out)?;
            Ok(true)
        }
    }
}

fn io_err(e: std::io::Error) -> Failure {
    Failure::Numeric(format!("write failed: {e}"))
}

fn tabulate(
    curve: Curve,
    func: Func,
    range: &str,
    steps: &[usize],
    x: f64,
    max_order: usize,
    dist: &DistArgs,
) -> std::result::Result<Table, Failure> {
    match curve {
        Curve::Function => {
            let r = parse_range(range, 3)?;
            let mut t = Table::new(["x".to_string(), fn_name(func)]);
            for xi in grid(r[0], r[1], r[2]) {
                t.push(vec![Cell::Num(xi), Cell::Num(eval_func(func, xi, dist)?)]);
            }
            Ok(t)
        }
        Curve::Maxwell => {
            let r = parse_range(range, 3)?;
            let approx = MaxwellApprox::fit(dist.a, 1.0, DerivativeMatch::default())?;
            let mut t = Table::new(["x", "exact", "approx", "abs_error"]);
            for xi in grid(r[0], r[1], r[2]) {
                let e = maxwell_cdf(dist.a, xi)?;
                let p = approx.eval(xi)?;
                t.push(vec![
                    Cell::Num(xi),
                    Cell::Num(e),
                    Cell::Num(p),
                    Cell::Num((p - e).abs()),
                ]);
            }
            Ok(t)
        }
        Curve::Euler => {
            if steps.is_empty() || steps.contains(&0) {
                return Err(Failure::Usage("--steps needs positive step counts".into()));
            }
            let mut t = Table::new(["steps", "h", "x", "euler", "exact", "abs_error"]);
            for &n in steps {
                let h = 1.0 / n as f64;
                let trace = euler_scheme(|a: f64| (-a * a).exp() * erf(a), 0.0, 0.0, h, n)?;
                for (xi, yi) in trace.samples {
                    let e = product_form(xi);
                    t.push(vec![
                        Cell::Int(n as i64),
                        Cell::Num(h),
                        Cell::Num(xi),
                        Cell::Num(yi),
                        Cell::Num(e),
                        Cell::Num((yi - e).abs()),
                    ]);
                }
            }
            Ok(t)
        }
        Curve::PartialSums => {
            if max_order == 0 || max_order > 200 {
                return Err(Failure::Usage("--max-order must lie in 1..=200".into()));
            }
            if !(x >= 0.0) {
                return Err(Failure::Usage(format!("partial sums need x >= 0, got {x}")));
            }
            let s = t_series(max_order)?;
            let exact = t_reference(x, &ToleranceSpec::quadrature())?;
            let mut t = Table::new(["order", "partial_sum", "reference", "abs_error"]);
            for n in 1..=max_order {
                let p = partial_sum(&s, x, n)?;
                t.push(vec![
                    Cell::Int(n as i64),
                    Cell::Num(p),
                    Cell::Num(exact),
                    Cell::Num((p - exact).abs()),
                ]);
            }
            Ok(t)
        }
    }
}

fn constants(as_json: bool, out: Option<&Path>) -> std::result::Result<bool, Failure> {
    let stored = t_infinity(InfinityMode::Stored)?;
    let quad = t_infinity(InfinityMode::Quadrature)?;
    let heur = t_infinity(InfinityMode::Heuristic)?;
    let prod = std::f64::consts::PI.sqrt() / 4.0;
    let t3 = t_smooth(3.0)?;
    let mut w = sink(out)?;
    if as_json {
        write_json(
            w,
            &envelope(
                "constants",
                json!({
                    "t_infinity_digits": T_INFINITY_DIGITS,
                    "t_infinity": stored,
                    "t_infinity_quadrature": quad,
                    "heuristic": heur,
                    "heuristic_minus_t_infinity": heur - stored,
                    "product_form_infinity": prod,
                    "t_at_3": t3,
                }),
            ),
        )?;
    } else {
        let rows = [
            ("t_infinity_digits", T_INFINITY_DIGITS.to_string()),
            ("t_infinity", format!("{stored:.16e}")),
            ("t_infinity_quadrature", format!("{quad:.16e}")),
            ("heuristic", format!("{heur:.16e}")),
            ("heuristic_minus_t_infinity", format!("{:.16e}", heur - stored)),
            ("product_form_infinity", format!("{prod:.16e}")),
            ("t_at_3", format!("{t3:.16e}")),
        ];
        for (k, v) in rows {
            writeln!(w, "{k} = {v}").map_err(io_err)?;
        }
    }
    Ok(true)
}

fn cheb_fit_cmd(
    range: &str,
    degree: usize,
    nodes: usize,
    as_json: bool,
    out: Option<&Path>,
) -> std::result::Result<bool, Failure> {
    let r = parse_range(range, 2)?;
    if r[0] < 0.0 {
        return Err(Failure::Usage("Chebyshev fits of T need a >= 0".into()));
    }
    let tol = ToleranceSpec::quadrature();
    let p = cheb_fit(|x| t_reference(x, &tol), r[0], r[1], degree, nodes)?;
    let mono = p.to_monomial()?;
    let l2 = l2_distance(
        |x| t_smooth(x).unwrap_or(f64::NAN),
        |x| p.eval(x),
        r[0],
        r[1],
        &l2_tolerance(),
    )?;
    if as_json {
        write_json(
            sink(out)?,
            &envelope(
                "cheb-fit",
                json!({
                    "approximant": p,
                    "monomial": { "coeffs": mono },
                    "nodes": nodes,
                    "l2_error": l2,
                }),
            ),
        )?;
    } else {
        let mut t = Table::new(["j", "chebyshev", "monomial"]);
        for (j, (c, m)) in p.coeffs.iter().zip(&mono).enumerate() {
            t.push(vec![Cell::Int(j as i64), Cell::Num(*c), Cell::Num(*m)]);
        }
        t.write_csv(sink(out)?)?;
        eprintln!("l2_error = {l2:.6e}");
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn fit_dist(
    target: Target,
    x0: f64,
    a: f64,
    init: (f64, f64),
    derivative: Deriv,
    freeze_mu: bool,
    as_json: bool,
    out: Option<&Path>,
) -> std::result::Result<bool, Failure> {
    let derivative = match derivative {
        Deriv::Unnormalized => DerivativeMatch::Unnormalized,
        Deriv::Normalized => DerivativeMatch::Normalized,
    };
    let opts = FitOptions {
        derivative,
        freeze_mu,
        ..FitOptions::default()
    };
    let (k, label) = match target {
        Target::Erf => (1.0, "erf".to_string()),
        Target::Maxwell => {
            if !(a > 0.0) {
                return Err(Failure::Usage(format!("Maxwell scale must be positive, got {a}")));
            }
            (1.0 / (std::f64::consts::SQRT_2 * a), format!("maxwell(a={a})"))
        }
    };
    let fit = fit_to_target(
        |x| erf(k * x),
        |x| 2.0 / std::f64::consts::PI.sqrt() * k * (-(k * x).powi(2)).exp(),
        x0,
        init,
        &opts,
    )?;
    let record = FitRecord::new(&fit, label, x0);
    if as_json {
        let mut body = serde_json::to_value(&record).map_err(Error::from)?;
        body["inverse_c"] = json!(1.0 / fit.c);
        body["iterations"] = json!(fit.iterations);
        write_json(sink(out)?, &envelope("fit-dist", body))?;
    } else {
        let mut t = Table::new(["lambda", "mu", "c", "inverse_c", "target", "fit_point", "residual"]);
        t.push(vec![
            Cell::Num(record.lambda),
            Cell::Num(record.mu),
            Cell::Num(record.c),
            Cell::Num(1.0 / record.c),
            Cell::Text(record.target.clone()),
            Cell::Num(record.fit_point),
            Cell::Num(record.residual),
        ]);
        t.write_csv(sink(out)?)?;
    }
    Ok(true)
}

fn integrals_table(
    kind: TableKind,
    max: usize,
    as_json: bool,
    out: Option<&Path>,
) -> std::result::Result<bool, Failure> {
    let limit = 8;
    if max > limit {
        return Err(Failure::Usage(format!("--max is limited to {limit}")));
    }
    let rows: Vec<ComparisonRow> = (0..=max)
        .map(|i| match kind {
            TableKind::I2k => i2k_forms(i),
            TableKind::In => i_n_forms(i),
        })
        .collect::<Result<_>>()?;
    if as_json {
        let name = match kind {
            TableKind::I2k => "i2k",
            TableKind::In => "in",
        };
        write_json(
            sink(out)?,
            &envelope("integrals-table", json!({ "kind": name, "rows": rows })),
        )?;
    } else {
        tspecial::integrals::write_csv(&rows, sink(out)?)?;
    }
    Ok(true)
}

fn verify(only: &[u8], as_json: bool, out: Option<&Path>) -> std::result::Result<bool, Failure> {
    let report = if only.is_empty() { run_all() } else { run_selected(only) };
    let mut w = sink(out)?;
    if as_json {
        let mut v = serde_json::to_value(&report).map_err(Error::from)?;
        v["command"] = json!("verify");
        write_json(w, &v)?;
    } else {
        for c in &report.criteria {
            for ch in &c.checks {
                writeln!(w, "{}", line(c.id, ch)).map_err(io_err)?;
            }
        }
        let failed = report.checks().filter(|c| !c.pass).count();
        writeln!(w, "{} checks, {} failed", report.checks().count(), failed).map_err(io_err)?;
    }
    Ok(report.pass)
}

fn line(id: u8, c: &Check) -> String {
    let verdict = if c.pass { "PASS" } else { "FAIL" };
    let mut s = format!(
        "[{id:02}] {verdict} {:<34} measured {:.12e} expected {:.12e} ({:?}, tol {:.1e})",
        c.name, c.measured, c.expected, c.comparison, c.tolerance
    );
    if let Some(n) = &c.note {
        s.push_str(&format!(" - {n}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        assert_eq!(grid(0.0, 10.0, 0.01).len(), 1001);
        assert_eq!(grid(0.0, 1.0, 0.3).len(), 4);
        assert_eq!(grid(0.0, 1.0, 0.1).len(), 11);
        assert_eq!(grid(2.0, 2.0, 0.5), vec![2.0]);
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0:1.5", 2).ok(), Some(vec![0.0, 1.5]));
        assert_eq!(parse_range(" 0 : 2 : 0.5", 3).ok(), Some(vec![0.0, 2.0, 0.5]));
        for bad in ["1:0:0.1", "0:1:0", "0:1:-1", "a:b:c", "0:1", "0:inf:1"] {
            assert!(matches!(parse_range(bad, 3), Err(Failure::Usage(_))), "{bad}");
        }
        assert!(parse_range("1:1", 2).is_err());
    }

    #[test]
    fn verify_line_shape() {
        let c = Check::abs("probe", 1.0, 1.0 + 1e-13, 1e-12);
        let s = line(3, &c);
        assert!(s.starts_with("[03] PASS probe"), "{s}");
        assert!(s.contains("measured 1.000000000000e0"), "{s}");
    }
}

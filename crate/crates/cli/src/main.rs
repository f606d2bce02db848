//! `bernoulli-gumbel`: exact number tables, identity verification reports
//! and Gompertz derivative evaluation from the command line.

mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use bernoulli_gumbel::exact_numbers::{bernoulli_table, stirling2_row};
use bernoulli_gumbel::gompertz::derivative_scale;
use bernoulli_gumbel::quadrature::{
    verify_general_derivative_integral, verify_grosset_veselov_quadrature,
    verify_gumbel_bernoulli_quadrature, verify_log_moment_quadrature, verify_moment_quadrature,
    GENERAL_DERIVATIVE_MAX_K, GUMBEL_QUAD_MAX_K, MOMENT_QUAD_MAX_N, SOLITON_QUAD_MAX_K,
};
use bernoulli_gumbel::report::ReportValue;
use bernoulli_gumbel::verify::{
    verify_binomial_bernoulli, verify_faulhaber, verify_grosset_veselov, verify_gumbel_bernoulli,
    verify_moment_routes, verify_stirling_bernoulli, verify_zeta_even, ZETA_MIN_TERMS,
};
use bernoulli_gumbel::{
    derivative_eval, grosset_veselov_exact, BigInt, BigRational, DoubleDouble, ExpSum,
    GompertzParams, Identity, Precision, Real, VerificationReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{Format, Manifest, TableRow};

const MAX_BERNOULLI: u32 = 1000;
const MAX_STIRLING: u32 = 200;
const MAX_GV: u32 = 60;
const MAX_DERIVATIVE: u32 = 30;

#[derive(Parser, Debug)]
#[command(name = "bernoulli-gumbel", version, about)]
struct Cli {
    /// Output format; tables default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Absolute tolerance for floating checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Arithmetic for floating computations.
    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Extended)]
    precision: PrecisionArg,
    /// Also write the JSON run manifest to this file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum PrecisionArg {
    Double,
    Extended,
}

impl From<PrecisionArg> for Precision {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Extended => Precision::Extended,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact tables of Bernoulli numbers, Stirling numbers or soliton integrals.
    Table(TableArgs),
    /// Check an identity over a range of parameters.
    Verify(VerifyArgs),
    /// Evaluate the n-th derivative of the Gompertz curve.
    Derivative(DerivativeArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum TableKind {
    Bernoulli,
    Stirling,
    Gv,
}

#[derive(Args, Debug)]
struct TableArgs {
    kind: TableKind,
    /// Largest index (all rows up to it for stirling).
    #[arg(long)]
    max: Option<u32>,
    /// A single Stirling row.
    #[arg(long, conflicts_with = "max")]
    n: Option<u32>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_parser = parse_identity)]
    identity: Identity,
    #[arg(long)]
    k_max: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    m_max: Option<u64>,
    /// Partial-sum length for zeta.
    #[arg(long, default_value_t = 1_000_000)]
    terms: u64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1.0)]
    umax: f64,
}

#[derive(Args, Debug)]
struct DerivativeArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1.0)]
    umax: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t: f64,
}

fn parse_identity(s: &str) -> Result<Identity, String> {
    s.parse()
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Runs the command and emits its output; `Ok(passed)`.
fn run(cli: &Cli) -> Result<bool, Failure> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    let precision: Precision = cli.precision.into();
    let (name, mut parameters, body, default_format) = match &cli.command {
        Command::Table(args) => {
            let (params, rows) = table(args)?;
            ("table", params, Body::Table(rows), Format::Csv)
        }
        Command::Verify(args) => {
            let (params, reports) = verify(args, cli.tol, precision)?;
            ("verify", params, Body::Reports(reports), Format::Json)
        }
        Command::Derivative(args) => {
            let (params, record) = derivative(args, precision)?;
            ("derivative", params, Body::Derivative(record), Format::Json)
        }
    };
    let format = cli.format.unwrap_or(default_format);
    parameters.insert("format".into(), json!(format.as_str()));
    parameters.insert("tol".into(), json!(cli.tol));

    let passed = match &body {
        Body::Reports(reports) => reports.iter().all(|r| r.passed),
        _ => true,
    };
    if let Body::Reports(reports) = &body {
        for r in reports.iter().filter(|r| r.note.is_some()) {
            eprintln!(
                "note: {} {}: {}",
                r.identity,
                r.parameter,
                r.note.as_deref().unwrap_or_default()
            );
        }
    }

    let manifest = Manifest::new(name, parameters, precision, body.to_json());
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let written = match format {
        Format::Json => manifest.write_json(&mut out),
        Format::Csv => body.write_csv(&mut out),
    };
    written.map_err(|e| Failure::Runtime(format!("writing output: {e}")))?;
    if let Some(path) = &cli.manifest {
        let file = std::fs::File::create(path)
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
        manifest
            .write_json(file)
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(passed)
}

enum Body {
    Table(Vec<TableRow>),
    Reports(Vec<VerificationReport>),
    Derivative(DerivativeRecord),
}

impl Body {
    fn to_json(&self) -> Value {
        match self {
            Body::Table(rows) => serde_json::to_value(rows),
            Body::Reports(reports) => serde_json::to_value(reports),
            Body::Derivative(record) => serde_json::to_value([record]),
        }
        .expect("output types serialize")
    }

    fn write_csv<W: std::io::Write>(&self, out: W) -> std::io::Result<()> {
        match self {
            Body::Table(rows) => output::write_table_csv(out, rows),
            Body::Reports(reports) => output::write_reports_csv(out, reports),
            Body::Derivative(record) => output::write_derivative_csv(out, record),
        }
    }
}

type Parameters = BTreeMap<String, Value>;

fn table(args: &TableArgs) -> Result<(Parameters, Vec<TableRow>), Failure> {
    let mut params = Parameters::new();
    params.insert(
        "kind".into(),
        json!(format!("{:?}", args.kind).to_lowercase()),
    );
    let rows = match args.kind {
        TableKind::Bernoulli => {
            if args.n.is_some() {
                return Err(usage("--n applies to stirling tables only"));
            }
            let max = args.max.unwrap_or(12);
            if max > MAX_BERNOULLI {
                return Err(usage(format!("--max must be <= {MAX_BERNOULLI}")));
            }
            params.insert("max".into(), json!(max));
            bernoulli_table(max)
                .iter()
                .enumerate()
                .map(|(i, b)| TableRow::new(None, i as u64, b))
                .collect()
        }
        TableKind::Gv => {
            if args.n.is_some() {
                return Err(usage("--n applies to stirling tables only"));
            }
            let max = args.max.unwrap_or(10);
            if !(1..=MAX_GV).contains(&max) {
                return Err(usage(format!("--max must be in 1..={MAX_GV}")));
            }
            params.insert("max".into(), json!(max));
            (1..=max)
                .into_par_iter()
                .map(|k| {
                    let v = grosset_veselov_exact(k).expect("k >= 1");
                    TableRow::new(None, k as u64, &v)
                })
                .collect()
        }
        TableKind::Stirling => {
            let single = |n: u32, with_n: bool| -> Vec<TableRow> {
                stirling2_row(n)
                    .into_iter()
                    .enumerate()
                    .map(|(k, s)| {
                        let v = BigRational::from_integer(BigInt::from(s));
                        TableRow::new(with_n.then_some(n as u64), k as u64, &v)
                    })
                    .collect()
            };
            match (args.n, args.max) {
                (Some(n), _) => {
                    if n > MAX_STIRLING {
                        return Err(usage(format!("--n must be <= {MAX_STIRLING}")));
                    }
                    params.insert("n".into(), json!(n));
                    single(n, false)
                }
                (None, max) => {
                    let max = max.unwrap_or(10);
                    if max > MAX_STIRLING {
                        return Err(usage(format!("--max must be <= {MAX_STIRLING}")));
                    }
                    params.insert("max".into(), json!(max));
                    (0..=max).flat_map(|n| single(n, true)).collect()
                }
            }
        }
    };
    Ok((params, rows))
}

/// Inclusive range from a `--*-max` flag, rejecting empty or oversized ranges.
fn range_max(
    flag: &str,
    given: Option<u32>,
    default: u32,
    lo: u32,
    limit: u32,
) -> Result<u32, Failure> {
    let max = given.unwrap_or(default);
    if max < lo.max(1) {
        return Err(usage(format!("--{flag} must be at least {}", lo.max(1))));
    }
    if max > limit {
        return Err(usage(format!(
            "--{flag} must be <= {limit} for this identity"
        )));
    }
    Ok(max)
}

fn check<T>(r: bernoulli_gumbel::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| usage(e.to_string()))
}

fn par_reports<F>(items: Vec<u32>, f: F) -> Result<Vec<VerificationReport>, Failure>
where
    F: Fn(u32) -> bernoulli_gumbel::Result<VerificationReport> + Sync + Send,
{
    // Indexed parallel iterators preserve input order on collect.
    items
        .into_par_iter()
        .map(f)
        .collect::<Result<_, _>>()
        .map_err(|e| usage(e.to_string()))
}

fn verify(
    args: &VerifyArgs,
    tol: f64,
    precision: Precision,
) -> Result<(Parameters, Vec<VerificationReport>), Failure> {
    let mut params = Parameters::new();
    params.insert("identity".into(), json!(args.identity.name()));
    let gompertz = || -> Result<GompertzParams, Failure> {
        check(GompertzParams::new(args.q, args.c, args.umax))
    };
    let reports = match args.identity {
        Identity::Gumbel => par_reports(
            k_range(&mut params, args, 20, 200)?,
            verify_gumbel_bernoulli,
        )?,
        Identity::GumbelQuad => {
            par_reports(k_range(&mut params, args, 10, GUMBEL_QUAD_MAX_K)?, |k| {
                verify_gumbel_bernoulli_quadrature(k, tol, precision)
            })?
        }
        Identity::Soliton => {
            par_reports(k_range(&mut params, args, 10, 60)?, verify_grosset_veselov)?
        }
        Identity::SolitonQuad => {
            par_reports(k_range(&mut params, args, 6, SOLITON_QUAD_MAX_K)?, |k| {
                verify_grosset_veselov_quadrature(k, tol, precision)
            })?
        }
        Identity::GeneralDerivative => {
            let ks = k_range(&mut params, args, 4, GENERAL_DERIVATIVE_MAX_K)?;
            let p = gompertz()?;
            insert_gompertz(&mut params, &p);
            par_reports(ks, |k| {
                verify_general_derivative_integral(k, &p, tol, precision)
            })?
        }
        Identity::StirlingBernoulli => {
            let n = n_range(&mut params, args, 50, 1, 1000)?;
            par_reports(n, verify_stirling_bernoulli)?
        }
        Identity::BinomialBernoulli => {
            let n = n_range(&mut params, args, 30, 1, 300)?;
            par_reports(n, verify_binomial_bernoulli)?
        }
        Identity::Zeta => {
            if args.terms < ZETA_MIN_TERMS {
                return Err(usage(format!("--terms must be at least {ZETA_MIN_TERMS}")));
            }
            let n = n_range(&mut params, args, 5, 1, 20)?;
            params.insert("terms".into(), json!(args.terms));
            par_reports(n, |n| verify_zeta_even(n, args.terms, tol))?
        }
        Identity::Moment => {
            let n = n_range(&mut params, args, 8, 0, MOMENT_QUAD_MAX_N)?;
            let p = gompertz()?;
            insert_gompertz(&mut params, &p);
            par_reports(n, |n| verify_moment_quadrature(n, &p, tol, precision))?
        }
        Identity::LogMoment => {
            let n = n_range(&mut params, args, 8, 0, 40)?;
            let u_max = gompertz()?.u_max();
            params.insert("umax".into(), json!(u_max));
            par_reports(n, |n| {
                verify_log_moment_quadrature(n, u_max, tol, precision)
            })?
        }
        Identity::MomentRoutes => {
            let n = n_range(&mut params, args, 30, 0, 200)?;
            let u_max = gompertz()?.u_max();
            params.insert("umax".into(), json!(u_max));
            let exact = BigRational::from_float(u_max).expect("validated finite");
            par_reports(n, |n| verify_moment_routes(n, &exact))?
        }
        Identity::Faulhaber => {
            let n_max = range_max("n-max", args.n_max, 10, 1, 200)?;
            let m_max = args.m_max.unwrap_or(20);
            if !(2..=10_000).contains(&m_max) {
                return Err(usage("--m-max must be in 2..=10000"));
            }
            params.insert("n_max".into(), json!(n_max));
            params.insert("m_max".into(), json!(m_max));
            let pairs: Vec<(u64, u32)> = (2..=m_max)
                .flat_map(|m| (1..=n_max).map(move |n| (m, n)))
                .collect();
            pairs
                .into_par_iter()
                .map(|(m, n)| verify_faulhaber(m, n))
                .collect::<Result<_, _>>()
                .map_err(|e| usage(e.to_string()))?
        }
    };
    Ok((params, reports))
}

/// `1..=k_max` for identities indexed by `k`.
fn k_range(
    params: &mut Parameters,
    args: &VerifyArgs,
    default: u32,
    limit: u32,
) -> Result<Vec<u32>, Failure> {
    let k = range_max("k-max", args.k_max, default, 1, limit)?;
    params.insert("k_max".into(), json!(k));
    Ok((1..=k).collect())
}

/// `lo..=n_max` for identities indexed by `n`.
fn n_range(
    params: &mut Parameters,
    args: &VerifyArgs,
    default: u32,
    lo: u32,
    limit: u32,
) -> Result<Vec<u32>, Failure> {
    let n = range_max("n-max", args.n_max, default, lo, limit)?;
    params.insert("n_max".into(), json!(n));
    Ok((lo..=n).collect())
}

fn insert_gompertz(params: &mut Parameters, p: &GompertzParams) {
    params.insert("q".into(), json!(p.q()));
    params.insert("c".into(), json!(p.c()));
    params.insert("umax".into(), json!(p.u_max()));
}

#[derive(Debug, serde::Serialize)]
pub struct DerivativeRecord {
    n: u32,
    t: f64,
    q: f64,
    c: f64,
    u_max: f64,
    pub value: ReportValue,
    /// Scale used for relative comparisons, `max(|value|, q^n u_max)`.
    scale: f64,
    /// `(k, a_k)` with `u^(n) = q^n sum_k a_k u log^k(u_max/u)`.
    pub log_poly: Vec<(u32, String)>,
    /// `(j, a_j c^j)` with `u^(n) = q^n u_max e^{-v} sum_j a_j c^j e^{-jqt}`.
    pub exp_sum: Vec<(u32, f64)>,
}

fn derivative(
    args: &DerivativeArgs,
    precision: Precision,
) -> Result<(Parameters, DerivativeRecord), Failure> {
    if args.n > MAX_DERIVATIVE {
        return Err(usage(format!("--n must be <= {MAX_DERIVATIVE}")));
    }
    if !args.t.is_finite() {
        return Err(usage("--t must be finite"));
    }
    let p = check(GompertzParams::new(args.q, args.c, args.umax))?;
    let value = match precision {
        Precision::Double => ReportValue::decimal(derivative_eval(args.n, &p, args.t)),
        Precision::Extended => {
            ReportValue::decimal(derivative_eval(args.n, &p, DoubleDouble::from_f64(args.t)))
        }
    };
    let (log_poly, exp_sum) = if args.n == 0 {
        (Vec::new(), Vec::new())
    } else {
        let sum = check(ExpSum::new(args.n, &p))?;
        let coeffs = sum
            .log_poly()
            .coeffs()
            .map(|(k, a)| (k, a.to_string()))
            .collect();
        (coeffs, sum.terms())
    };
    let mut params = Parameters::new();
    params.insert("n".into(), json!(args.n));
    params.insert("t".into(), json!(args.t));
    insert_gompertz(&mut params, &p);
    let record = DerivativeRecord {
        n: args.n,
        t: args.t,
        q: p.q(),
        c: p.c(),
        u_max: p.u_max(),
        scale: derivative_scale(args.n, &p, value.as_f64()),
        value,
        log_poly,
        exp_sum,
    };
    Ok((params, record))
}

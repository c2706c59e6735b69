use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matcurv::{
    build_extremizer, injectivity_lower_bound, pair_curvature, random_tangent_pair,
    sectional_curvature, verify_attainment, CurvatureReport, ExtremizerKind, Manifold, Matrix,
    MetricKind,
};
use matcurv_cli::checks::{
    canonical_bound_check, euclidean_bounds_check, fuzz_inequality, geodesic_check,
    InequalityFamily,
};
use matcurv_cli::experiments::{
    probe_conjecture, run_exp1, run_exp2, run_exp3_mix, run_exp3_surface, EXP2_DEFAULT_MAX_P,
    EXP2_LARGE_MAX_P,
};
use matcurv_cli::input::read_pair;
use matcurv_cli::{emit, CliError, Format};

#[derive(Parser)]
#[command(
    name = "matcurv",
    version,
    about = "Sectional curvature of SO(n), Stiefel and Grassmann manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sectional curvature of a random or file-supplied section.
    Curvature(CurvatureArgs),
    /// Build an extremal section and evaluate its curvature.
    Extremizer(ExtremizerArgs),
    /// Check the scalar bound functions and the injectivity radius bound.
    Bounds(BoundsArgs),
    /// Fuzz a family of matrix inequalities.
    Inequality(InequalityArgs),
    /// Run a numerical experiment and write its records.
    Experiment(ExperimentArgs),
    /// Closed geodesic checks.
    Geodesic(GeodesicArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricFamily {
    Canonical,
    Euclidean,
}

#[derive(Args)]
struct CurvatureArgs {
    #[arg(long)]
    manifold: String,
    #[arg(long, value_enum, default_value = "canonical")]
    metric: MetricFamily,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Tangent-pair file (see README); a random pair is drawn otherwise.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExtremizerArgs {
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Exit with status 4 unless the expected value is attained.
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsWhich {
    #[value(name = "appendixA")]
    AppendixA,
    Euclidean,
    Injectivity,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    which: BoundsWhich,
    #[arg(long, default_value_t = 400)]
    grid: usize,
    /// Length of a shortest closed geodesic, for the injectivity bound.
    #[arg(long)]
    geodesic_length: Option<f64>,
}

#[derive(Args)]
struct InequalityArgs {
    #[arg(long)]
    which: String,
    #[arg(long, default_value_t = 10_000)]
    fuzz: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Exp1,
    Exp2,
    #[value(name = "exp3-surface")]
    Exp3Surface,
    #[value(name = "exp3-mix")]
    Exp3Mix,
    Conjecture,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    name: ExperimentName,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trials per point (exp2 default 100, conjecture default 100000).
    #[arg(long)]
    trials: Option<usize>,
    /// Allow exp2 block sizes up to 1000.
    #[arg(long)]
    allow_large: bool,
    /// exp1: n (default 20); conjecture: n of St(n, n - 1) (default 4).
    #[arg(long)]
    n: Option<usize>,
    /// exp1 block size.
    #[arg(long, default_value_t = 10)]
    p: usize,
    #[arg(long, default_value_t = 50)]
    steps_per_parameter: usize,
    /// Transpose B1 in exp1 (Euclidean minimum variant).
    #[arg(long)]
    transpose_b1: bool,
    #[arg(long, default_value = "2,4,8,16,32,64,128", value_delimiter = ',')]
    p_values: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    grid: usize,
    #[arg(long, default_value_t = 100)]
    steps: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeodesicName {
    St42,
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(value_enum)]
    name: GeodesicName,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

fn matrix_json(m: &Matrix) -> Value {
    (0..m.rows())
        .map(|i| m.row(i).to_vec())
        .collect::<Vec<_>>()
        .into()
}

fn report_json(r: &CurvatureReport<f64>, gram_residual: Option<f64>) -> Value {
    json!({
        "metric": r.metric.name(),
        "n": r.dims.0,
        "p": r.dims.1,
        "value": r.value,
        "terms": r.terms,
        "trace_form": r.trace_form,
        "gram_residual": gram_residual,
    })
}

fn print_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("json value");
    // a closed pipe downstream is not an error
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn curvature(a: CurvatureArgs) -> Result<(), CliError> {
    let manifold: Manifold = a.manifold.parse()?;
    let metric = MetricKind::for_manifold(manifold, matches!(a.metric, MetricFamily::Euclidean))?;
    let out = match a.input {
        Some(path) => {
            let (x, y) = read_pair(manifold, &path)?;
            let (n, p) = x.dims();
            if y.dims() != (n, p) {
                return Err(CliError::Usage(
                    "the two tangent vectors have different shapes".into(),
                ));
            }
            if a.n.is_some_and(|v| v != n) || a.p.is_some_and(|v| v != p) {
                return Err(CliError::Usage(format!(
                    "--n/--p disagree with the input file, which describes n = {n}, p = {p}"
                )));
            }
            let r = sectional_curvature(manifold, metric, &x, &y)?;
            let mut v = report_json(&r, None);
            v["source"] = json!(path.display().to_string());
            v
        }
        None => {
            let n =
                a.n.ok_or_else(|| CliError::Usage("--n is required without --input".into()))?;
            let p = match manifold {
                Manifold::So => a.p.unwrap_or(n),
                _ => {
                    a.p.ok_or_else(|| CliError::Usage("--p is required without --input".into()))?
                }
            };
            let pair = random_tangent_pair::<f64>(manifold, metric, n, p, a.seed)?;
            let r = pair_curvature(&pair)?;
            let mut v = report_json(&r, Some(pair.gram_residual()));
            v["source"] = json!(format!("random pair, seed {}", a.seed));
            v
        }
    };
    print_json(&out);
    Ok(())
}

fn extremizer(a: ExtremizerArgs) -> Result<(), CliError> {
    let kind: ExtremizerKind = a.kind.parse()?;
    let (n0, p0) = kind.min_dims();
    let n = a.n.unwrap_or(n0);
    let p = a.p.unwrap_or(if kind == ExtremizerKind::So4CommutatorMax {
        n
    } else {
        p0
    });
    let att = verify_attainment::<f64>(kind, n, p)?;
    let pair = build_extremizer::<f64>(kind, n, p)?;
    print_json(&json!({
        "kind": kind.tag(),
        "metric": kind.metric().name(),
        "n": n,
        "p": p,
        "expected": att.expected,
        "computed": att.computed,
        "pass": att.pass,
        "first": matrix_json(&pair.first().embed_skew()),
        "second": matrix_json(&pair.second().embed_skew()),
    }));
    if a.verify && !att.pass {
        return Err(CliError::Verification(format!(
            "{kind}: expected {}, computed {}",
            att.expected, att.computed
        )));
    }
    Ok(())
}

fn bounds(a: BoundsArgs) -> Result<(), CliError> {
    match a.which {
        BoundsWhich::AppendixA => {
            let c = canonical_bound_check(a.grid, 1000)?;
            print_json(&serde_json::to_value(&c).expect("plain struct"));
            if !c.pass {
                return Err(CliError::Verification(
                    "canonical bound function check failed".into(),
                ));
            }
        }
        BoundsWhich::Euclidean => {
            let c = euclidean_bounds_check(a.grid)?;
            print_json(&serde_json::to_value(&c).expect("plain struct"));
            if !c.pass {
                return Err(CliError::Verification(
                    "euclidean bound functions leave [-1/2, 1]".into(),
                ));
            }
        }
        BoundsWhich::Injectivity => {
            let entry = |metric| -> Result<Value, CliError> {
                let b = injectivity_lower_bound::<f64>(metric, a.geodesic_length)?;
                Ok(json!({
                    "metric": MetricKind::name(metric),
                    "value": b.value,
                    "curvature_branch": b.curvature_branch,
                    "geodesic_branch": b.geodesic_branch,
                }))
            };
            print_json(&json!({
                "geodesic_length": a.geodesic_length,
                "bounds": [entry(MetricKind::StiefelCanonical)?, entry(MetricKind::StiefelEuclidean)?],
            }));
        }
    }
    Ok(())
}

fn inequality(a: InequalityArgs) -> Result<(), CliError> {
    let family: InequalityFamily = a.which.parse()?;
    let s = fuzz_inequality(family, a.fuzz, a.seed)?;
    print_json(&serde_json::to_value(&s).expect("plain struct"));
    if !s.passed() {
        return Err(CliError::Verification(format!(
            "{} violations, {} refined bounds above classic",
            s.violations, s.refined_above_classic
        )));
    }
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Result<(), CliError> {
    let format: Format = a.format.parse()?;
    let records = match a.name {
        ExperimentName::Exp1 => run_exp1(
            a.n.unwrap_or(20),
            a.p,
            a.steps_per_parameter,
            a.transpose_b1,
        )?,
        ExperimentName::Exp2 => {
            let max_p = if a.allow_large {
                EXP2_LARGE_MAX_P
            } else {
                EXP2_DEFAULT_MAX_P
            };
            run_exp2(&a.p_values, a.trials.unwrap_or(100), a.seed, max_p)?
        }
        ExperimentName::Exp3Surface => run_exp3_surface(a.grid)?,
        ExperimentName::Exp3Mix => run_exp3_mix(a.steps)?,
        ExperimentName::Conjecture => {
            vec![
                probe_conjecture(a.n.unwrap_or(4), a.trials.unwrap_or(100_000), a.seed)?
                    .to_record(),
            ]
        }
    };
    emit(&records, format, a.out.as_deref())
}

fn geodesic(a: GeodesicArgs) -> Result<(), CliError> {
    let GeodesicName::St42 = a.name;
    let g = geodesic_check(a.samples)?;
    print_json(&serde_json::to_value(&g).expect("plain struct"));
    if !g.pass {
        return Err(CliError::Verification(
            "geodesic is not closed on St(4, 2)".into(),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Curvature(a) => curvature(a),
        Command::Extremizer(a) => extremizer(a),
        Command::Bounds(a) => bounds(a),
        Command::Inequality(a) => inequality(a),
        Command::Experiment(a) => experiment(a),
        Command::Geodesic(a) => geodesic(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("matcurv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

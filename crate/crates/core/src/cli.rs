//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure (rank mismatch
//! or a failed factorization), 4 residual above `1e-8`, 5 fuzz failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::Error;
use crate::fuzz::{run_fuzz, FuzzConfig, FuzzSummary};
use crate::hermitian::{max_abs, max_abs_diff, CMatrix, Tolerances};
use crate::io::CirclePoint;
use crate::realization::{realize, sp_via_realization};
use crate::schwarz_pick::{boundary_jets, default_schedule, sp_boundary_radial, sp_boundary_structured};
use crate::uniqueness::{decide, half_orders, Certificate, ContactProblem, DecideOptions, Tag, Verdict};

pub const SCHEMA: u32 = 1;
/// Residual above which `analyze` and `crosscheck` exit with code 4.
pub const RESIDUAL_LIMIT: f64 = 1e-8;
/// Radius of the fixed radial probe reported by `crosscheck`.
pub const PROBE_RADIUS: f64 = 1.0 - 1e-5;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_RESIDUAL: i32 = 4;
pub const EXIT_FUZZ: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "boundary-pick",
    version,
    about = "Boundary interpolation uniqueness for finite Blaschke products"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Relative eigenvalue cutoff for numerical rank.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Relative threshold for positive (semi)definiteness.
    #[arg(long, global = true)]
    pub tol_pd: Option<f64>,
    /// Radial schedule uses radii 1 - 2^-m for m = 4..=depth.
    #[arg(long, global = true, default_value_t = 20)]
    pub radial_depth: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide uniqueness for a problem file and print the certificate.
    Analyze { file: PathBuf },
    /// Compare the structured, realization and radial Schwarz-Pick routes.
    Crosscheck { file: PathBuf },
    /// Check the rank law and route agreement on random instances.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        degree_max: usize,
        #[arg(long, default_value_t = 3)]
        points_max: usize,
        #[arg(long, default_value_t = 3)]
        order_max: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub rank: Option<f64>,
    pub pd: Option<f64>,
}

/// Problem file: `{"blaschke": {...}, "points": [...], "orders": [m_i], "tolerances": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub blaschke: BlaschkeProduct,
    pub points: Vec<CirclePoint>,
    pub orders: Vec<usize>,
    #[serde(default)]
    pub tolerances: Option<ToleranceOverrides>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("problem file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn contact_problem(&self) -> Result<ContactProblem, Error> {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| p.resolve(i))
            .collect::<Result<Vec<_>, _>>()?;
        ContactProblem::new(self.blaschke.clone(), points, self.orders.clone())
    }
}

/// Route residuals for one set of orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteResiduals {
    /// `max |structured - realization|` entrywise.
    pub structured_vs_realization: f64,
    pub structured_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialResidual {
    pub radius: f64,
    /// `max |structured - radial|` entrywise.
    pub residual: f64,
    /// `residual / max(1, max|structured|)`.
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub problem: ContactProblem,
    pub verdict: Verdict,
    pub routes: RouteResiduals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    #[serde(with = "crate::io::pairs")]
    pub points: Vec<Complex64>,
    pub orders: Vec<usize>,
    #[serde(with = "crate::io::matrix")]
    pub structured: CMatrix,
    pub routes: RouteResiduals,
    /// Last iterate of the radial schedule.
    pub radial: RadialResidual,
    pub radial_converged: bool,
    pub radial_successive_differences: Vec<f64>,
    /// Single radial evaluation at `1 - 1e-5`.
    pub probe: RadialResidual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub exit_code: i32,
    pub message: String,
}

/// Top-level report; exactly one of the payload fields is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analyze: Option<AnalyzeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crosscheck: Option<CrosscheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzz: Option<FuzzSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    pub wall_time_seconds: f64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            schema: SCHEMA,
            command: command.into(),
            analyze: None,
            crosscheck: None,
            fuzz: None,
            error: None,
            wall_time_seconds: 0.0,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if let Some(e) = &self.error {
            return e.exit_code;
        }
        if let Some(a) = &self.analyze {
            if a.verdict.residual() > RESIDUAL_LIMIT || a.routes.structured_vs_realization > RESIDUAL_LIMIT {
                return EXIT_RESIDUAL;
            }
        }
        if let Some(c) = &self.crosscheck {
            if !(c.routes.structured_vs_realization <= RESIDUAL_LIMIT) {
                return EXIT_RESIDUAL;
            }
        }
        if let Some(f) = &self.fuzz {
            if !f.passed() {
                return EXIT_FUZZ;
            }
        }
        EXIT_OK
    }
}

pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::ZeroOnOrOutsideDisk { .. }
        | Error::ConstantNotUnimodular(_)
        | Error::PointOffCircle { .. }
        | Error::PointOutsideDisk { .. }
        | Error::NonFinite(_)
        | Error::PoleEvaluation { .. }
        | Error::CoincidentPoints(..)
        | Error::InsufficientJet { .. }
        | Error::ZeroLeadingValue(_)
        | Error::InvalidInput(_) => EXIT_INVALID,
        Error::RootFindingFailure(_)
        | Error::SingularResolvent(_)
        | Error::DegenerateDenominator
        | Error::PrincipalNotPD
        | Error::ConvergenceFailure
        | Error::RankMismatch { .. } => EXIT_NUMERICAL,
    }
}

/// Defaults, overridden by the file's `tolerances`, overridden by `rank` and `pd`.
pub fn resolve_tolerances(
    file: Option<&ToleranceOverrides>,
    rank: Option<f64>,
    pd: Option<f64>,
) -> Result<Tolerances, Error> {
    let mut t = Tolerances::default();
    if let Some(o) = file {
        t.rank = o.rank.unwrap_or(t.rank);
        t.pd = o.pd.unwrap_or(t.pd);
    }
    t.rank = rank.unwrap_or(t.rank);
    t.pd = pd.unwrap_or(t.pd);
    for v in [t.rank, t.pd] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerance {v} must be finite and nonnegative"
            )));
        }
    }
    Ok(t)
}

fn tolerances(cli: &Cli, file: Option<&ProblemFile>) -> Result<Tolerances, Error> {
    resolve_tolerances(file.and_then(|f| f.tolerances.as_ref()), cli.tol_rank, cli.tol_pd)
}

fn route_residuals(
    b: &BlaschkeProduct,
    points: &[Complex64],
    orders: &[usize],
) -> Result<(CMatrix, RouteResiduals), Error> {
    let structured = sp_boundary_structured(&boundary_jets(b, points, orders)?, orders)?;
    let realized = sp_via_realization(&realize(b), points, orders)?;
    let residuals = RouteResiduals {
        structured_vs_realization: max_abs_diff(&structured.flat, &realized.flat),
        structured_norm: max_abs(&structured.flat),
    };
    Ok((structured.flat, residuals))
}

fn radial_residual(structured: &CMatrix, radial: &CMatrix, radius: f64) -> RadialResidual {
    let residual = max_abs_diff(structured, radial);
    RadialResidual {
        radius,
        residual,
        relative: residual / max_abs(structured).max(1.0),
    }
}

pub fn analyze(file: &ProblemFile, tolerances: Tolerances) -> Result<AnalyzeReport, Error> {
    let problem = file.contact_problem()?;
    let verdict = decide(
        &problem,
        &DecideOptions {
            tolerances,
            ..DecideOptions::default()
        },
    )?;
    let (_, routes) = route_residuals(&problem.b, &problem.points, &verdict.k)?;
    Ok(AnalyzeReport {
        problem,
        verdict,
        routes,
    })
}

/// Routes compared at `k_i = floor((m_i + 1) / 2)` from the file's contact orders.
pub fn crosscheck(file: &ProblemFile, radial_depth: u32) -> Result<CrosscheckReport, Error> {
    let problem = file.contact_problem()?;
    let orders = half_orders(&problem.contact_orders);
    let (structured, routes) = route_residuals(&problem.b, &problem.points, &orders)?;
    let schedule = default_schedule(radial_depth);
    let (last, diagnostics) = sp_boundary_radial(&problem.b, &problem.points, &orders, &schedule)?;
    let (probe, _) = sp_boundary_radial(&problem.b, &problem.points, &orders, &[PROBE_RADIUS])?;
    Ok(CrosscheckReport {
        points: problem.points,
        orders,
        radial: radial_residual(&structured, &last.flat, *schedule.last().expect("nonempty schedule")),
        radial_converged: diagnostics.converged,
        radial_successive_differences: diagnostics.successive_differences,
        probe: radial_residual(&structured, &probe.flat, PROBE_RADIUS),
        structured,
        routes,
    })
}

/// `x` formatted exactly as serde_json writes it.
fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
}

fn complex(z: Complex64) -> String {
    format!("[{}, {}]", num(z.re), num(z.im))
}

fn matrix_text(out: &mut String, name: &str, m: &CMatrix) {
    let _ = writeln!(out, "{name}:");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| complex(m[(i, j)])).collect();
        let _ = writeln!(out, "  [{}]", row.join(", "));
    }
}

fn list<T: Serialize>(v: &[T]) -> String {
    let items: Vec<String> = v.iter().map(|x| serde_json::to_string(x).unwrap_or_default()).collect();
    format!("[{}]", items.join(", "))
}

fn analyze_text(out: &mut String, a: &AnalyzeReport) {
    let v = &a.verdict;
    let tag = match v.tag {
        Tag::Unique => "unique",
        Tag::NonUnique => "non-unique",
    };
    let _ = writeln!(out, "verdict: {tag}");
    let _ = writeln!(out, "contact orders m: {}", list(&a.problem.contact_orders));
    let _ = writeln!(out, "k: {}  |k|: {}  degree: {}", list(&v.k), v.k_total, v.degree);
    matrix_text(out, "pick matrix", &v.pick.matrix);
    let _ = writeln!(out, "eigenvalues: {}", list(&v.pick.eigenvalues));
    let _ = writeln!(
        out,
        "numerical rank: {}  psd: {}  pd: {}  hermitian defect: {}",
        v.pick.numerical_rank,
        v.pick.psd,
        v.pick.pd,
        num(v.pick.hermitian_defect)
    );
    let _ = writeln!(
        out,
        "tolerances: rank {}  pd {}",
        num(v.pick.tolerances.rank),
        num(v.pick.tolerances.pd)
    );
    match &v.certificate {
        Certificate::SingularPick {
            numerical_rank,
            rank_cutoff,
            lambda_min,
        } => {
            let _ = writeln!(
                out,
                "certificate: singular pick matrix, rank {numerical_rank} = degree < |k|, cutoff {}, lambda_min {}",
                num(*rank_cutoff),
                num(*lambda_min)
            );
        }
        Certificate::PositiveDefiniteExtension {
            odd_points,
            even_points,
            extended_orders,
            completion,
            supplementary,
            round_trip_residual,
        } => {
            let _ = writeln!(out, "certificate: positive definite extension");
            let _ = writeln!(
                out,
                "  odd points: {}  even points: {}",
                list(odd_points),
                list(even_points)
            );
            let _ = writeln!(out, "  extended orders: {}", list(extended_orders));
            let _ = writeln!(
                out,
                "  rho: {}  margin: {}",
                num(completion.rho),
                num(completion.margin)
            );
            if let Some(s) = completion.schur_lambda_min {
                let _ = writeln!(out, "  schur complement lambda_min: {}", num(s));
            }
            let _ = writeln!(out, "  modified lambda_min: {}", num(completion.modified_lambda_min));
            for s in supplementary {
                let _ = writeln!(
                    out,
                    "  point {}: gamma {} -> {}, b' = {} (was {})",
                    s.point,
                    num(s.gamma_original),
                    num(s.gamma_target),
                    complex(s.replaced),
                    complex(s.original)
                );
            }
            matrix_text(out, "  modified extended matrix", &completion.modified.matrix);
            let _ = writeln!(out, "  round-trip residual: {}", num(*round_trip_residual));
        }
    }
    let _ = writeln!(
        out,
        "structured vs realization: {}  (structured norm {})",
        num(a.routes.structured_vs_realization),
        num(a.routes.structured_norm)
    );
}

fn crosscheck_text(out: &mut String, c: &CrosscheckReport) {
    let _ = writeln!(out, "orders k: {}", list(&c.orders));
    matrix_text(out, "structured", &c.structured);
    let _ = writeln!(
        out,
        "structured vs realization: {}",
        num(c.routes.structured_vs_realization)
    );
    let _ = writeln!(
        out,
        "structured vs radial at r = {}: {} (relative {}), converged: {}",
        num(c.radial.radius),
        num(c.radial.residual),
        num(c.radial.relative),
        c.radial_converged
    );
    let _ = writeln!(
        out,
        "structured vs radial at r = {}: {} (relative {})",
        num(c.probe.radius),
        num(c.probe.residual),
        num(c.probe.relative)
    );
}

fn fuzz_text(out: &mut String, f: &FuzzSummary) {
    let c = &f.config;
    let _ = writeln!(
        out,
        "trials: {}  degree <= {}  points <= {}  order <= {}  seed: {}",
        c.trials, c.degree_max, c.points_max, c.order_max, c.seed
    );
    let _ = writeln!(out, "failures: {}", f.failures);
    let _ = writeln!(out, "max structured vs realization: {}", num(f.max_route_residual));
    let _ = writeln!(
        out,
        "max relative hermitian defect: {}",
        num(f.max_relative_hermitian_defect)
    );
    if let Some(cx) = &f.counterexample {
        let _ = writeln!(out, "first failing trial: {}", cx.trial);
        let _ = writeln!(
            out,
            "minimized counterexample: {}",
            serde_json::to_string(&cx.minimized).unwrap_or_default()
        );
        match &cx.check {
            Ok(check) => {
                let _ = writeln!(out, "violations: {}", check.failures.join("; "));
            }
            Err(e) => {
                let _ = writeln!(out, "error: {e}");
            }
        }
    }
}

/// Text rendering of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    if let Some(a) = &report.analyze {
        analyze_text(&mut out, a);
    }
    if let Some(c) = &report.crosscheck {
        crosscheck_text(&mut out, c);
    }
    if let Some(f) = &report.fuzz {
        fuzz_text(&mut out, f);
    }
    let _ = writeln!(out, "wall time: {} s", num(report.wall_time_seconds));
    out
}

fn execute(cli: &Cli) -> Report {
    let start = Instant::now();
    let (name, result) = match &cli.command {
        Command::Analyze { file } => (
            "analyze",
            ProblemFile::read(file).and_then(|f| {
                let t = tolerances(cli, Some(&f))?;
                analyze(&f, t).map(|a| (Some(a), None, None))
            }),
        ),
        Command::Crosscheck { file } => (
            "crosscheck",
            ProblemFile::read(file).and_then(|f| crosscheck(&f, cli.radial_depth).map(|c| (None, Some(c), None))),
        ),
        Command::Fuzz {
            trials,
            degree_max,
            points_max,
            order_max,
            seed,
        } => (
            "fuzz",
            tolerances(cli, None).map(|t| {
                let config = FuzzConfig {
                    trials: *trials,
                    degree_max: *degree_max,
                    points_max: *points_max,
                    order_max: *order_max,
                    seed: *seed,
                    tolerances: t,
                };
                (None, None, Some(run_fuzz(&config)))
            }),
        ),
    };
    let mut report = Report::new(name);
    match result {
        Ok((a, c, f)) => {
            report.analyze = a;
            report.crosscheck = c;
            report.fuzz = f;
        }
        Err(e) => {
            report.error = Some(ErrorReport {
                exit_code: exit_code_for(&e),
                message: e.to_string(),
            })
        }
    }
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    report
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let report = execute(&cli);
    let code = report.exit_code();
    if let Some(e) = &report.error {
        let _ = writeln!(err, "error: {}", e.message);
    }
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report)
            .map(|s| s + "\n")
            .unwrap_or_default(),
        Format::Text => render_text(&report),
    };
    let _ = out.write_all(rendered.as_bytes());
    code
}

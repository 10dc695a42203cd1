//! `condembed` command-line frontend.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 solver
//! non-convergence, 3 matrix not J1-embeddable.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::embed::{goodman_check, j1_embeddable};
use crate::error::Error;
use crate::expm::norm_gap;
use crate::io::{read_matrix_file, write_matrix, IoError};
use crate::jlt::jlt;
use crate::kernel::conditional_transition_matrix;
use crate::matrix::{IntensityMatrix, SquareMatrix, StochasticMatrix};
use crate::mc::{simulate_conditional, SimulationConfig, SimulationEstimate};
use crate::solver::{contraction_estimate, j1_generator, qii_bounds, ContractionEstimate, SolveReport, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NON_CONVERGENCE: i32 = 2;
pub const EXIT_NOT_EMBEDDABLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "condembed", version, about = "J1-generators of stochastic matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the unique J1-generator.
    J1(J1Args),
    /// Jarrow–Lando–Turnbull closed-form generator.
    Jlt(OutputArgs),
    /// Rebuild the conditional transition matrix of Q and compare it with P.
    Verify {
        #[arg(long)]
        input_p: PathBuf,
        #[arg(long)]
        input_q: PathBuf,
    },
    /// Embeddability screens, diagonal bounds, and contraction diagnostics.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Compare both generators by || P - exp(Q) ||_inf.
    Compare {
        #[arg(long)]
        input: PathBuf,
    },
    /// Monte-Carlo estimate of the conditional transition matrix of Q.
    Simulate {
        #[arg(long)]
        input_q: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        paths: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct J1Args {
    #[command(flatten)]
    io: OutputArgs,
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 1.0)]
    damping: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Core(Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::NonConvergence { .. }) => EXIT_NON_CONVERGENCE,
            CliError::Core(Error::NotJ1Embeddable { .. }) => EXIT_NOT_EMBEDDABLE,
            _ => EXIT_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
            CliError::Core(e @ Error::NotJ1Embeddable { .. }) => {
                write!(f, "{e}; a matrix with a zero diagonal entry has no J1-generator")
            }
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`run`], writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::J1(args) => cmd_j1(args, out),
        Command::Jlt(args) => cmd_jlt(args, out),
        Command::Verify { input_p, input_q } => cmd_verify(&input_p, &input_q, out),
        Command::Check { input } => cmd_check(&input, out),
        Command::Compare { input } => cmd_compare(&input, out),
        Command::Simulate {
            input_q,
            paths,
            seed,
            format,
            output,
        } => cmd_simulate(&input_q, paths, seed, format, output.as_deref(), out),
    }
}

fn load_stochastic(path: &Path) -> Result<StochasticMatrix, CliError> {
    let m = read_matrix_file(path)?;
    StochasticMatrix::try_from(m).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_intensity(path: &Path) -> Result<IntensityMatrix, CliError> {
    let m = read_matrix_file(path)?;
    IntensityMatrix::try_from(m).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
struct ContractionJson {
    alpha: f64,
    #[serde(rename = "C_alpha")]
    c_alpha: f64,
    #[serde(rename = "K")]
    k: f64,
}

impl From<&ContractionEstimate> for ContractionJson {
    fn from(c: &ContractionEstimate) -> Self {
        Self {
            alpha: c.alpha,
            c_alpha: c.c_alpha,
            k: c.lipschitz,
        }
    }
}

/// Stable JSON form of a [`SolveReport`].
#[derive(Debug, Serialize)]
pub struct SolveReportJson {
    method: &'static str,
    generator: Vec<Vec<f64>>,
    theta: Vec<f64>,
    iterations: usize,
    residual: f64,
    contraction: ContractionJson,
}

impl From<&SolveReport> for SolveReportJson {
    fn from(r: &SolveReport) -> Self {
        Self {
            method: r.method.as_str(),
            generator: r.generator.to_rows(),
            theta: r.theta.as_slice().to_vec(),
            iterations: r.iterations,
            residual: r.residual,
            contraction: (&r.contraction).into(),
        }
    }
}

pub fn report_to_json(r: &SolveReport) -> String {
    serde_json::to_string_pretty(&SolveReportJson::from(r)).expect("report serializes")
}

// Full-precision output to a file or stdout.
fn emit(output: Option<&Path>, out: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(out),
    }
}

fn emit_matrix(m: &SquareMatrix, format: Format, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    emit(output, out, |w| {
        match format {
            Format::Csv => write_matrix(m, w)?,
            Format::Json => writeln!(w, "{}", serde_json::to_string(&m.to_rows())?)?,
        }
        Ok(())
    })
}

fn cmd_j1(args: J1Args, out: &mut dyn Write) -> Result<(), CliError> {
    let p = load_stochastic(&args.io.input)?;
    let cfg = SolverConfig {
        tolerance: args.tol,
        max_iterations: args.max_iter,
        damping: args.damping,
        ..SolverConfig::default()
    };
    let report = j1_generator(&p, &cfg)?;
    let format = match (args.io.format, &args.io.output) {
        (Some(f), _) => f,
        (None, Some(_)) => Format::Json,
        (None, None) => {
            print_report(&report, out)?;
            return Ok(());
        }
    };
    emit(args.io.output.as_deref(), out, |w| {
        match format {
            Format::Json => writeln!(w, "{}", report_to_json(&report))?,
            Format::Csv => write_matrix(report.generator.as_matrix(), w)?,
        }
        Ok(())
    })
}

fn print_report(r: &SolveReport, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(
        out,
        "method: {}  iterations: {}  residual: {:.3e}",
        r.method.as_str(),
        r.iterations,
        r.residual
    )?;
    writeln!(
        out,
        "contraction: alpha = {:.4}  C(alpha) = {:.4}  K = {:.4}",
        r.contraction.alpha, r.contraction.c_alpha, r.contraction.lipschitz
    )?;
    writeln!(out, "Q_J1 =")?;
    write!(out, "{}", r.generator)?;
    Ok(())
}

fn cmd_jlt(args: OutputArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let p = load_stochastic(&args.input)?;
    let q = jlt(&p)?;
    match (args.format, &args.output) {
        (None, None) => {
            writeln!(out, "Q_JLT =")?;
            write!(out, "{q}")?;
            Ok(())
        }
        (f, output) => emit_matrix(q.as_matrix(), f.unwrap_or(Format::Csv), output.as_deref(), out),
    }
}

fn cmd_verify(p_path: &Path, q_path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let p = load_stochastic(p_path)?;
    let q = load_intensity(q_path)?;
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: q.n(),
        }
        .into());
    }
    let rebuilt = conditional_transition_matrix(&q);
    let dev = rebuilt.as_matrix().max_abs_diff(p.as_matrix())?;
    writeln!(out, "reconstructed P^(N<=1)(Q) =")?;
    write!(out, "{rebuilt}")?;
    writeln!(out, "max |P^(N<=1)(Q) - P| = {dev:.6e}")?;
    Ok(())
}

fn cmd_check(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let p = load_stochastic(path)?;
    let g = goodman_check(&p);
    let embeddable = j1_embeddable(&p);
    writeln!(out, "J1-embeddable: {}", if embeddable { "yes" } else { "no (zero diagonal entry)" })?;
    writeln!(
        out,
        "Goodman screen (prod p_ii >= det P > 0): {}  det = {:.6e}  prod p_ii = {:.6e}",
        if g.passes { "pass" } else { "fail" },
        g.det,
        g.diag_product
    )?;
    if embeddable {
        let (lo, hi) = qii_bounds(&p)?;
        writeln!(out, "diagonal bounds: {lo:.4} <= q_ii <= {hi:.4}")?;
        let c = contraction_estimate(&p)?;
        writeln!(
            out,
            "contraction: alpha = {:.6}  C(alpha) = {:.6}  K = {:.6}  ({})",
            c.alpha,
            c.c_alpha,
            c.lipschitz,
            if c.is_contraction() { "contraction" } else { "no contraction guarantee" }
        )?;
    }
    Ok(())
}

fn cmd_compare(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let p = load_stochastic(path)?;
    let report = j1_generator(&p, &SolverConfig::default())?;
    let q_jlt = jlt(&p)?;
    let gap_j1 = norm_gap(&p, &report.generator)?;
    let gap_jlt = norm_gap(&p, &q_jlt)?;
    writeln!(out, "Q_J1 =")?;
    write!(out, "{}", report.generator)?;
    writeln!(out, "Q_JLT =")?;
    write!(out, "{q_jlt}")?;
    writeln!(out, "||P - exp(Q_J1)||_inf  = {gap_j1:.10}")?;
    writeln!(out, "||P - exp(Q_JLT)||_inf = {gap_jlt:.10}")?;
    let verdict = if gap_j1 < gap_jlt {
        "J1 generator is closer"
    } else if gap_jlt < gap_j1 {
        "JLT generator is closer"
    } else {
        "tie"
    };
    writeln!(out, "{verdict}")?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct SimulationJson<'a> {
    conditional_freq: Vec<Vec<f64>>,
    std_err: Vec<Vec<f64>>,
    retained_fraction: &'a [f64],
    total_paths: u64,
}

fn cmd_simulate(
    q_path: &Path,
    paths: u64,
    seed: u64,
    format: Option<Format>,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let q = load_intensity(q_path)?;
    let cfg = SimulationConfig::new(paths, seed)?;
    let est: SimulationEstimate = simulate_conditional(&q, &cfg)?;
    match (format, output) {
        (None, None) => {
            let exact = conditional_transition_matrix(&q);
            writeln!(out, "paths per state: {paths}  seed: {seed}")?;
            writeln!(out, "empirical P^(N<=1) =")?;
            write!(out, "{}", est.conditional_freq)?;
            writeln!(out, "standard errors =")?;
            write!(out, "{}", est.std_err)?;
            let fractions: Vec<String> = est.retained_fraction.iter().map(|f| format!("{f:.4}")).collect();
            writeln!(out, "retained fraction: {}", fractions.join(" "))?;
            let worst = max_z_score(&est, exact.as_matrix());
            writeln!(out, "max |empirical - exact| / stderr = {worst:.3}")?;
            Ok(())
        }
        (Some(Format::Csv), output) => emit_matrix(&est.conditional_freq, Format::Csv, output, out),
        (_, output) => emit(output, out, |w| {
            let body = SimulationJson {
                conditional_freq: est.conditional_freq.to_rows(),
                std_err: est.std_err.to_rows(),
                retained_fraction: &est.retained_fraction,
                total_paths: est.total_paths,
            };
            writeln!(w, "{}", serde_json::to_string_pretty(&body)?)?;
            Ok(())
        }),
    }
}

fn max_z_score(est: &SimulationEstimate, exact: &SquareMatrix) -> f64 {
    est.conditional_freq
        .as_slice()
        .iter()
        .zip(est.std_err.as_slice())
        .zip(exact.as_slice())
        .filter(|((_, &se), _)| se > 0.0)
        .map(|((&f, &se), &e)| (f - e).abs() / se)
        .fold(0.0, f64::max)
}

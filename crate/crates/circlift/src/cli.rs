//! Command-line front end: one binary, subcommand style. Figures are emitted
//! as data (CSV or JSON); plotting is left to external tools.
//!
//! Exit codes: 0 on success, 1 on I/O or schema errors, 2 on validation
//! failures (for example a non-diffeomorphism where one is required).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::evaluation::{critical_points, eval_map_solve};
use crate::lifting::Lifting;
use crate::measure::{ccc_coefficients, product_projection_measure, BoxUnion};
use crate::probe::{LambdaDomain, Probe, ProbeSpec};
use crate::qks::{feasible_branches, qks_report, DEFAULT_SLACK};
use crate::rotation::{certify_rational, check_star_beta, convergents, rotation_number};

/// Parsed invocation. Flags are validated by clap before any computation; the
/// global seed is recorded for reproducibility but every current subcommand is
/// fully deterministic.
#[derive(Parser, Debug)]
#[command(name = "circlift", version, about = "circle-lifting toolkit", long_about = None)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed recorded for randomized experiment modes (all current subcommands
    /// are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify that a lifting file describes an order-preserving diffeomorphism
    Validate(ValidateArgs),
    /// Validate a group-element file and report its fixed point and G₀ membership
    Group(GroupArgs),
    /// Print the maximal λ-interval and certified σ of a probe
    ProbeDomain(ProbeDomainArgs),
    /// Sample the λ-foliation graphs of a probe
    Foliate(FoliateArgs),
    /// Solve the n-evaluation map over an x-grid
    EvalMap(EvalMapArgs),
    /// Locate degenerate (Δₙ' = 0) periodic parameters
    Critical(CriticalArgs),
    /// Rotation number, convergents and the (*)_β report for a lifting
    Rotation(RotationArgs),
    /// Quantitative Kupka-Smale experiment table
    Qks(QksArgs),
    /// Countable convex convolution coefficients and their sin(1) limit
    Ccc(CccArgs),
    /// Product-projection measure of a box-union file
    Measure(MeasureArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn parse_window(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("expected a,b".into());
    }
    let a: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound: {e}"))?;
    let b: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound: {e}"))?;
    if !a.is_finite() || !b.is_finite() || a >= b {
        return Err(format!("empty window [{a}, {b}]"));
    }
    Ok((a, b))
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Lifting JSON file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format (only json is available for this report)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    /// GroupElement JSON file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format (only json is available for this report)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct ProbeDomainArgs {
    /// Probe JSON file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format (only json is available for this report)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct FoliateArgs {
    /// Probe JSON file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Grid of x samples per λ
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// λ window sampled uniformly, as a,b
    #[arg(long, value_parser = parse_window, default_value = "0,1")]
    pub lambda_window: (f64, f64),
    /// Number of λ samples across the window
    #[arg(long, default_value_t = 5)]
    pub iters: usize,
}

#[derive(Args, Debug)]
pub struct EvalMapArgs {
    /// Probe JSON file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Period n
    #[arg(long, default_value_t = 1)]
    pub nmax: u32,
    /// Integer branches, comma separated; defaults to the feasible range
    #[arg(long, value_delimiter = ',')]
    pub branches: Option<Vec<i64>>,
    /// x-grid resolution
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    /// λ solve window a,b (must lie inside the probe domain)
    #[arg(long, value_parser = parse_window)]
    pub lambda_window: Option<(f64, f64)>,
}

#[derive(Args, Debug)]
pub struct CriticalArgs {
    /// Probe JSON file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format (only json is available for this report)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Period n
    #[arg(long, default_value_t = 1)]
    pub nmax: u32,
    /// Integer branches, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub branches: Vec<i64>,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct RotationArgs {
    /// Lifting JSON file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format (only json is available for this report)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Orbit length N (error bound 1/N)
    #[arg(long, default_value_t = 10_000)]
    pub iters: u64,
    /// Diophantine exponent β of the (*)_β test
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Largest convergent denominator examined
    #[arg(long, default_value_t = 10_000)]
    pub qmax: u64,
}

#[derive(Args, Debug)]
pub struct QksArgs {
    /// Probe JSON file
    #[arg(long)]
    pub input: PathBuf,
    /// CSV table destination (stdout when omitted); interval details go to
    /// <output>.intervals.json
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Largest period n
    #[arg(long, default_value_t = 3)]
    pub nmax: u32,
    /// γ thresholds, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.05,0.1")]
    pub gammas: Vec<f64>,
    /// Integer branches, comma separated; defaults to the feasible range
    #[arg(long, value_delimiter = ',')]
    pub branches: Option<Vec<i64>>,
    /// x-grid resolution
    #[arg(long, default_value_t = 16_384)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct CccArgs {
    /// Number of witnesses in the truncation
    #[arg(long, default_value_t = 10_000)]
    pub terms: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format (only json is available for this report)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    /// BoxUnion JSON file
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format (only json is available for this report)
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

enum CliError {
    /// I/O or schema problems.
    Input(String),
    /// Semantic validation failures.
    Validation(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Validation(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Validation(m) => m,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidLifting(_)
            | Error::InvalidGroupElement(_)
            | Error::InvalidBoxUnion(_)
            | Error::InvalidShift(_)
            | Error::RegularityMismatch(_, _)
            | Error::LengthMismatch(_, _) => CliError::Input(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn load_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_output(output: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

/// Parses the probe schema first (schema errors exit 1), then certifies it
/// (diffeomorphism and sigma failures exit 2).
fn load_probe(path: &Path) -> CliResult<Probe> {
    let spec: ProbeSpec = load_json(path)?;
    Ok(spec.build()?)
}

fn require_json(format: Format, subcommand: &str) -> CliResult<()> {
    if format == Format::Json {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "{subcommand} only emits json; drop --format csv"
        )))
    }
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

/// Runs a parsed invocation, returning the process exit code.
pub fn run(config: RunConfig) -> i32 {
    match dispatch(config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(config: RunConfig) -> CliResult<()> {
    match config.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Group(args) => cmd_group(args),
        Command::ProbeDomain(args) => cmd_probe_domain(args),
        Command::Foliate(args) => cmd_foliate(args),
        Command::EvalMap(args) => cmd_eval_map(args),
        Command::Critical(args) => cmd_critical(args),
        Command::Rotation(args) => cmd_rotation(args),
        Command::Qks(args) => cmd_qks(args),
        Command::Ccc(args) => cmd_ccc(args),
        Command::Measure(args) => cmd_measure(args),
    }
}

fn cmd_validate(args: ValidateArgs) -> CliResult<()> {
    require_json(args.format, "validate")?;
    let lifting: Lifting = load_json(&args.input)?;
    let cert = lifting.validate_diffeo(args.grid);
    write_output(&args.output, &to_json_line(&cert))?;
    if cert.is_diffeo {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "not a diffeomorphism lifting: certified min derivative {}",
            cert.min_derivative
        )))
    }
}

fn cmd_group(args: GroupArgs) -> CliResult<()> {
    require_json(args.format, "group")?;
    let element: crate::reflection::GroupElement = load_json(&args.input)?;
    let fixed_point = match element.fixed_point() {
        Ok(p) => Some(p),
        Err(Error::IdentityHasAllFixedPoints) => None,
        Err(e) => return Err(e.into()),
    };
    let report = json!({
        "delta": element.delta(),
        "terms": element.terms(),
        "fixed_point": fixed_point,
        "is_conditional": element.is_conditional(args.grid),
    });
    write_output(&args.output, &to_json_line(&report))
}

fn cmd_probe_domain(args: ProbeDomainArgs) -> CliResult<()> {
    require_json(args.format, "probe-domain")?;
    let probe = load_probe(&args.input)?;
    let domain = probe.domain_interval(args.grid)?;
    let sigma = match probe.kind() {
        crate::probe::ProbeKind::TypeI { k } => k,
        crate::probe::ProbeKind::TypeII => crate::probe::sigma_of(probe.f(), probe.g(), args.grid),
    };
    let (a, b) = match domain {
        LambdaDomain::Unbounded => (None, None),
        LambdaDomain::Bounded { a, b } => (Some(a), Some(b)),
    };
    // fixed-point existence of F is reported alongside, not required upstream
    let (disp_lo, disp_hi) = probe.f().displacement_range(args.grid);
    let report = json!({
        "a": a,
        "b": b,
        "sigma": sigma,
        "f_has_fixed_point": disp_lo <= 0.0 && disp_hi >= 0.0,
    });
    write_output(&args.output, &to_json_line(&report))
}

fn cmd_foliate(args: FoliateArgs) -> CliResult<()> {
    let probe = load_probe(&args.input)?;
    let (lo, hi) = args.lambda_window;
    let count = args.iters.max(1);
    let lambdas: Vec<f64> = if count == 1 {
        vec![lo]
    } else {
        (0..count)
            .map(|j| lo + (hi - lo) * j as f64 / (count - 1) as f64)
            .collect()
    };
    let samples = probe.foliation_samples(&lambdas, args.grid);
    match args.format {
        Format::Json => write_output(&args.output, &to_json_line(&samples)),
        Format::Csv => {
            let mut out = String::from("lambda,x,alpha,in_h0\n");
            for fs in &samples {
                for (x, y) in &fs.samples {
                    writeln!(out, "{},{},{},{}", fs.lambda, x, y, fs.in_h0).unwrap();
                }
            }
            write_output(&args.output, &out)
        }
    }
}

fn resolve_branches(
    probe: &Probe,
    n: u32,
    requested: &Option<Vec<i64>>,
    window: (f64, f64),
) -> Vec<i64> {
    match requested {
        Some(bs) => bs.clone(),
        None => feasible_branches(probe, n, window, 256),
    }
}

fn cmd_eval_map(args: EvalMapArgs) -> CliResult<()> {
    let probe = load_probe(&args.input)?;
    let window = probe.solve_window(args.lambda_window)?;
    let branches = resolve_branches(&probe, args.nmax, &args.branches, window);
    let grid = args.grid.max(2);
    let mut points = Vec::new();
    for &branch in &branches {
        for j in 0..grid {
            let x = j as f64 / grid as f64;
            if let Some(pt) = eval_map_solve(&probe, x, args.nmax, branch, window)? {
                points.push(pt);
            }
        }
    }
    match args.format {
        Format::Json => write_output(&args.output, &to_json_line(&points)),
        Format::Csv => {
            let mut out = String::from("x,lambda,d_x,delta_prime,branch\n");
            for pt in &points {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    pt.x, pt.lambda, pt.d_x, pt.delta_prime, pt.branch
                )
                .unwrap();
            }
            write_output(&args.output, &out)
        }
    }
}

fn cmd_critical(args: CriticalArgs) -> CliResult<()> {
    require_json(args.format, "critical")?;
    let probe = load_probe(&args.input)?;
    let window = probe.solve_window(None)?;
    let mut all = Vec::new();
    for &branch in &args.branches {
        let pts = critical_points(&probe, args.nmax, branch, args.grid)?;
        if pts.is_empty() {
            // distinguish "no degeneracies" from "Δₙ constant in x"
            let grid = args.grid.clamp(2, 256);
            let solved: Vec<f64> = (0..grid)
                .filter_map(|j| {
                    eval_map_solve(&probe, j as f64 / grid as f64, args.nmax, branch, window)
                        .ok()
                        .flatten()
                        .map(|pt| pt.delta_prime)
                })
                .collect();
            if !solved.is_empty() && solved.iter().all(|d| d.abs() <= 1e-12) {
                eprintln!(
                    "warning: branch {branch}: Δₙ is constant in x (degenerate probe); \
                     every point is critical, none isolated"
                );
            }
        }
        all.extend(pts);
    }
    write_output(&args.output, &to_json_line(&all))
}

fn cmd_rotation(args: RotationArgs) -> CliResult<()> {
    require_json(args.format, "rotation")?;
    let lifting: Lifting = load_json(&args.input)?;
    let est = rotation_number(&lifting, args.iters, 0.0)?;
    let convs = convergents(est.value, args.qmax);
    let star = check_star_beta(&est, args.beta, args.qmax)?;
    let certificate = match star.possibly_rational {
        Some(c) if c.q <= 64 => certify_rational(&lifting, c.p, c.q, 512)?,
        _ => None,
    };
    let report = json!({
        "rho": est.value,
        "error": est.error_bound,
        "iterations": est.iterations,
        "convergents": convs,
        "star_beta": star,
        "periodic_certificate": certificate,
    });
    write_output(&args.output, &to_json_line(&report))
}

fn cmd_qks(args: QksArgs) -> CliResult<()> {
    let probe = load_probe(&args.input)?;
    let report = qks_report(
        &probe,
        args.nmax,
        &args.gammas,
        args.grid,
        args.branches.as_deref(),
        DEFAULT_SLACK,
    )?;
    match args.format {
        Format::Json => write_output(&args.output, &to_json_line(&report)),
        Format::Csv => {
            let mut out = String::from("n,gamma,measured,u,b_n,c_n,bound,ratio,holds\n");
            for row in &report.rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    row.n,
                    row.gamma,
                    row.measured,
                    row.u,
                    row.b_n,
                    row.c_n,
                    row.bound,
                    row.ratio,
                    row.holds
                )
                .unwrap();
            }
            write_output(&args.output, &out)?;
            if let Some(path) = &args.output {
                let mut detail_path = path.clone().into_os_string();
                detail_path.push(".intervals.json");
                fs::write(&detail_path, to_json_line(&report.details)).map_err(|e| {
                    CliError::Input(format!("{}: {e}", PathBuf::from(&detail_path).display()))
                })?;
            }
            Ok(())
        }
    }
}

fn cmd_ccc(args: CccArgs) -> CliResult<()> {
    require_json(args.format, "ccc")?;
    let coeffs = ccc_coefficients(args.terms);
    let report = json!({
        "n_terms": coeffs.n_terms,
        "lambdas": coeffs.lambdas,
        "partial_products": coeffs.partial_products,
        "coefficients": coeffs.coefficients,
        "coefficient_sum": coeffs.coefficient_sum(),
        "gap_to_sin1": coeffs.euler_gap(),
    });
    write_output(&args.output, &to_json_line(&report))
}

fn cmd_measure(args: MeasureArgs) -> CliResult<()> {
    require_json(args.format, "measure")?;
    let bu: BoxUnion = load_json(&args.input)?;
    let report = json!({
        "dim": bu.dim(),
        "boxes": bu.boxes().len(),
        "measure": product_projection_measure(&bu),
    });
    write_output(&args.output, &to_json_line(&report))
}

//! Command-line front end for `bilinear-core`.
//!
//! `bilinear analyze`, `bilinear simulate` and `bilinear delta-scan` read a
//! JSON system description and write a report or CSV. The functions here
//! are what the binary calls; they are public so tests can drive them
//! without spawning a process.

pub mod output;
pub mod text;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use bilinear_core::angular::{classify_case, pqr};
use bilinear_core::larc::LarcOptions;
use bilinear_core::mat2::Vec2;
use bilinear_core::report::{analyze, AnalysisReport, AnalyzeOptions};
use bilinear_core::sim::{integrate_angular, integrate_planar, ControlSchedule, Segment, SimError, DEFAULT_DT};
use bilinear_core::spectrum::{eigenvalues_of_pencil, VerdictStatus};
use bilinear_core::system::SystemDescription;
use bilinear_core::tolerance::Tolerance;
use clap::{ArgGroup, Parser, Subcommand};
use thiserror::Error;

use output::full_precision;

pub const EXIT_CONTROLLABLE: i32 = 0;
pub const EXIT_NOT_CONTROLLABLE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
/// Bad input: unreadable or malformed system file, bad flags.
pub const EXIT_INPUT: i32 = 64;
/// The output file could not be written.
pub const EXIT_IO: i32 = 74;

/// Environment variable overriding the zero tolerance `eps`.
pub const TOLERANCE_ENV: &str = "BILINEAR_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Write { .. } => EXIT_IO,
            _ => EXIT_INPUT,
        }
    }
}

pub fn exit_code(status: VerdictStatus) -> i32 {
    match status {
        VerdictStatus::Controllable => EXIT_CONTROLLABLE,
        VerdictStatus::NotControllable => EXIT_NOT_CONTROLLABLE,
        VerdictStatus::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

#[derive(Debug, Parser)]
#[command(name = "bilinear", version, about = "Controllability analysis for planar bilinear systems x' = (A + uB)x")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full analysis; exit 0 controllable, 1 not controllable, 2 inconclusive.
    Analyze {
        file: PathBuf,
        /// Print the report as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Seed for the random certificate search.
        #[arg(long, default_value_t = bilinear_core::larc::DEFAULT_SEED)]
        seed: u64,
    },
    /// Integrate a trajectory and write it as CSV.
    #[command(group(ArgGroup::new("start").required(true).args(["x0", "theta0"])))]
    Simulate {
        file: PathBuf,
        /// Piecewise-constant control, "duration:u,duration:u,...".
        #[arg(long, allow_hyphen_values = true)]
        u_schedule: String,
        /// Planar initial state "x1,x2".
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Initial angle in radians; integrates the angular equation.
        #[arg(long, allow_hyphen_values = true)]
        theta0: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        /// Horizon; the schedule is cut, or its last control held, to fit.
        #[arg(long)]
        t: Option<f64>,
        /// Output CSV path; standard output when absent or "-".
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate Δ(u) and the eigenvalues of A + uB on a uniform grid.
    DeltaScan {
        file: PathBuf,
        /// "lo,hi".
        #[arg(long, allow_hyphen_values = true)]
        u_range: String,
        #[arg(long, default_value_t = 201)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse a system file; errors carry `path:line:column`.
pub fn load_system(path: &Path) -> Result<SystemDescription, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_owned(), source })?;
    parse_system(&text, path)
}

pub fn parse_system(text: &str, path: &Path) -> Result<SystemDescription, CliError> {
    serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        // serde_json appends " at line L column C"; the prefix carries it instead
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        CliError::Parse { path: path.to_owned(), line: e.line(), column: e.column(), message }
    })
}

/// `eps` from [`TOLERANCE_ENV`], or the default.
pub fn tolerance_from_env() -> Result<Tolerance, CliError> {
    match std::env::var(TOLERANCE_ENV) {
        Err(_) => Ok(Tolerance::default()),
        Ok(v) => {
            let eps: f64 =
                v.trim().parse().map_err(|_| CliError::Usage(format!("{TOLERANCE_ENV}={v:?} is not a number")))?;
            if !(eps.is_finite() && eps >= 0.0) {
                return Err(CliError::Usage(format!("{TOLERANCE_ENV} must be finite and non-negative, got {v}")));
            }
            Ok(Tolerance::new(eps))
        }
    }
}

fn parse_number(s: &str, what: &str) -> Result<f64, CliError> {
    let x: f64 = s.trim().parse().map_err(|_| CliError::Usage(format!("{what}: {s:?} is not a number")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("{what}: {s:?} is not finite")))
    }
}

/// `"a,b"` into two finite numbers.
pub fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("{what}: expected two comma-separated numbers, got {s:?}")));
    }
    Ok((parse_number(parts[0], what)?, parse_number(parts[1], what)?))
}

/// `"dur:u,dur:u,..."`.
pub fn parse_schedule(s: &str) -> Result<ControlSchedule, CliError> {
    let mut segments = Vec::new();
    for (i, item) in s.split(',').enumerate() {
        let (d, u) = item.split_once(':').ok_or_else(|| {
            CliError::Usage(format!("--u-schedule segment {}: expected duration:u, got {item:?}", i + 1))
        })?;
        segments.push(Segment {
            duration: parse_number(d, "--u-schedule duration")?,
            u: parse_number(u, "--u-schedule control")?,
        });
    }
    Ok(ControlSchedule::new(segments)?)
}

pub fn run_analyze(system: &SystemDescription, tol: Tolerance, seed: u64) -> AnalysisReport {
    let opts = AnalyzeOptions {
        larc: LarcOptions { tolerance: tol, seed, ..LarcOptions::default() },
        ..AnalyzeOptions::default()
    };
    analyze(system, &opts)
}

/// CSV `t,x1,x2,u` or `t,theta,u`.
pub fn simulate_csv(
    system: &SystemDescription,
    schedule: &ControlSchedule,
    start: Start,
    dt: f64,
) -> Result<String, CliError> {
    let mut out = String::new();
    match start {
        Start::Planar(x0) => {
            let tr = integrate_planar(&system.a, &system.b, schedule, x0, dt)?;
            out.push_str("t,x1,x2,u\n");
            for ((t, x), u) in tr.times.iter().zip(&tr.states).zip(&tr.controls) {
                let row = [*t, x.x1, x.x2, *u].map(full_precision).join(",");
                out.push_str(&row);
                out.push('\n');
            }
            if tr.truncated {
                eprintln!(
                    "warning: state left the representable range; trajectory truncated at t = {}",
                    tr.times.last().unwrap()
                );
            }
        }
        Start::Angular(theta0) => {
            let tr = integrate_angular(&system.a, &system.b, schedule, theta0, dt)?;
            out.push_str("t,theta,u\n");
            for ((t, th), u) in tr.times.iter().zip(&tr.states).zip(&tr.controls) {
                let row = [*t, *th, *u].map(full_precision).join(",");
                out.push_str(&row);
                out.push('\n');
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Start {
    Planar(Vec2),
    Angular(f64),
}

/// CSV `u,delta,re_lambda1,re_lambda2,im_lambda1,case_tag` on `n` points.
pub fn delta_scan_csv(
    system: &SystemDescription,
    lo: f64,
    hi: f64,
    n: usize,
    tol: &Tolerance,
) -> Result<String, CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
    }
    if lo >= hi {
        return Err(CliError::Usage(format!("--u-range needs lo < hi, got {lo},{hi}")));
    }
    let mut out = String::from("u,delta,re_lambda1,re_lambda2,im_lambda1,case_tag\n");
    for i in 0..n {
        let u = if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        let c = pqr(&system.a, &system.b, u);
        let delta = system.at(u);
        let delta = delta.trace() * delta.trace() - 4.0 * delta.det();
        let (l1, l2) = eigenvalues_of_pencil(&system.a, &system.b, u);
        let nums = [u, delta, l1.re, l2.re, l1.im].map(full_precision).join(",");
        out.push_str(&nums);
        out.push(',');
        out.push_str(classify_case(&c, tol).tag().as_str());
        out.push('\n');
    }
    Ok(out)
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, text).map_err(|source| CliError::Write { path: p.clone(), source })
        }
        _ => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write { path: PathBuf::from("<stdout>"), source }),
    }
}

/// Run one parsed command; returns the process exit code.
pub fn execute(cli: Cli) -> Result<i32, CliError> {
    let tol = tolerance_from_env()?;
    match cli.command {
        Command::Analyze { file, json, seed } => {
            let system = load_system(&file)?;
            let report = run_analyze(&system, tol, seed);
            let text = if json { output::to_json(&report) + "\n" } else { text::render(&report) };
            write_output(&None, &text)?;
            Ok(exit_code(report.verdict.status))
        }
        Command::Simulate { file, u_schedule, x0, theta0, dt, t, out } => {
            let system = load_system(&file)?;
            let mut schedule = parse_schedule(&u_schedule)?;
            if let Some(t) = t {
                if !(t.is_finite() && t > 0.0) {
                    return Err(CliError::Usage(format!("--t must be positive, got {t}")));
                }
                schedule = schedule.with_horizon(t)?;
            }
            let start = match (x0, theta0) {
                (Some(x), None) => {
                    let (a, b) = parse_pair(&x, "--x0")?;
                    Start::Planar(Vec2::new(a, b))
                }
                (None, Some(th)) => Start::Angular(th),
                _ => return Err(CliError::Usage("give exactly one of --x0 and --theta0".into())),
            };
            let csv = simulate_csv(&system, &schedule, start, dt)?;
            write_output(&out, &csv)?;
            Ok(0)
        }
        Command::DeltaScan { file, u_range, n, out } => {
            let system = load_system(&file)?;
            let (lo, hi) = parse_pair(&u_range, "--u-range")?;
            let csv = delta_scan_csv(&system, lo, hi, n, &tol)?;
            write_output(&out, &csv)?;
            Ok(0)
        }
    }
}

/// Parse arguments and run; usage errors exit with [`EXIT_INPUT`] so they
/// never collide with the verdict codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

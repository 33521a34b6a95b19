//! Argument parsing and subcommands of `lmg3`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lmg_core::fidelity::{
    excitation_gap, fidelity_susceptibility_closed, fidelity_susceptibility_sum,
    partial_fs_one_qubit, partial_fs_two_qubit,
};
use lmg_core::model::{ground_state, Spectrum};
use lmg_core::oracle::{
    ground_state_fd_susceptibility, marginal_fd_susceptibility, verify_point, Outcome, VerifyConfig,
    VerifyReport,
};
use lmg_core::phase::{berry_phase_discrete_oracle, berry_phase_pure, mixed_berry_phase_two_qubit};
use lmg_core::{GroundBranch, ModelParams};
use rayon::prelude::*;

use crate::emit::{emit_table, EmitError, Format};
use crate::sweep::{preset, run_sweep, Axis, Quantity, SpecError, SweepSpec, PRESETS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lmg3", version, about = "Closed-form geometry of the three-qubit anisotropic LMG model")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Point {
    /// Anisotropy γ ≥ 0.
    #[arg(long, allow_negative_numbers = true)]
    gamma: f64,
    /// Magnetic field h.
    #[arg(long, allow_negative_numbers = true)]
    h: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues, mixing angles and ground branch at one point.
    Spectrum(Point),
    /// Pure and mixed geometric phases at one point.
    Berry {
        #[command(flatten)]
        point: Point,
        /// Steps of the discrete phase oracle.
        #[arg(long, default_value_t = 4096)]
        oracle_steps: usize,
    },
    /// Full and partial fidelity susceptibilities at one point.
    Fidelity {
        #[command(flatten)]
        point: Point,
        /// Field offset of the finite-difference estimates.
        #[arg(long, default_value_t = 1e-4)]
        delta_h: f64,
    },
    /// Grid sweep written as CSV or JSON.
    Sweep(SweepArgs),
    /// Closed forms against brute-force oracles over a grid.
    Verify {
        /// Points per axis over γ ∈ [0, 2], h ∈ [0, 1.2].
        #[arg(long, default_value_t = 21)]
        grid: usize,
        /// Multiplies every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// One of fig1..fig6; explicit options override its fields.
    #[arg(long)]
    preset: Option<String>,
    /// `min:max:steps`
    #[arg(long, allow_hyphen_values = true)]
    gamma_range: Option<String>,
    /// `min:max:steps`
    #[arg(long, allow_hyphen_values = true)]
    h_range: Option<String>,
    /// Comma-separated quantity names.
    #[arg(long, value_delimiter = ',')]
    quantities: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// NA radius around the crossing line and the monopoles.
    #[arg(long)]
    skip_radius: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write to stdout: {0}")]
    Stdout(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Emit(_) | CliError::Stdout(_) => EXIT_IO,
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Spectrum(p) => spectrum(&params(&p)?),
        Command::Berry { point, oracle_steps } => berry(&params(&point)?, oracle_steps),
        Command::Fidelity { point, delta_h } => fidelity(&params(&point)?, delta_h),
        Command::Sweep(args) => sweep(args),
        Command::Verify { grid, tol_scale, threads } => verify(grid, tol_scale, threads),
    }
}

fn params(p: &Point) -> Result<ModelParams, CliError> {
    ModelParams::new(p.gamma, p.h).map_err(|e| CliError::Usage(e.to_string()))
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn branch_name(b: GroundBranch) -> &'static str {
    match b {
        GroundBranch::LowField => "LowField",
        GroundBranch::HighField => "HighField",
        GroundBranch::Degenerate => "Degenerate",
    }
}

fn spectrum(p: &ModelParams) -> Result<i32, CliError> {
    let s = Spectrum::new(p);
    let gs = ground_state(p);
    let mut out = std::io::stdout().lock();
    writeln!(out, "gamma {}", p.gamma)?;
    writeln!(out, "h {}", p.h)?;
    writeln!(out, "branch {}", branch_name(gs.branch))?;
    writeln!(out, "mirrored {}", gs.mirrored)?;
    writeln!(out, "theta_low {}", gs.low.theta)?;
    writeln!(out, "theta_high {}", gs.high.theta)?;
    if let Some(b) = gs.active_branch() {
        writeln!(out, "theta {}", gs.state(b).theta)?;
    }
    writeln!(out, "ground_energy {}", gs.energy())?;
    writeln!(out, "gap {}", excitation_gap(p))?;
    for (i, e) in s.eigenvalues().iter().enumerate() {
        writeln!(out, "energy[{i}] {e}")?;
    }
    Ok(EXIT_OK)
}

fn berry(p: &ModelParams, steps: usize) -> Result<i32, CliError> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "branch {}", branch_name(ground_state(p).branch))?;
    match berry_phase_pure(p) {
        Ok(r) => {
            writeln!(out, "raw {}", r.raw)?;
            writeln!(out, "principal {}", r.principal)?;
            match berry_phase_discrete_oracle(p, steps) {
                Ok(o) => writeln!(out, "oracle {o}")?,
                Err(e) => writeln!(out, "oracle NA ({e})")?,
            }
        }
        Err(e) => writeln!(out, "raw NA ({e})")?,
    }
    match mixed_berry_phase_two_qubit(p) {
        Ok(m) => {
            writeln!(out, "mixed {}", m.gamma_phase)?;
            writeln!(out, "visibility {}", m.visibility)?;
            writeln!(out, "weights {} {}", m.weights.0, m.weights.1)?;
        }
        Err(e) => writeln!(out, "mixed NA ({e})")?,
    }
    Ok(EXIT_OK)
}

fn fidelity(p: &ModelParams, delta: f64) -> Result<i32, CliError> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(CliError::Usage("--delta-h must be positive".into()));
    }
    let mut out = std::io::stdout().lock();
    let branch = ground_state(p).active_branch();
    let show = |out: &mut dyn Write, name: &str, v: Result<f64, lmg_core::Error>| -> std::io::Result<()> {
        match v {
            Ok(x) => writeln!(out, "{name} {x}"),
            Err(e) => writeln!(out, "{name} NA ({e})"),
        }
    };
    let no_branch = || Err(lmg_core::Error::AtCrossing { gamma: p.gamma, h: p.h });
    show(&mut out, "chi_full", fidelity_susceptibility_closed(p).map(|r| r.value))?;
    show(&mut out, "chi_full_sum", fidelity_susceptibility_sum(p).map(|r| r.value))?;
    show(
        &mut out,
        "chi_full_fd",
        branch.map_or_else(no_branch, |b| ground_state_fd_susceptibility(p, b, delta)),
    )?;
    show(&mut out, "chi_1q", partial_fs_one_qubit(p).map(|r| r.value))?;
    show(
        &mut out,
        "chi_1q_fd",
        branch.map_or_else(no_branch, |b| marginal_fd_susceptibility(p, b, &[1], delta)),
    )?;
    show(&mut out, "chi_2q", partial_fs_two_qubit(p).map(|r| r.value))?;
    show(
        &mut out,
        "chi_2q_fd",
        branch.map_or_else(no_branch, |b| marginal_fd_susceptibility(p, b, &[1, 2], delta)),
    )?;
    Ok(EXIT_OK)
}

fn sweep(args: SweepArgs) -> Result<i32, CliError> {
    let mut spec = match &args.preset {
        Some(name) => preset(name).ok_or_else(|| {
            CliError::Usage(format!("unknown preset `{name}`; expected one of {}", PRESETS.join(", ")))
        })?,
        None => SweepSpec::default(),
    };
    if let Some(g) = &args.gamma_range {
        spec.gamma = g.parse::<Axis>()?;
    }
    if let Some(h) = &args.h_range {
        spec.h = h.parse::<Axis>()?;
    }
    if !args.quantities.is_empty() {
        spec.quantities = args
            .quantities
            .iter()
            .map(|q| q.trim().parse::<Quantity>())
            .collect::<Result<_, _>>()
            .map_err(CliError::Usage)?;
    }
    if let Some(r) = args.skip_radius {
        spec.skip_radius = r;
    }
    let table = with_threads(args.threads, || run_sweep(&spec))??;
    emit_table(&table, args.format, args.out.as_deref())?;
    Ok(EXIT_OK)
}

/// Default verification window.
pub const VERIFY_GAMMA: (f64, f64) = (0.0, 2.0);
pub const VERIFY_H: (f64, f64) = (0.0, 1.2);

/// Runs [`verify_point`] over a `grid × grid` lattice of the default window.
pub fn verify_grid(grid: usize, config: &VerifyConfig) -> Vec<VerifyReport> {
    let ga = Axis::new(VERIFY_GAMMA.0, VERIFY_GAMMA.1, grid);
    let ha = Axis::new(VERIFY_H.0, VERIFY_H.1, grid);
    let points: Vec<(f64, f64)> = ga.values().flat_map(|g| ha.values().map(move |h| (g, h))).collect();
    points
        .par_iter()
        .map(|&(g, h)| {
            let p = ModelParams::new(g, h).expect("grid points are valid");
            verify_point(&p, config)
        })
        .collect()
}

fn verify(grid: usize, tol_scale: f64, threads: Option<usize>) -> Result<i32, CliError> {
    if grid == 0 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return Err(CliError::Usage("--tol-scale must be positive".into()));
    }
    let config = VerifyConfig { tol_scale, ..VerifyConfig::default() };
    let reports = with_threads(threads, || verify_grid(grid, &config))?;
    let (mut pass, mut fail, mut skip) = (0usize, 0usize, 0usize);
    let mut out = std::io::stdout().lock();
    for r in &reports {
        for e in &r.entries {
            match e.outcome {
                Outcome::Pass => pass += 1,
                Outcome::Skipped(_) => skip += 1,
                Outcome::Fail => {
                    fail += 1;
                    writeln!(
                        out,
                        "FAIL gamma={} h={} {}: error {:e} > tolerance {:e}",
                        r.gamma, r.h, e.name, e.error, e.tolerance
                    )?;
                }
            }
        }
    }
    writeln!(out, "points {}", reports.len())?;
    writeln!(out, "checks passed {pass} failed {fail} skipped {skip}")?;
    Ok(if fail == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

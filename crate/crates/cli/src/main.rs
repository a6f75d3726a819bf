//! `revival` — design, simulate, verify, and cut XX spin chains with
//! perfect state transfer and two-site fractional revival.
//!
//! Chains travel as JSON (`{"n": N, "couplings": [...], "fields": [...]}`),
//! amplitude series as CSV with one row per (time, site). Exit codes:
//! 0 success, 2 design-domain error, 3 I/O or parse error, 4 bad
//! configuration.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use revival_core::chain::JacobiMatrix;
use revival_core::designer::design_chain;
use revival_core::dynamics::{
    detect_fractional_revival, detect_pst, fit_bilattice, propagator, RevivalOutcome,
};
use revival_core::inverse::reconstruct_jacobi;
use revival_core::models::{
    centered_para_krawtchouk_chain, fr_chain_psi_half, krawtchouk_chain, para_krawtchouk_chain,
    PstRationalCondition,
};
use revival_core::{deform, surgery};

#[derive(Parser)]
#[command(
    name = "revival",
    version,
    about = "Spin chains with perfect state transfer and fractional revival",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesise the chain for a revival target (theta, psi, T).
    Design(DesignArgs),
    /// Evolve a walker and dump per-site amplitudes over a time grid.
    Simulate(SimulateArgs),
    /// Check mirror symmetry, transfer, revival, and the spectral grid.
    Verify(VerifyArgs),
    /// Remove extremal levels or interior neighbour pairs.
    Surgery(SurgeryArgs),
    /// Closed-form chain generators.
    #[command(subcommand)]
    Models(ModelsCommand),
}

#[derive(Args)]
struct DesignArgs {
    /// Chain order N (the chain has N+1 sites).
    #[arg(long)]
    n: usize,
    /// Revival amplitude angle.
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    /// Relative phase between the end amplitudes, in [0, pi).
    #[arg(long, allow_hyphen_values = true)]
    psi: f64,
    /// Revival time T.
    #[arg(long, default_value_t = PI)]
    period: f64,
    /// Interpret angles in degrees instead of radians.
    #[arg(long)]
    degrees: bool,
    /// Where to write the chain JSON.
    #[arg(long)]
    out: PathBuf,
    /// Where to write the design record (stdout when omitted).
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Chain JSON to evolve.
    #[arg(long)]
    chain: PathBuf,
    /// First time of the grid.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t_start: f64,
    /// Last time of the grid.
    #[arg(long, allow_hyphen_values = true)]
    t_end: f64,
    /// Number of grid points (at least 1).
    #[arg(long)]
    steps: usize,
    /// Site the walker starts from.
    #[arg(long, default_value_t = 0)]
    from: usize,
    /// Where to write the amplitude CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Chain JSON to inspect.
    #[arg(long)]
    chain: PathBuf,
    /// Reference time for the transfer/revival tests.
    #[arg(long)]
    period: f64,
    /// Detection tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct SurgeryArgs {
    /// Chain JSON to operate on.
    #[arg(long)]
    chain: PathBuf,
    /// Remove the lowest level.
    #[arg(long, conflicts_with_all = ["remove_last", "remove_pair"])]
    remove_first: bool,
    /// Remove the highest level.
    #[arg(long, conflicts_with = "remove_pair")]
    remove_last: bool,
    /// Remove the interior neighbour pair starting at this index.
    #[arg(long)]
    remove_pair: Option<usize>,
    /// Where to write the reduced chain JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ModelsCommand {
    /// Uniform-lattice chain with transfer time T.
    Krawtchouk {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = PI)]
        period: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bi-lattice chain; centered and scaled by --period unless raw
    /// --scale/--shift are given.
    ParaKrawtchouk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = PI)]
        period: f64,
        /// Raw affine scale a (couplings |a|·J̄, fields a·B̄ + b).
        #[arg(long, allow_hyphen_values = true)]
        scale: Option<f64>,
        /// Raw affine shift b.
        #[arg(long, allow_hyphen_values = true, requires = "scale")]
        shift: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Quarter-phase revival chain (delta = 1 ± 4θ/π); prints the revival
    /// phase record.
    FrPsiHalf {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = PI)]
        period: f64,
        #[arg(long)]
        degrees: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Isospectral central deformation of a mirror-symmetric chain.
    Deform {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        degrees: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract the orthogonality measure (points and weights) of a chain.
    Measure {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild the unique chain carrying a given measure.
    Reconstruct {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

enum CliError {
    Domain(revival_core::Error),
    Io(String),
    Parse(String),
    Config(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Io(_) | CliError::Parse(_) => 3,
            CliError::Config(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Domain(e) => format!("error: {e}"),
            CliError::Io(m) => format!("i/o error: {m}"),
            CliError::Parse(m) => format!("parse error: {m}"),
            CliError::Config(m) => format!("configuration error: {m}"),
        }
    }
}

impl From<revival_core::Error> for CliError {
    fn from(e: revival_core::Error) -> Self {
        CliError::Domain(e)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprintln!("{e}");
                    ExitCode::from(4)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Design(args) => cmd_design(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Surgery(args) => cmd_surgery(args),
        Command::Models(args) => cmd_models(args),
    }
}

fn to_radians(value: f64, degrees: bool) -> f64 {
    if degrees {
        value.to_radians()
    } else {
        value
    }
}

fn load_chain(path: &Path) -> Result<JacobiMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct DesignRecord {
    theta: f64,
    psi: f64,
    #[serde(rename = "T")]
    time_scale: f64,
    phi: f64,
    delta: f64,
    sigma: f64,
    tau: f64,
}

fn cmd_design(args: DesignArgs) -> Result<(), CliError> {
    let theta = to_radians(args.theta, args.degrees);
    let psi = to_radians(args.psi, args.degrees);
    if !(args.period.is_finite() && args.period > 0.0) {
        return Err(CliError::Config("period must be positive".into()));
    }
    let design = design_chain(args.n, theta, psi, args.period)?;
    write_json(&args.out, &design.chain)?;
    let record = DesignRecord {
        theta,
        psi,
        time_scale: args.period,
        phi: design.phi,
        delta: design.delta,
        sigma: design.angles.sigma,
        tau: design.angles.tau,
    };
    match &args.record {
        Some(path) => write_json(path, &record)?,
        None => println!(
            "{}",
            serde_json::to_string(&record).map_err(|e| CliError::Parse(e.to_string()))?
        ),
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    if args.steps < 1 {
        return Err(CliError::Config("time grid needs at least one point".into()));
    }
    let chain = load_chain(&args.chain)?;
    if args.from >= chain.n_sites() {
        return Err(CliError::Config(format!(
            "start site {} outside 0..={}",
            args.from,
            chain.n()
        )));
    }
    let times: Vec<f64> = if args.steps == 1 {
        vec![args.t_start]
    } else {
        let dt = (args.t_end - args.t_start) / (args.steps - 1) as f64;
        (0..args.steps).map(|i| args.t_start + i as f64 * dt).collect()
    };

    let mut out = String::from("t,site,re,im,prob\n");
    for &t in &times {
        let u = propagator(&chain, t);
        for site in 0..chain.n_sites() {
            let amp = u.amplitude(site, args.from);
            writeln!(
                out,
                "{:.16e},{site},{:.16e},{:.16e},{:.16e}",
                t,
                amp.re,
                amp.im,
                amp.norm_sqr()
            )
            .expect("string append");
        }
    }
    std::fs::write(&args.out, out)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))
}

#[derive(Serialize)]
struct PstReport {
    detected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase: Option<f64>,
    gap_defect: f64,
    end_amplitude: f64,
}

#[derive(Serialize)]
struct RevivalReport {
    detected: bool,
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
}

#[derive(Serialize)]
struct BiLatticeReport {
    mu: f64,
    delta: f64,
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rational: Option<RationalReport>,
}

#[derive(Serialize)]
struct RationalReport {
    m1: u64,
    m2: u64,
    transfer_at_multiple: u64,
}

#[derive(Serialize)]
struct VerifyReport {
    persymmetric: bool,
    persymmetry_defect: f64,
    pst: PstReport,
    fractional_revival: RevivalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    bilattice: Option<BiLatticeReport>,
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(CliError::Config("tolerance must be positive".into()));
    }
    if !(args.period.is_finite() && args.period > 0.0) {
        return Err(CliError::Config("period must be positive".into()));
    }
    let chain = load_chain(&args.chain)?;

    let pst = detect_pst(&chain, args.period, args.tol);
    let outcome = detect_fractional_revival(&chain, args.period, args.tol);
    let revival = match &outcome {
        RevivalOutcome::Revival { target, residual } => RevivalReport {
            detected: true,
            residual: *residual,
            theta: Some(target.theta()),
            psi: Some(target.psi()),
            phi: Some(target.phi()),
        },
        RevivalOutcome::NoRevival { residual } => RevivalReport {
            detected: false,
            residual: *residual,
            theta: None,
            psi: None,
            phi: None,
        },
    };

    let eig = revival_core::eigendecompose(&chain)?;
    let phi_for_fit = outcome.target().map(|t| t.phi()).unwrap_or(0.0);
    let bilattice = fit_bilattice(eig.eigenvalues(), args.period, phi_for_fit).map(|fit| {
        let rational = if fit.residual < args.tol {
            PstRationalCondition::approximate(fit.delta, 64, args.tol).map(|c| RationalReport {
                m1: c.m1(),
                m2: c.m2(),
                transfer_at_multiple: c.pst_multiple(),
            })
        } else {
            None
        };
        BiLatticeReport {
            mu: fit.mu,
            delta: fit.delta,
            residual: fit.residual,
            rational,
        }
    });

    let scale = chain.max_abs().max(1.0);
    let report = VerifyReport {
        persymmetric: chain.is_persymmetric(args.tol * scale),
        persymmetry_defect: chain.persymmetry_defect(),
        pst: PstReport {
            detected: pst.detected,
            phase: pst.phase,
            gap_defect: pst.gap_defect,
            end_amplitude: pst.end_amplitude,
        },
        fractional_revival: revival,
        bilattice,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Parse(e.to_string()))?
    );
    Ok(())
}

fn cmd_surgery(args: SurgeryArgs) -> Result<(), CliError> {
    let chain = load_chain(&args.chain)?;
    let cut = if args.remove_first {
        surgery::remove_level(&chain, 0)?
    } else if args.remove_last {
        surgery::remove_level(&chain, chain.n())?
    } else if let Some(index) = args.remove_pair {
        surgery::remove_pair(&chain, index)?
    } else {
        return Err(CliError::Config(
            "choose one of --remove-first, --remove-last, --remove-pair".into(),
        ));
    };
    write_json(&args.out, &cut)
}

fn cmd_models(command: ModelsCommand) -> Result<(), CliError> {
    match command {
        ModelsCommand::Krawtchouk { n, period, out } => {
            write_json(&out, &krawtchouk_chain(n, period)?)
        }
        ModelsCommand::ParaKrawtchouk {
            n,
            delta,
            period,
            scale,
            shift,
            out,
        } => {
            let chain = match scale {
                Some(a) => para_krawtchouk_chain(n, delta, a, shift.unwrap_or(0.0))?,
                None => centered_para_krawtchouk_chain(n, delta, period)?,
            };
            write_json(&out, &chain)
        }
        ModelsCommand::FrPsiHalf {
            n,
            theta,
            period,
            degrees,
            out,
        } => {
            let theta = to_radians(theta, degrees);
            let (chain, phi) = fr_chain_psi_half(n, theta, period)?;
            write_json(&out, &chain)?;
            println!(
                "{}",
                serde_json::json!({
                    "theta": theta,
                    "psi": PI / 2.0,
                    "T": period,
                    "phi": phi,
                })
            );
            Ok(())
        }
        ModelsCommand::Deform {
            chain,
            theta,
            degrees,
            out,
        } => {
            let parent = load_chain(&chain)?;
            let theta = to_radians(theta, degrees);
            write_json(&out, &deform::deform_chain(&parent, theta)?)
        }
        ModelsCommand::Measure { chain, out } => {
            let chain = load_chain(&chain)?;
            let eig = revival_core::eigendecompose(&chain)?;
            write_json(&out, &revival_core::spectral_data(&eig)?)
        }
        ModelsCommand::Reconstruct { measure, out } => {
            let text = std::fs::read_to_string(&measure)
                .map_err(|e| CliError::Io(format!("{}: {e}", measure.display())))?;
            let data: revival_core::SpectralData = serde_json::from_str(&text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", measure.display())))?;
            write_json(&out, &reconstruct_jacobi(&data)?)
        }
    }
}

//! `photon-scatter`: plot-ready curves for single- and few-photon scattering
//! off a two-level emitter, lattice oracle runs and the validation suite.
//!
//! Exit status: 0 on success, 2 for configuration errors, 3 for numerical
//! failures (including failed validation criteria). Errors are reported on
//! stderr as one JSON line.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use crate::config::Grid;
use crate::output::{CliError, CliResult, OutputArgs};

#[derive(Debug, Parser)]
#[command(
    name = "photon-scatter",
    version,
    about = "Few-photon scattering off a two-level emitter"
)]
struct Cli {
    /// key = value file whose entries replace the flags of the same name.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Resonator-array parameters. Energies share one unit (the hopping `J`
/// sets the band width `4 J`).
#[derive(Debug, Clone, Args)]
struct LatticeArgs {
    /// Emitter transition energy.
    #[arg(long)]
    omega: f64,
    /// Resonator frequency (band centre).
    #[arg(long, default_value_t = std::f64::consts::PI)]
    omega0: f64,
    #[arg(long = "J", default_value_t = 1.0)]
    hopping: f64,
    #[arg(long = "V")]
    coupling: f64,
}

/// Single-waveguide parameters; energies in units of the emitter frequency.
#[derive(Debug, Clone, Args)]
struct WaveguideArgs {
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Emitter decay rate into the waveguide.
    #[arg(long = "gamma-t")]
    gamma_t: f64,
}

#[derive(Debug, Clone, Args)]
struct HWaveguideArgs {
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long)]
    vbar1: f64,
    #[arg(long)]
    vbar2: f64,
}

/// Incoming pair, either as `--k1 --k2` or as `--E --dk`
/// (`k1,2 = E/2 +- dk`).
#[derive(Debug, Clone, Args)]
struct PairMomenta {
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    k2: Option<f64>,
    #[arg(long = "E")]
    energy: Option<f64>,
    #[arg(long)]
    dk: Option<f64>,
}

impl PairMomenta {
    fn resolve(&self) -> CliResult<(f64, f64)> {
        match (self.k1, self.k2, self.energy, self.dk) {
            (Some(a), Some(b), None, None) => Ok((a, b)),
            (None, None, Some(e), dk) => {
                let d = dk.unwrap_or(0.0);
                Ok((0.5 * e + d, 0.5 * e - d))
            }
            _ => Err(CliError::Config(
                "give either --k1 and --k2, or --E (and optionally --dk)".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args)]
struct TripleMomenta {
    #[arg(long)]
    k1: f64,
    #[arg(long)]
    k2: f64,
    #[arg(long)]
    k3: f64,
}

impl TripleMomenta {
    fn array(&self) -> [f64; 3] {
        [self.k1, self.k2, self.k3]
    }
}

#[derive(Debug, Clone, Args)]
struct GridArgs {
    /// Sample grid `name:start:stop:points`; repeat for two-dimensional scans.
    #[arg(long = "grid", required = true)]
    grids: Vec<Grid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GeometryArg {
    T,
    H,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reflection amplitude r_k on the resonator array (grid: k).
    TReflect {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Energies and decay factors of the two out-of-band bound states (JSON).
    BoundStates {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Resonator amplitudes of one bound state (grid: x, integer sites).
    BoundWavefunction {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, value_enum)]
        branch: BranchArg,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Waveguide transmission phase t_k (grid: k).
    WgTransmit {
        #[command(flatten)]
        wg: WaveguideArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two-photon out-state against the relative coordinate (grid: x).
    TwoPhotonWf {
        #[command(flatten)]
        wg: WaveguideArgs,
        #[command(flatten)]
        momenta: PairMomenta,
        /// Centre-of-mass coordinate.
        #[arg(long, default_value_t = 0.0)]
        xc: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two-photon background fluorescence |T2|^2 on the shell (grid: p1).
    Fluorescence2 {
        #[command(flatten)]
        wg: WaveguideArgs,
        #[command(flatten)]
        momenta: PairMomenta,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Three-photon background fluorescence |T3|^2 (grids: p1 and p2).
    Fluorescence3 {
        #[command(flatten)]
        wg: WaveguideArgs,
        #[command(flatten)]
        momenta: TripleMomenta,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Three-photon out-state on an (x1, x2) plane at fixed x3 (grids: x1 and x2).
    ThreePhotonWf {
        #[command(flatten)]
        wg: WaveguideArgs,
        #[command(flatten)]
        momenta: TripleMomenta,
        #[arg(long, default_value_t = 0.0)]
        x3: f64,
        /// Momentum window half-width of the connected integral, units of gamma_t.
        #[arg(long, default_value_t = 40.0)]
        window: f64,
        /// Ridge-tail correction half-width, units of gamma_t (0 disables).
        #[arg(long = "ridge-window", default_value_t = 400.0)]
        ridge_window: f64,
        #[arg(long = "rel-tol", default_value_t = 1e-8)]
        rel_tol: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two-waveguide single-photon amplitudes (grid: k).
    HSingle {
        #[command(flatten)]
        wg: HWaveguideArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two-waveguide two-photon S-matrix elements (grid: p1).
    HTwoPhoton {
        #[command(flatten)]
        wg: HWaveguideArgs,
        #[command(flatten)]
        momenta: PairMomenta,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Second-order correlation |g_ij(x)|^2 (grid: x).
    Correlation {
        #[command(flatten)]
        wg: HWaveguideArgs,
        /// Outgoing waveguide pair: 11, 12 or 22.
        #[arg(long)]
        pair: photon_scatter_core::hwg::ChannelPair,
        #[command(flatten)]
        momenta: PairMomenta,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Finite-lattice oracle runs (JSON).
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run the acceptance criteria and report pass/fail per criterion.
    Validate {
        /// Run only these criteria (1 to 11); repeatable.
        #[arg(long)]
        criterion: Vec<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Out-of-band eigenpairs of an open array against the bound states.
    Bound {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 2001)]
        size: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Single-photon wavepacket scattering on an open array.
    Scatter {
        #[arg(long = "type", value_enum, default_value_t = GeometryArg::T)]
        geometry: GeometryArg,
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        omega0: f64,
        #[arg(long = "J", default_value_t = 1.0)]
        hopping: f64,
        /// Coupling of the T-type emitter.
        #[arg(long = "V")]
        coupling: Option<f64>,
        /// Couplings of the H-type emitter to the two arrays.
        #[arg(long = "V1")]
        coupling1: Option<f64>,
        #[arg(long = "V2")]
        coupling2: Option<f64>,
        #[arg(long, default_value_t = 2001)]
        size: usize,
        #[arg(long)]
        k0: f64,
        #[arg(long, default_value_t = 40.0)]
        width: f64,
        #[arg(long)]
        duration: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Photon pair on a T-type array: relative-distance density and bunching.
    Pair {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 301)]
        size: usize,
        #[arg(long)]
        k1: f64,
        #[arg(long)]
        k2: f64,
        #[arg(long, default_value_t = 12.0)]
        width: f64,
        #[arg(long)]
        duration: Option<f64>,
        /// Relative distances `start:end` averaged for the plateau density.
        #[arg(long, default_value = "24:40")]
        plateau: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Negative numbers are values, not flags, in every subcommand.
fn command() -> clap::Command {
    fn allow(c: clap::Command) -> clap::Command {
        c.allow_negative_numbers(true).mut_subcommands(allow)
    }
    allow(Cli::command())
}

fn run() -> CliResult<()> {
    let args = config::merge_config(std::env::args_os().collect())?;
    let cli = command()
        .try_get_matches_from(args)
        .and_then(|m| Cli::from_arg_matches(&m))
        .map_err(|e| {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => CliError::Config(e.to_string()),
            }
        })?;
    config::configure_threads()?;
    commands::dispatch(cli.command)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}

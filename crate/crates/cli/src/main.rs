//! `idstat`: permutation-symmetry states, one-body expectations and ideal-gas
//! partition functions from the command line.

mod commands;
mod config;
mod error;
mod parse;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Mode, OutputFormat, Overrides, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "idstat",
    version,
    about = "Identical-particle states and ideal-gas statistics, computed exactly"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, env = "IDSTAT_OUTPUT", value_enum)]
    output: Option<OutputFormat>,
    /// Unit system: dimensionless (h = k = m = 1) or SI.
    #[arg(long, global = true, env = "IDSTAT_MODE", value_enum)]
    mode: Option<Mode>,
    /// key=value configuration file.
    #[arg(long, global = true, env = "IDSTAT_CONFIG")]
    config: Option<PathBuf>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, env = "IDSTAT_SEED")]
    seed: Option<u64>,
    /// Particle-number cap for exact enumeration.
    #[arg(long, global = true, env = "IDSTAT_MAX_N")]
    max_n: Option<usize>,
    /// Level-count cap for exact enumeration.
    #[arg(long, global = true, env = "IDSTAT_MAX_LEVELS")]
    max_levels: Option<usize>,
    /// Particle mass (defaults to 1 dimensionless, helium-4 in SI).
    #[arg(long, global = true, env = "IDSTAT_MASS")]
    mass: Option<f64>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    #[value(name = "S", alias = "s", alias = "sym")]
    S,
    #[value(name = "A", alias = "a", alias = "anti")]
    A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NamedState {
    #[value(name = "S")]
    S,
    #[value(name = "A")]
    A,
    S1,
    S2,
    S1p,
    S2p,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    Be,
    Fd,
    MbNn,
    MbFact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumKind {
    Dimensionless,
    Box1d,
    Box3d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorKind {
    Energy,
    Position,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Enumerate,
    Recursion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Continuum,
    Box1d,
}

/// A state given by name over base levels, or by explicit terms.
#[derive(Debug, Args)]
pub struct StateSpec {
    /// Base levels, e.g. a,b,c.
    #[arg(short = 'l', long)]
    pub levels: Option<String>,
    /// Named state built on the base levels.
    #[arg(long, value_enum)]
    pub state: Option<NamedState>,
    /// Explicit terms, e.g. "ab=1/2*sqrt(2); ba=1/2*sqrt(2)".
    #[arg(long, conflicts_with_all = ["levels", "state"])]
    pub terms: Option<String>,
}

#[derive(Debug, Args)]
pub struct SpectrumSpec {
    /// Explicit single-particle energies, ascending.
    #[arg(long, conflicts_with_all = ["spectrum", "spectrum_file"])]
    pub levels: Option<String>,
    /// Generated spectrum.
    #[arg(long, value_enum, conflicts_with = "spectrum_file")]
    pub spectrum: Option<SpectrumKind>,
    /// CSV file with an "energy" column and optional "degeneracy" column.
    #[arg(long)]
    pub spectrum_file: Option<PathBuf>,
    /// Number of levels for a generated spectrum.
    #[arg(long, default_value_t = 10)]
    pub cutoff: usize,
    /// Box length for box spectra.
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// (Anti)symmetrize a product state over all relabelings.
    Symmetrize {
        /// Particle number; must match the number of levels.
        #[arg(short = 'n', long = "n")]
        n: usize,
        /// Occupied levels, one per particle, e.g. a,b,c or 0,1,2.
        #[arg(short = 'l', long)]
        levels: String,
        /// S for symmetric, A for antisymmetric.
        #[arg(short = 'p', long, value_enum)]
        parity: ParityArg,
        /// Single-particle basis size (defaults to the highest level + 1).
        #[arg(long)]
        basis_size: Option<usize>,
    },
    /// The four three-particle mixed-symmetry vectors over distinct levels.
    MixedBasis {
        #[arg(short = 'l', long)]
        levels: String,
    },
    /// Project a relabeled product onto the six-vector three-particle basis.
    Decompose {
        #[arg(short = 'l', long)]
        levels: String,
        /// Relabeling (x,y,z): particle x takes the first level, y the second, z the third.
        #[arg(long, default_value = "1,2,3")]
        tuple: String,
    },
    /// Classify the exchange symmetry of a state.
    Classify {
        #[command(flatten)]
        spec: StateSpec,
    },
    /// One-body expectation values per particle.
    Expect {
        #[command(flatten)]
        spec: StateSpec,
        /// One-body operator.
        #[arg(long, value_enum, default_value = "energy")]
        op: OperatorKind,
        /// Level energies for the energy operator (exact numbers).
        #[arg(long)]
        energies: Option<String>,
        /// Box length for the position operator.
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        /// 1-based particle index; all particles when omitted.
        #[arg(short = 'i', long)]
        particle: Option<usize>,
    },
    /// Enumerate occupation-number states.
    Occupations {
        /// Number of single-particle levels.
        #[arg(long)]
        n_levels: usize,
        /// Particle number.
        #[arg(short = 'N', long = "N")]
        n: usize,
        /// Particle statistics.
        #[arg(long, value_enum)]
        stat: StatArg,
        /// Optional level energies to report state energies.
        #[arg(long)]
        energies: Option<String>,
    },
    /// Canonical or grand-canonical partition function.
    Partition {
        /// Particle statistics.
        #[arg(long, value_enum)]
        stat: StatArg,
        #[command(flatten)]
        spectrum: SpectrumSpec,
        /// Particle number (canonical ensemble).
        #[arg(short = 'N', long = "N")]
        n: Option<u64>,
        /// Chemical potential (grand-canonical ensemble).
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<f64>,
        /// Inverse temperature 1/kT.
        #[arg(long)]
        beta: Option<f64>,
        /// Temperature.
        #[arg(long = "T")]
        temperature: Option<f64>,
        /// Three-dimensional continuum gas of volume V (Maxwell-Boltzmann).
        #[arg(long)]
        continuum: bool,
        /// Volume of the continuum gas.
        #[arg(long = "V")]
        volume: Option<f64>,
        /// Exact enumeration (capped) or the cycle recursion.
        #[arg(long, value_enum, default_value = "enumerate")]
        method: MethodArg,
    },
    /// Free energy per particle along a fixed-density sequence of sizes.
    Extensivity {
        /// Particle statistics.
        #[arg(long, value_enum)]
        stat: StatArg,
        /// Continuum gas or truncated one-dimensional box.
        #[arg(long, value_enum, default_value = "continuum")]
        model: ModelArg,
        /// Temperature.
        #[arg(long = "T", default_value_t = 1.0)]
        temperature: f64,
        /// Volume per particle.
        #[arg(long, default_value_t = 1.0)]
        volume_per_particle: f64,
        /// Particle numbers; the volume scales with each.
        #[arg(long, default_value = "1,2,10,100,10000")]
        sizes: String,
        /// Levels kept in the box spectrum.
        #[arg(long, default_value_t = 200)]
        cutoff: usize,
    },
    /// Replay every identity check and print the ledger.
    VerifyPaper {
        #[arg(long, hide = true)]
        tamper_mixed_basis: bool,
    },
}

fn run(cli: Cli) -> Result<(String, Option<CliError>), CliError> {
    let g = &cli.global;
    let overrides = Overrides {
        mode: g.mode,
        output: g.output,
        seed: g.seed,
        max_n: g.max_n,
        max_levels: g.max_levels,
        mass: g.mass,
    };
    let cfg = RunConfig::resolve(&overrides, g.config.as_deref())?;
    let (report, deferred) = match cli.command {
        Command::Symmetrize {
            n,
            levels,
            parity,
            basis_size,
        } => (commands::symmetrize(&cfg, n, &levels, parity, basis_size)?, None),
        Command::MixedBasis { levels } => (commands::mixed_basis(&levels)?, None),
        Command::Decompose { levels, tuple } => (commands::decompose(&levels, &tuple)?, None),
        Command::Classify { spec } => (commands::classify(&spec)?, None),
        Command::Expect {
            spec,
            op,
            energies,
            length,
            particle,
        } => (
            commands::expect(&spec, op, energies.as_deref(), length, particle)?,
            None,
        ),
        Command::Occupations {
            n_levels,
            n,
            stat,
            energies,
        } => (
            commands::occupations(&cfg, n_levels, n, stat, energies.as_deref())?,
            None,
        ),
        Command::Partition {
            stat,
            spectrum,
            n,
            mu,
            beta,
            temperature,
            continuum,
            volume,
            method,
        } => (
            commands::partition(
                &cfg,
                &commands::PartitionArgs {
                    stat,
                    spectrum: &spectrum,
                    n,
                    mu,
                    beta,
                    temperature,
                    continuum,
                    volume,
                    method,
                },
            )?,
            None,
        ),
        Command::Extensivity {
            stat,
            model,
            temperature,
            volume_per_particle,
            sizes,
            cutoff,
        } => (
            commands::extensivity(&cfg, stat, model, temperature, volume_per_particle, &sizes, cutoff)?,
            None,
        ),
        Command::VerifyPaper { tamper_mixed_basis } => commands::verify_paper(&cfg, tamper_mixed_basis),
    };
    Ok((report.render(cfg.output), deferred))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    match run(cli) {
        Ok((text, deferred)) => {
            let written = match &out {
                Some(path) => std::fs::write(path, &text).map_err(CliError::from),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("idstat: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            match deferred {
                Some(e) => {
                    eprintln!("idstat: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("idstat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

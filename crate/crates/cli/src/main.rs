//! `cg-rotor`: Clebsch-Gordan matrices, representation matrices, crystal
//! reductions and invariant elasticity from the command line.
//!
//! Exit codes: 0 success, 1 domain error, 2 verification mismatch, 64 usage.

mod angle;
mod commands;
mod error;
mod input;
mod latex;
mod render;
mod scalar;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use cg_rotor_core::{BasisKind, RadicalScalar, Weight};
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{InvariantInput, MaterialInput, Report};
use error::{CliError, CliResult};
use scalar::{Backend, BackendKind};

const BACKEND_ENV: &str = "CG_ROTOR_BACKEND";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BasisArg {
    H,
    E,
}

#[derive(Parser)]
#[command(name = "cg-rotor", version, about = "Exact Clebsch-Gordan matrices for integer-weight rotation irreps")]
struct Cli {
    /// Scalar backend; the CG_ROTOR_BACKEND environment variable takes
    /// precedence.
    #[arg(long, global = true, value_enum, default_value = "exact")]
    backend: BackendKind,
    /// Output format [default: json, text for verify]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Largest weight any command may request.
    #[arg(long, global = true, default_value_t = 12)]
    weight_cap: Weight,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One Clebsch-Gordan family, or all families for N1, N2.
    Cg {
        #[arg(long)]
        n1: Weight,
        #[arg(long)]
        n2: Weight,
        #[arg(long)]
        n: Option<Weight>,
        #[arg(long, value_enum, default_value = "h")]
        basis: BasisArg,
    },
    /// Representation matrix of a rotation about a coordinate axis.
    Rep {
        #[arg(long)]
        weight: Weight,
        /// m1, 0 or p1
        #[arg(long)]
        axis: String,
        /// pi/2, 2pi/3, degrees (90), or radians (0.3rad, float only)
        #[arg(long, allow_hyphen_values = true)]
        angle: String,
    },
    /// Compare every family up to a weight against the Racah formula.
    Verify {
        #[arg(long)]
        max_weight: Weight,
        /// Worker threads [default: available parallelism]
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Surviving elasticity coefficients for a crystal system.
    Crystal {
        #[arg(long, required_unless_present = "generators", conflicts_with = "generators")]
        system: Option<String>,
        /// JSON file: {"name", "generators": [3x3 matrix | {"axis", "angle"}]}
        #[arg(long)]
        generators: Option<PathBuf>,
    },
    /// Invariant first-order elasticity system.
    #[command(subcommand)]
    Elasticity(ElasticityCommand),
    /// Quadratic invariants of a stress state.
    Invariants {
        /// Symmetric 3x3 tensor, rows separated by ';'
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["p", "s"])]
        tensor: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "s")]
        p: Option<String>,
        /// Five deviator components s-2..s2
        #[arg(long, allow_hyphen_values = true, requires = "p")]
        s: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        c1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        c2: String,
        /// JSON file with any of c1, c2, a, b, d
        #[arg(long)]
        coeffs: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MaterialArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
    /// Require the coefficients to respect this crystal system.
    #[arg(long)]
    system: Option<String>,
    /// JSON file with any of c1, c2, a, b, d
    #[arg(long)]
    coeffs: Option<PathBuf>,
}

impl MaterialArgs {
    fn input(&self) -> MaterialInput<'_> {
        MaterialInput { lambda: &self.lambda, mu: &self.mu, system: self.system.as_deref(), coeffs: self.coeffs.as_deref() }
    }
}

#[derive(Subcommand)]
enum ElasticityCommand {
    /// Compliance matrix, symbol constants and hyperbolicity.
    Assemble {
        #[command(flatten)]
        material: MaterialArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        density: String,
    },
    /// The nine characteristic speeds along a direction.
    Speeds {
        #[command(flatten)]
        material: MaterialArgs,
        #[arg(long, allow_hyphen_values = true)]
        density: String,
        /// x,y,z (normalized before use)
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
    },
}

fn dispatch<B: Backend>(cli: &Cli) -> CliResult<Report> {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Verify { .. } => Format::Text,
        _ => Format::Json,
    });
    let cap = cli.weight_cap;
    match &cli.command {
        Command::Cg { n1, n2, n, basis } => {
            let basis = match basis {
                BasisArg::H => BasisKind::H,
                BasisArg::E => BasisKind::E,
            };
            commands::cg::<B>(*n1, *n2, *n, basis, format, cap)
        }
        Command::Rep { weight, axis, angle } => commands::rep::<B>(*weight, axis, angle, format, cap),
        Command::Verify { max_weight, jobs } => commands::verify::<B>(*max_weight, *jobs, format, cap),
        Command::Crystal { system, generators } => commands::crystal::<B>(system.as_deref(), generators.as_deref(), format),
        Command::Elasticity(ElasticityCommand::Assemble { material, density }) => {
            commands::elasticity_assemble::<B>(&material.input(), density, format)
        }
        Command::Elasticity(ElasticityCommand::Speeds { material, density, direction }) => {
            commands::elasticity_speeds::<B>(&material.input(), density, direction, format)
        }
        Command::Invariants { tensor, p, s, c1, c2, coeffs } => {
            let input = InvariantInput {
                tensor: tensor.as_deref(),
                p: p.as_deref(),
                s: s.as_deref(),
                c1,
                c2,
                coeffs: coeffs.as_deref(),
            };
            commands::invariants::<B>(&input, format)
        }
    }
}

fn backend(cli: &Cli) -> CliResult<BackendKind> {
    match std::env::var(BACKEND_ENV) {
        Ok(v) if !v.trim().is_empty() => {
            BackendKind::parse(&v).ok_or_else(|| CliError::Usage(format!("{BACKEND_ENV}={v:?} is not a backend; expected exact or float")))
        }
        _ => Ok(cli.backend),
    }
}

fn emit(cli: &Cli, report: &Report) -> CliResult<()> {
    let mut text = report.body.clone();
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<Report> {
    let report = match backend(cli)? {
        BackendKind::Exact => dispatch::<RadicalScalar>(cli)?,
        BackendKind::Float => dispatch::<f64>(cli)?,
    };
    emit(cli, &report)?;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    match run(&cli) {
        Ok(report) if report.mismatch => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cg-rotor: {e}");
            e.exit_code()
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod check;
mod commands;
mod number;

/// Quaternion polarization calculus and three-waveplate phase shifter design.
#[derive(Parser, Debug)]
#[command(name = "polarquat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a signal between quaternion, Jones, ellipse and Stokes forms.
    Convert {
        #[arg(long, value_enum)]
        from: Form,
        #[arg(long, value_enum)]
        to: Form,
        /// Source value as JSON (a quaternion may also be given as "q0,q1,q2,q3").
        #[arg(long)]
        input: String,
    },
    /// Compose a JSON device sequence and optionally propagate a signal through it.
    Compose {
        /// JSON array of devices in propagation order.
        #[arg(long)]
        devices: String,
        /// Input signal quaternion "q0,q1,q2,q3".
        #[arg(long)]
        input: Option<String>,
    },
    /// Waveplate angles taking q to e^{i phi} r.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        /// Phase shift in radians.
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, value_enum, default_value_t = BranchArg::All)]
        branch: BranchArg,
        /// Singularity tolerance on the target transform.
        #[arg(long, default_value_t = polarquat::phase_shifter::SINGULAR_TOLERANCE)]
        tol: f64,
        /// Print angles in degrees.
        #[arg(long)]
        degrees: bool,
    },
    /// Write a full 2π phase ramp to a CSV file.
    Ramp {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyArg::Continuous)]
        policy: PolicyArg,
        #[arg(long, default_value_t = polarquat::phase_shifter::SINGULAR_TOLERANCE)]
        tol: f64,
        /// Write angle columns in degrees.
        #[arg(long)]
        degrees: bool,
    },
    /// Run the built-in self-check groups.
    Check,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Jones,
    Quat,
    Ellipse,
    Stokes,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyArg {
    Continuous,
    Branch1,
    Branch2,
}

/// A command failure, carrying its process exit code.
#[derive(Debug)]
pub enum Failure {
    Check,
    Input(anyhow::Error),
    Unrecoverable(String),
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Input(_) => 2,
            Failure::Unrecoverable(_) => 3,
            Failure::Io(_) => 4,
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Convert { from, to, input } => commands::convert(from, to, &input),
        Command::Compose { devices, input } => commands::compose(&devices, input.as_deref()),
        Command::Solve {
            q,
            r,
            phi,
            branch,
            tol,
            degrees,
        } => commands::solve(&q, &r, phi, branch, tol, degrees),
        Command::Ramp {
            q,
            r,
            samples,
            out,
            policy,
            tol,
            degrees,
        } => commands::ramp(&q, &r, samples, &out, policy, tol, degrees),
        Command::Check => check::run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Check => {}
                Failure::Input(e) | Failure::Io(e) => eprintln!("error: {e:#}"),
                Failure::Unrecoverable(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

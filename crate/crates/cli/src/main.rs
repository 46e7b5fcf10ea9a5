use std::fmt;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use mellin_core::roots::ANNIHILATION_TOLERANCE;
use mellin_core::{make_profile, ExponentProfile};

mod dims;
mod operators;
mod render;
mod series;
mod verify;

#[derive(Parser, Debug)]
#[command(name = "mellin")]
#[command(about = "Mellin's hypergeometric system for y^m + x_1 y^m_1 + ... + x_n y^m_n - 1 = 0")]
#[command(version)]
struct Cli {
    /// Truncation order of every series
    #[arg(long, global = true, default_value_t = 12)]
    order: u32,

    /// Seed for the root finder's initial perturbation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Relative tolerance for numerical annihilation checks
    #[arg(long, global = true, default_value_t = ANNIHILATION_TOLERANCE)]
    tol_annihilation: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ProfileArgs {
    /// Degree m of the leading term
    #[arg(value_name = "M")]
    m: u32,

    /// Exponents m_1 > ... > m_n > 0
    #[arg(value_name = "EXPONENT", num_args = 1.., required = true)]
    exponents: Vec<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, dim Y, dim R, dim S, the sets B' and B'', coset representatives
    Dims {
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Mellin, G_j and Horn operators with the lattice matrices
    Operators {
        #[command(flatten)]
        profile: ProfileArgs,

        /// Check (-1)^(m+1) m^m H'_j = x_j^m M_j exactly; exit 2 on mismatch
        #[arg(long)]
        check_horn: bool,
    },
    /// Principal series, a convenient-basis series or the root jets
    Series {
        #[command(flatten)]
        profile: ProfileArgs,

        /// The principal series (the default)
        #[arg(long, conflicts_with_all = ["basis", "roots"])]
        principal: bool,

        /// Convenient-basis series f_I for a comma-separated index I
        #[arg(long, value_name = "I", conflicts_with = "roots")]
        basis: Option<String>,

        /// Jets of every root branch of the twisted equations at the origin
        #[arg(long)]
        roots: bool,

        /// Whether the m^n rotations of the series span a space of full rank
        #[arg(long, conflicts_with = "roots")]
        generating_check: bool,
    },
    /// Every check that applies to the profile; exit 2 if any fails
    Verify {
        #[command(flatten)]
        profile: ProfileArgs,
    },
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub profile: ExponentProfile,
    pub order: u32,
    pub seed: u64,
    pub json: bool,
    pub tol_annihilation: f64,
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: exit code 1.
    Usage(String),
    /// A check ran and failed, or the computation broke down: exit code 2.
    Verification(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Verification(msg) => f.write_str(msg),
        }
    }
}

impl From<mellin_core::Error> for Failure {
    fn from(e: mellin_core::Error) -> Self {
        use mellin_core::Error as E;
        match e {
            E::InvalidProfile(_)
            | E::IndexOutOfBox { .. }
            | E::InsufficientOrder { .. }
            | E::LengthMismatch { .. } => Failure::Usage(e.to_string()),
            other => Failure::Verification(other.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verification(_) => 2,
        }
    }
}

/// What a command printed, and whether its checks passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn config(args: &ProfileArgs, cli: &Cli) -> Result<RunConfig, Failure> {
    if !cli.tol_annihilation.is_finite() || cli.tol_annihilation <= 0.0 {
        return Err(Failure::Usage(format!(
            "--tol-annihilation must be positive, got {}",
            cli.tol_annihilation
        )));
    }
    Ok(RunConfig {
        profile: make_profile(args.m, &args.exponents)?,
        order: cli.order,
        seed: cli.seed,
        json: cli.json,
        tol_annihilation: cli.tol_annihilation,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Dims { profile } => dims::run(&config(profile, cli)?),
        Command::Operators {
            profile,
            check_horn,
        } => operators::run(&config(profile, cli)?, *check_horn),
        Command::Series {
            profile,
            basis,
            roots,
            generating_check,
            ..
        } => {
            let which = match (basis, roots) {
                (Some(text), _) => series::Which::Basis(render::parse_index(text)?),
                (None, true) => series::Which::Roots,
                (None, false) => series::Which::Principal,
            };
            series::run(&config(profile, cli)?, which, *generating_check)
        }
        Command::Verify { profile } => verify::run(&config(profile, cli)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}

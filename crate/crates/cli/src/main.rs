mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use checkers_core::{Limits, MassParam, Mode, Site};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Amplitudes, probabilities and identities of the Feynman checkers model.
#[derive(Parser, Debug)]
#[command(name = "checkers", version)]
struct Cli {
    /// Largest time evaluated in exact arithmetic.
    #[arg(long, global = true, env = "CHECKERS_EXACT_LIMIT", default_value_t = Limits::default().exact_tau_max)]
    exact_limit: i64,

    /// Largest time evaluated in floating point.
    #[arg(long, global = true, env = "CHECKERS_FLOAT_LIMIT", default_value_t = Limits::default().float_tau_max)]
    float_limit: i64,

    /// Largest time for brute-force path enumeration.
    #[arg(long, global = true, env = "CHECKERS_ORACLE_LIMIT", default_value_t = Limits::default().oracle_tau_max)]
    oracle_limit: i64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Amplitude and probability at one site.
    Amplitude(AmplitudeArgs),
    /// Probability distribution over one time row, as CSV or JSON.
    Distribution(DistributionArgs),
    /// Run a verification suite and print a JSON summary.
    Verify(VerifyArgs),
    /// Row, column and quadratic sums plus the conjecture report.
    Identities(IdentitiesArgs),
    /// Amplitudes that avoid an absorbing set read from a JSON file.
    Bypass(BypassArgs),
}

#[derive(Args, Debug)]
pub struct SiteArgs {
    /// Position in lattice units.
    #[arg(long, allow_negative_numbers = true, requires = "tau", conflicts_with_all = ["x", "t"])]
    pub n: Option<i64>,
    /// Time in lattice units.
    #[arg(long, requires = "n")]
    pub tau: Option<i64>,
    /// Physical position; needs --t and --eps.
    #[arg(long, allow_negative_numbers = true, requires_all = ["t", "eps"])]
    pub x: Option<String>,
    /// Physical time; needs --x and --eps.
    #[arg(long, requires_all = ["x", "eps"])]
    pub t: Option<String>,
}

#[derive(Args, Debug)]
pub struct MassArgs {
    /// Dimensionless mass m·eps: `p/q`, an integer, or a decimal (decimals run in float mode).
    #[arg(long, conflicts_with = "m")]
    pub mass: Option<MassParam>,
    /// Physical mass; combined with --eps.
    #[arg(long, requires = "eps")]
    pub m: Option<MassParam>,
    /// Lattice step.
    #[arg(long)]
    pub eps: Option<String>,
    /// Arithmetic; defaults to exact for rational masses and float for decimals.
    #[arg(long)]
    pub mode: Option<Mode>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Dp,
    Closed,
    Oracle,
    Edge,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct AmplitudeArgs {
    #[command(flatten)]
    pub site: SiteArgs,
    #[command(flatten)]
    pub mass: MassArgs,
    #[arg(long, value_enum, default_value_t = Method::Dp)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    pub format: TextFormat,
}

#[derive(Args, Debug)]
pub struct DistributionArgs {
    #[arg(long)]
    pub tau: i64,
    #[command(flatten)]
    pub mass: MassArgs,
    /// Append a row with column totals.
    #[arg(long)]
    pub totals: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Conservation,
    Nonzero,
    Velocity,
    Symmetry,
    Series,
    Bypass,
    Linear,
    Quadratic,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Largest time (or index, for the quadratic suite) to check; each suite has its own default.
    #[arg(long, env = "CHECKERS_TAU_MAX")]
    pub tau_max: Option<i64>,
    /// Masses to check, comma separated; each suite has its own default set.
    #[arg(long, value_delimiter = ',')]
    pub mass: Vec<MassParam>,
    /// Tolerance for floating-point comparisons.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the JSON summary here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct IdentitiesArgs {
    /// Mass for the row, column and quadratic sums and conjecture item 1.
    #[arg(long, default_value = "1")]
    pub mass: MassParam,
    /// Largest row or column index for the sums.
    #[arg(long, default_value_t = 10)]
    pub max_index: i64,
    /// Largest row for the conjecture report.
    #[arg(long, default_value_t = 4)]
    pub conjecture_max: i64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BypassArgs {
    /// JSON file holding `[[n, tau], ...]`.
    #[arg(long)]
    pub set: PathBuf,
    /// Sites to evaluate as `n,tau`; defaults to every member of the set.
    #[arg(long, allow_hyphen_values = true)]
    pub query: Vec<Site>,
    /// Print the total probability absorbed by the set.
    #[arg(long)]
    pub conservation: bool,
    /// Keep a queried member of the set absorbing, so its value is zero. By default the member itself is dropped from the set.
    #[arg(long)]
    pub include_endpoint: bool,
    #[command(flatten)]
    pub mass: MassArgs,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    pub format: TextFormat,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<checkers_core::Error> for Failure {
    fn from(e: checkers_core::Error) -> Self {
        use checkers_core::Error::*;
        let code = match e {
            LimitExceeded { .. } => 3,
            NonBlocking => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits {
        exact_tau_max: cli.exact_limit,
        float_tau_max: cli.float_limit,
        oracle_tau_max: cli.oracle_limit,
    };
    let result = match &cli.command {
        Command::Amplitude(a) => commands::amplitude(a, &limits),
        Command::Distribution(a) => commands::distribution(a, &limits),
        Command::Verify(a) => verify::run(a, &limits),
        Command::Identities(a) => commands::identities(a),
        Command::Bypass(a) => commands::bypass(a, &limits),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod input;
mod report;
mod verify;

use report::Format;

/// Exact special values of the cotangent zeta function and numerical checks
/// of the identities behind them.
#[derive(Debug, Parser)]
#[command(name = "cotzeta", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Quadratic irrational: sqrt:D, quad:P,Q,R,D for (P+Q*sqrt(D))/R, or golden
    #[arg(long, global = true, default_value = "sqrt:2")]
    pub alpha: String,

    /// Series index; the zeta value is taken at s = 2m - 1
    #[arg(long, global = true, default_value_t = 2)]
    pub m: u32,

    /// Truncation point of the partial series
    #[arg(long, global = true)]
    pub k: Option<u64>,

    /// Comma-separated list of k (or n) values
    #[arg(long, global = true)]
    pub grid: Option<String>,

    /// Working precision in bits
    #[arg(long, global = true, env = "COTZETA_PREC", default_value_t = 96)]
    pub prec: u32,

    /// Matrix a,b,c,d of determinant 1 with c > 0
    #[arg(long, global = true)]
    pub matrix: Option<String>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for sampled suites
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Exponent q of the exponential sum
    #[arg(long, global = true)]
    pub q: Option<u32>,

    /// Rational point num/den
    #[arg(long, global = true)]
    pub x: Option<String>,

    /// Largest Bernoulli index
    #[arg(long, global = true)]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stabilizing matrix, totally positive unit and Pell solution for alpha
    Unit,
    /// Exact closed form of xi(2m-1, alpha)
    Value,
    /// Partial sum xi_k(2m-1, alpha)
    Series,
    /// Partial sums over a grid of k with their distance to the closed form
    Table,
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Bernoulli numbers, and polynomial values at --x
    Bernoulli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Deform2,
    Deform1,
    Thm1,
    Ba,
    Lerch,
    Lemma1,
    Bernoulli,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
}

impl From<cotzeta::Error> for CliError {
    fn from(e: cotzeta::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<String> for CliError {
    fn from(e: String) -> Self {
        CliError::Input(e)
    }
}

fn run(cli: &Cli) -> Result<report::Report, CliError> {
    if cli.prec < 32 {
        return Err(CliError::Input(format!("--prec {} is below the minimum of 32", cli.prec)));
    }
    if cli.m < 2 {
        return Err(CliError::Input(format!("--m {} is not allowed; need m >= 2", cli.m)));
    }
    match &cli.command {
        Command::Unit => commands::unit(cli),
        Command::Value => commands::value(cli),
        Command::Series => commands::series(cli),
        Command::Table => commands::table(cli),
        Command::Bernoulli => commands::bernoulli(cli),
        Command::Verify { suite } => verify::run(cli, *suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let rendered = report.render(cli.format);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

//! `dwbc`: compute domain-wall partition functions by several routes, run the
//! verification suites and benchmark the routes against each other.

mod complex;
mod report;
mod run;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use complex::parse_complex;
use num_complex::Complex64;

#[derive(Debug, Parser)]
#[command(name = "dwbc", version, about = "Domain-wall partition functions of the elliptic SOS and six-vertex models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the partition function by one route or all of them.
    Compute(Common),
    /// Run a verification suite: symmetry, recursion, character, dybe,
    /// degeneration, appendix or all.
    Check {
        #[arg(default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Time each route for n = 1 up to --n.
    Bench(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    SosElliptic,
    SosTrig,
    SixVertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Enumerate,
    Transfer,
    Sum,
    Determinant,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "sos-elliptic")]
    pub model: Model,
    #[arg(long, value_enum, default_value = "all")]
    pub route: Route,
    /// Lattice size; defaults to the length of explicit lists, else 3 (6 for bench).
    #[arg(long)]
    pub n: Option<usize>,
    /// Seed for the ChaCha8 generator drawing spectral parameters.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, num_args = 1.., value_parser = parse_complex, allow_negative_numbers = true)]
    pub u: Option<Vec<Complex64>>,
    #[arg(long, num_args = 1.., value_parser = parse_complex, allow_negative_numbers = true)]
    pub v: Option<Vec<Complex64>>,
    #[arg(long, num_args = 1.., value_parser = parse_complex, allow_negative_numbers = true)]
    pub z: Option<Vec<Complex64>>,
    #[arg(long, num_args = 1.., value_parser = parse_complex, allow_negative_numbers = true)]
    pub w: Option<Vec<Complex64>>,
    #[arg(long, value_parser = parse_complex, default_value = "i", allow_hyphen_values = true)]
    pub tau: Complex64,
    #[arg(long, value_parser = parse_complex, default_value = "0.31+0.02i", allow_hyphen_values = true)]
    pub lambda: Complex64,
    #[arg(long, value_parser = parse_complex, default_value = "0.17-0.01i", allow_hyphen_values = true)]
    pub hbar: Complex64,
    #[arg(long, value_parser = parse_complex, default_value = "1.3", allow_hyphen_values = true)]
    pub q: Complex64,
    /// Dynamical variable of the trigonometric SOS model; defaults to e^{2πiλ}.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub mu: Option<Complex64>,
    /// Largest accepted pairwise relative difference between routes.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Split the exponential sums across threads.
    #[arg(long)]
    pub parallel: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (format, outcome) = match &cli.command {
        Command::Compute(c) => (c.format, run::compute(c)),
        Command::Check { suite, common } => (common.format, run::check(suite, common)),
        Command::Bench(c) => (c.format, run::bench(c)),
    };
    match outcome {
        Ok(report) => {
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

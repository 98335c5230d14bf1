//! `wcrte`: estimate WCRTE/WCRE on data files, run bias/MSE studies,
//! simulate critical values and power, and compare against the published
//! reference tables.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wcrte_core::rng::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "wcrte", version, about = "Nonparametric WCRTE/WCRE estimation and uniformity testing")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Master seed for all simulation [default: 0xC0FFEE]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo replications [default: 10000]
    #[arg(long, global = true)]
    pub reps: Option<usize>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub threads: Option<usize>,
    /// Write results here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Shorthand for `--format json`
    #[arg(long, global = true)]
    pub json: bool,
}

impl GlobalArgs {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn reps(&self) -> usize {
        self.reps.unwrap_or(10_000)
    }

    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a measure from a file with one value per line
    Estimate(EstimateArgs),
    /// Bias and MSE of estimators over simulated samples
    MseStudy(MseStudyArgs),
    /// Simulated critical values, or tests of a data file against U(0, 1)
    CriticalValues(CriticalArgs),
    /// Rejection rates of uniformity tests under alternatives
    Power(PowerArgs),
    /// Recompute published tables and report the differences
    VerifyTables(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Data file, one nonnegative value per line
    pub file: PathBuf,
    /// Estimator, e.g. `wcrte:l,alpha=2` or `wcre:vasicek,m=auto`
    pub spec: String,
    /// Window used when the spec names none
    #[arg(long)]
    pub m: Option<String>,
    /// Confidence level of the normal interval
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
}

#[derive(Debug, Args)]
pub struct MseStudyArgs {
    /// JSON study configuration; flags given alongside it override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Models, e.g. `exp:lambda=1`
    #[arg(long, value_delimiter = ';')]
    pub model: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Tsallis orders; 1 or `wcre` selects WCRE
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<String>,
    /// Estimator kinds: plugin, vasicek, ebrahimi, modified, lstat
    #[arg(long, value_delimiter = ',')]
    pub estimator: Vec<String>,
    /// Windows for windowed kinds: `sweep`, `auto` or a list of counts
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Orders of the WCRTE tests; 1 or `wcre` selects the WCRE test
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<String>,
    /// Further tests: ks, cvm, ad, ent, wcrte:<a>, wcre
    #[arg(long, value_delimiter = ',')]
    pub test: Vec<String>,
    /// Windows of the entropy test: `auto` or a list of counts
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<String>,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    /// Test this data file instead of tabulating critical values
    #[arg(long)]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// JSON power configuration; flags given alongside it override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Alternatives, e.g. `alt:A,j=1.5`, or any model
    #[arg(long, value_delimiter = ';')]
    pub alternative: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Orders of the WCRTE tests, replacing the standard ones
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub test: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Null replications for the critical values [default: --reps]
    #[arg(long)]
    pub critical_reps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Table numbers among 2..=8 [default: all]
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(2..=8))]
    pub table: Vec<u8>,
    /// Directory with replacement reference CSV files
    #[arg(long)]
    pub reference_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}

//! Experiment runner: prices, smiles and sensitivity sweeps, Bermudan date curves, PMFs and
//! densities, DCOS error decay, Monte Carlo checks and the timing benchmark.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hqh::experiments::Axis;
use hqh::models::{ModelKind, Scenario};
use hqh::option::PayoffKind;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Numerical(hqh::Error),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    /// Parameter problems count as configuration errors, everything else as numerical.
    pub fn from_config(e: hqh::Error) -> Self {
        CliError::Config(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<hqh::Error> for CliError {
    fn from(e: hqh::Error) -> Self {
        match e {
            hqh::Error::Config(_) | hqh::Error::InvalidParam { .. } => CliError::from_config(e),
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "hqh", version, about = "COS pricing under Q-Hawkes, Hawkes and Poisson jump models")]
pub struct Cli {
    /// Parameter preset; a config file may override any field.
    #[arg(long, global = true, value_parser = parse_scenario)]
    pub scenario: Option<Scenario>,
    /// TOML config with optional `scenario`, `[model]` and `[engine]` tables, or a JSON
    /// sidecar from an earlier run.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// CSV destination; a `.json` sidecar is written next to it. Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: hqh::Error| e.to_string())
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: hqh::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<PayoffKind, String> {
    s.parse().map_err(|e: hqh::Error| e.to_string())
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse().map_err(|e: hqh::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct Contract {
    #[arg(long, value_parser = parse_kind, default_value = "put")]
    pub kind: PayoffKind,
    /// Defaults to the spot price.
    #[arg(long)]
    pub strike: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One European or Bermudan price with its implied volatility.
    Price {
        #[arg(long, value_parser = parse_model)]
        model: ModelKind,
        #[command(flatten)]
        contract: Contract,
        /// Number of exercise dates; omitted for a European contract.
        #[arg(long)]
        dates: Option<u32>,
    },
    /// Implied volatilities along one axis.
    Smile {
        #[arg(long, value_parser = parse_axis, default_value = "strike")]
        axis: Axis,
        /// Axis points; defaults depend on the axis.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long, value_parser = parse_model, value_delimiter = ',', default_value = "hqh,hh,bates")]
        models: Vec<ModelKind>,
        #[command(flatten)]
        contract: Contract,
    },
    /// Bermudan prices against the number of exercise dates.
    Bermudan {
        #[arg(long, value_parser = parse_model, value_delimiter = ',', default_value = "hqh,hh")]
        models: Vec<ModelKind>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,12,24")]
        dates: Vec<u32>,
        #[command(flatten)]
        contract: Contract,
    },
    /// Closed-form and DCOS-recovered PMF of the activation number.
    Pmf {
        #[arg(long, default_value_t = 1.0)]
        maturity: f64,
        #[arg(long, default_value_t = 60)]
        max_q: u32,
        #[arg(long, default_value_t = 128)]
        n_terms: usize,
    },
    /// COS-recovered density of the log price.
    Density {
        #[arg(long, value_parser = parse_model, value_delimiter = ',', default_value = "hqh,hh")]
        models: Vec<ModelKind>,
        #[arg(long, default_value_t = 1.0)]
        maturity: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// DCOS error against the number of terms for a uniform and a Poisson law.
    Dcos,
    /// Monte Carlo prices next to COS prices.
    Simulate {
        #[arg(long, value_parser = parse_model)]
        model: ModelKind,
        #[arg(long)]
        paths: Option<usize>,
        #[arg(long, value_parser = parse_kind, default_value = "put")]
        kind: PayoffKind,
        #[arg(long, default_value_t = 1.0)]
        maturity: f64,
        /// Strikes as multiples of the spot.
        #[arg(long, value_delimiter = ',', default_value = "0.8,1.0,1.2")]
        moneyness: Vec<f64>,
        /// Also write one path as `t,S,V,lambda,N` rows to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Mean wall time over the 21 x 20 strike-maturity grid.
    Bench {
        #[arg(long, value_parser = parse_model, value_delimiter = ',', default_value = "hqh,hh,bates")]
        models: Vec<ModelKind>,
        #[arg(long, default_value_t = 50)]
        repeats: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

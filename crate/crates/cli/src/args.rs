//! Command-line flags and their merge onto a config file.

use std::path::PathBuf;

use clap::{Args, Parser};

use crate::config::{parse_ns, Command, ExperimentConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "burstsync",
    version,
    about = "Bursty-deletion synchronization experiments"
)]
pub struct Cli {
    /// Command to run; may be omitted when the config file names one.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// TOML config file; flags given on the command line take precedence.
    #[arg(long, short)]
    pub config: Option<PathBuf>,

    /// Print the effective config as TOML instead of running it.
    #[arg(long)]
    pub dump_config: bool,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Burst exit probability.
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Burst start probabilities, comma separated.
    #[arg(long, alias = "beta", value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,

    /// Block lengths: `a..b` (inclusive), a single value, or a list.
    #[arg(long = "n")]
    pub ns: Option<String>,

    #[arg(long)]
    pub samples: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// CSV destination; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Largest block length for exhaustive enumeration.
    #[arg(long)]
    pub cap: Option<usize>,

    /// Code rates for `syncdemo`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub rates: Option<Vec<f64>>,

    /// Trials per rate for `syncdemo`.
    #[arg(long)]
    pub trials: Option<usize>,

    /// Burst lengths for `bruns`: `a..b`, a single value, or a list.
    #[arg(long = "b")]
    pub bursts: Option<String>,

    /// Worker threads; defaults to rayon's choice.
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Cli {
    /// Builds and validates the effective config.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                let cfg: ExperimentConfig = toml::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                Some(cfg)
            }
            None => None,
        };
        let mut cfg = match (base, self.command) {
            (Some(mut cfg), cmd) => {
                if let Some(cmd) = cmd {
                    cfg.command = cmd;
                }
                cfg
            }
            (None, Some(cmd)) => {
                let alpha = self
                    .flags
                    .alpha
                    .ok_or_else(|| CliError::Usage("--alpha is required".into()))?;
                let betas = self
                    .flags
                    .betas
                    .clone()
                    .ok_or_else(|| CliError::Usage("--beta is required".into()))?;
                ExperimentConfig::new(cmd, alpha, betas)
            }
            (None, None) => {
                return Err(CliError::Usage("give a command or --config".into()));
            }
        };
        let f = &self.flags;
        if let Some(v) = f.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = &f.betas {
            cfg.betas = v.clone();
        }
        if let Some(v) = &f.ns {
            cfg.ns = parse_ns(v).map_err(CliError::Usage)?;
        }
        if f.samples.is_some() {
            cfg.samples = f.samples;
        }
        if f.seed.is_some() {
            cfg.seed = f.seed;
        }
        if f.output.is_some() {
            cfg.output = f.output.clone();
        }
        if let Some(v) = f.cap {
            cfg.cap = v;
        }
        if let Some(v) = &f.rates {
            cfg.rates = v.clone();
        }
        if let Some(v) = f.trials {
            cfg.trials = v;
        }
        if let Some(v) = &f.bursts {
            cfg.bursts = parse_ns(v).map_err(CliError::Usage)?;
        }
        if f.threads.is_some() {
            cfg.threads = f.threads;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

//! Experiment configuration: a TOML file, command-line flags, or both.
//!
//! Flags override file values. Everything is validated before any work
//! starts, so a bad value never produces a partial CSV.

use std::path::PathBuf;

use burstsync::exact::MAX_ENUMERATION_CAP;
use burstsync::DeletionParams;
use clap::ValueEnum;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Exhaustive block entropies and the block-length identity residual.
    Exact,
    /// Monte Carlo estimates of E_n, J_n and the minimum rate.
    Mc,
    /// Small-beta expansions and their components.
    Asym,
    /// First b-run extent distribution on uniform sources.
    Bruns,
    /// Deletion-pattern typicality violation rates.
    Typicality,
    /// Hash-binning synchronization error rates.
    Syncdemo,
    /// Minimum-rate estimates against the expansion, per beta.
    Sweep,
}

impl Command {
    pub fn is_stochastic(self) -> bool {
        !matches!(self, Command::Exact | Command::Asym)
    }

    fn uses_samples(self) -> bool {
        matches!(
            self,
            Command::Mc | Command::Bruns | Command::Typicality | Command::Sweep
        )
    }

    fn uses_ns(self) -> bool {
        matches!(
            self,
            Command::Exact | Command::Mc | Command::Syncdemo | Command::Sweep
        )
    }
}

pub const DEFAULT_RATES: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_BURSTS: [usize; 3] = [1, 2, 3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    pub alpha: f64,
    pub betas: Vec<f64>,
    /// Block lengths; a TOML list or an inclusive range string such as `"2..8"`.
    #[serde(default, deserialize_with = "de_ns")]
    pub ns: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default = "default_rates")]
    pub rates: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Burst lengths for the `bruns` command.
    #[serde(default = "default_bursts")]
    pub bursts: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

fn default_cap() -> usize {
    burstsync::exact::DEFAULT_ENUMERATION_CAP
}

fn default_rates() -> Vec<f64> {
    DEFAULT_RATES.to_vec()
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

fn default_bursts() -> Vec<usize> {
    DEFAULT_BURSTS.to_vec()
}

fn de_ns<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Vec<usize>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        List(Vec<usize>),
        Text(String),
    }
    match Raw::deserialize(de)? {
        Raw::List(v) => Ok(v),
        Raw::Text(s) => parse_ns(&s).map_err(serde::de::Error::custom),
    }
}

/// Parses `"a..b"` (inclusive), a single value, or a comma-separated list.
pub fn parse_ns(text: &str) -> std::result::Result<Vec<usize>, String> {
    let text = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid block length {s:?}"))
    };
    if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {text:?}"));
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(num).collect()
}

impl ExperimentConfig {
    pub fn new(command: Command, alpha: f64, betas: Vec<f64>) -> Self {
        Self {
            command,
            alpha,
            betas,
            ns: Vec::new(),
            samples: None,
            seed: None,
            output: None,
            cap: default_cap(),
            rates: default_rates(),
            trials: default_trials(),
            bursts: default_bursts(),
            threads: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self =
            toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    /// Parameters for every requested beta, in ascending beta order.
    pub fn params(&self) -> Result<Vec<DeletionParams>> {
        let mut betas = self.betas.clone();
        betas.sort_by(f64::total_cmp);
        betas.dedup();
        betas
            .into_iter()
            .map(|b| DeletionParams::new(self.alpha, b).map_err(CliError::from))
            .collect()
    }

    /// Block lengths in ascending order without repeats.
    pub fn sorted_ns(&self) -> Vec<usize> {
        let mut ns = self.ns.clone();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.betas.is_empty() {
            return usage("at least one beta is required".into());
        }
        for &b in &self.betas {
            DeletionParams::new(self.alpha, b).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        if self.command == Command::Exact && self.betas.len() != 1 {
            return usage("exact takes a single beta".into());
        }
        if self.command.uses_ns() {
            if self.ns.is_empty() {
                return usage(format!("{:?} needs block lengths (--n)", self.command));
            }
            if self.ns.contains(&0) {
                return usage("block lengths must be positive".into());
            }
        }
        if self.command.is_stochastic() && self.seed.is_none() {
            return usage("a seed is required for stochastic commands".into());
        }
        if self.command.uses_samples() && self.samples.unwrap_or(0) < 2 {
            return usage("at least two samples are required".into());
        }
        if self.cap == 0 || self.cap > MAX_ENUMERATION_CAP {
            return usage(format!("cap must be in 1..={MAX_ENUMERATION_CAP}"));
        }
        if self.command == Command::Syncdemo {
            if self.trials == 0 {
                return usage("trials must be positive".into());
            }
            if self.rates.is_empty() || self.rates.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
                return usage("rates must lie in (0, 1]".into());
            }
            if self.ns.iter().any(|&n| n > 64) {
                return usage("syncdemo supports block lengths up to 64".into());
            }
        }
        if self.command == Command::Bruns && (self.bursts.is_empty() || self.bursts.contains(&0)) {
            return usage("burst lengths must be positive".into());
        }
        if self.threads == Some(0) {
            return usage("threads must be positive".into());
        }
        Ok(())
    }
}

//! Monte Carlo estimators for block lengths beyond exhaustive enumeration.
//!
//! Each sample draws a uniform source, a full deletion pattern and the
//! resulting side-information, then evaluates the lattice exactly on that
//! draw. Sample `i` uses its own RNG seeded from `(seed, i)`, and results
//! are reduced in index order, so estimates do not depend on the number of
//! rayon workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::deletion::{
    apply_deletion, sample_pattern, BitString, BoundaryCondition, DeletionParams,
};
use crate::error::{Error, Result};
use crate::exact::h_d1_given_d0;
use crate::lattice::{evaluate, LatticeQuery};
use crate::numeric::{h2, mix_seed, KahanSum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithError {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl EstimateWithError {
    /// Mean and standard error of `values`, reduced in slice order.
    pub fn from_samples(values: &[f64], seed: u64) -> Self {
        let samples = values.len();
        let mean = values.iter().copied().collect::<KahanSum>().value() / samples.max(1) as f64;
        let stderr = if samples > 1 {
            let ss = values
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .collect::<KahanSum>()
                .value();
            (ss / (samples - 1) as f64 / samples as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            stderr,
            samples,
            seed,
        }
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr
    }
}

/// Per-sample RNG derived from the master seed.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, index))
}

/// One simulated block: source, full pattern, side-information.
#[derive(Debug, Clone)]
pub struct Draw {
    pub x: BitString,
    pub pattern: BitString,
    pub y: BitString,
    pub boundary: BoundaryCondition,
}

pub fn draw_block(params: &DeletionParams, n: usize, rng: &mut ChaCha8Rng) -> Draw {
    let x = BitString::random(n, rng);
    let pattern = sample_pattern(params, n, rng);
    let inner = pattern.slice(1, n + 1);
    let y = apply_deletion(&x, &inner).expect("pattern slice matches source length");
    let boundary = BoundaryCondition::of_pattern(&pattern).expect("full pattern has boundaries");
    Draw {
        x,
        pattern,
        y,
        boundary,
    }
}

fn check_sizes(n: usize, samples: usize) -> Result<()> {
    if n == 0 || samples == 0 {
        return Err(Error::InvalidArgument(
            "block length and sample count must be positive".into(),
        ));
    }
    Ok(())
}

fn per_sample<F>(params: &DeletionParams, n: usize, samples: usize, seed: u64, f: F) -> Vec<f64>
where
    F: Fn(&Draw) -> f64 + Sync,
{
    (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let draw = draw_block(params, n, &mut rng);
            f(&draw)
        })
        .collect()
}

/// `E_n = H(D_1 | D_0, X^n, Y, D_{n+1})`: mean of `h₂(P(D_1 = 1 | draw))`.
pub fn estimate_en(
    params: &DeletionParams,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<EstimateWithError> {
    check_sizes(n, samples)?;
    let values = per_sample(params, n, samples, seed, |draw| {
        let q = LatticeQuery::new(&draw.x, &draw.y, draw.boundary, params);
        let post = evaluate(&q)
            .ok()
            .and_then(|r| r.d1_posterior)
            .expect("a drawn block is always consistent");
        h2(post)
    });
    Ok(EstimateWithError::from_samples(&values, seed))
}

/// `J_n = d + (1/n) H(Y | X^n, D_0, D_{n+1})` by the plug-in estimator
/// `d − (1/n) log₂ p(y | x, b)` on draws from the true law.
pub fn estimate_jn(
    params: &DeletionParams,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<EstimateWithError> {
    check_sizes(n, samples)?;
    let d = params.stationary_rate();
    let nf = n as f64;
    let values = per_sample(params, n, samples, seed, |draw| {
        let q = LatticeQuery::new(&draw.x, &draw.y, draw.boundary, params);
        let lp = crate::lattice::emission_prob(&q)
            .ok()
            .and_then(|l| l.bits())
            .expect("a drawn block is always consistent");
        d - lp / nf
    });
    Ok(EstimateWithError::from_samples(&values, seed))
}

/// Direction of the finite-block bias of an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BiasDirection {
    /// `E_n` increases to its limit, so `d + H(D_1|D_0) − E_n` overestimates.
    Upward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RminEstimate {
    pub estimate: EstimateWithError,
    pub e_n: EstimateWithError,
    pub bias: BiasDirection,
}

/// `R_min ≈ d + H(D_1 | D_0) − Ê_n`.
pub fn estimate_rmin(
    params: &DeletionParams,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<RminEstimate> {
    let e_n = estimate_en(params, n, samples, seed)?;
    let base = params.stationary_rate() + h_d1_given_d0(params);
    Ok(RminEstimate {
        estimate: EstimateWithError {
            mean: base - e_n.mean,
            ..e_n
        },
        e_n,
        bias: BiasDirection::Upward,
    })
}

/// Window geometry for deletion-pattern typicality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalityConfig {
    pub k: f64,
    /// The checked prefix is `D_0 ..= D_window`.
    pub window: usize,
    pub ones_cap: usize,
}

impl TypicalityConfig {
    /// `k = max(6, −6 / log₂(1 − α))`, `window = ⌈−k log₂ β⌉`,
    /// `ones_cap = ⌈(k/3) log₂(1/β)⌉`.
    pub fn new(params: &DeletionParams) -> Self {
        let k = 6.0f64.max(-6.0 / (1.0 - params.alpha()).log2());
        let lb = -params.beta().log2();
        let window = ((k * lb).ceil() as usize).max(1);
        let ones_cap = (((k / 3.0) * lb).ceil() as usize).max(1);
        Self {
            k,
            window,
            ones_cap,
        }
    }
}

/// At most one run of ones and at most `ones_cap` ones in `D_0 ..= D_window`.
pub fn is_typical(full_pattern: &BitString, config: &TypicalityConfig) -> Result<bool> {
    if full_pattern.len() <= config.window {
        return Err(Error::LengthMismatch {
            what: "pattern must extend past the typicality window",
            expected: config.window + 1,
            actual: full_pattern.len(),
        });
    }
    let prefix = &full_pattern.as_slice()[..=config.window];
    let ones = prefix.iter().filter(|&&b| b == 1).count();
    let runs = prefix
        .iter()
        .enumerate()
        .filter(|&(i, &b)| b == 1 && (i == 0 || prefix[i - 1] == 0))
        .count();
    Ok(runs <= 1 && ones <= config.ones_cap)
}

/// Fraction of non-typical patterns at block length `2 · window`.
pub fn typicality_violation_rate(
    params: &DeletionParams,
    samples: usize,
    seed: u64,
) -> Result<EstimateWithError> {
    check_sizes(1, samples)?;
    let config = TypicalityConfig::new(params);
    let n = 2 * config.window;
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let pattern = sample_pattern(params, n, &mut rng);
            let typical = is_typical(&pattern, &config).expect("pattern is longer than the window");
            if typical {
                0.0
            } else {
                1.0
            }
        })
        .collect();
    Ok(EstimateWithError::from_samples(&values, seed))
}

//! One function per command. Each returns a [`Table`] whose rows are in
//! ascending `n`, then ascending beta, plus a short text summary.

use burstsync::asymptotics::{
    c_value, channel_mi_expansion, component_expansions, iid_expansion, rmin_expansion, rmin_terms,
};
use burstsync::brun::{burst_delete_outcomes, first_brun_extent};
use burstsync::exact::{entropy_reports, h_d1_given_d0};
use burstsync::monte_carlo::{
    estimate_en, estimate_jn, sample_rng, typicality_violation_rate, TypicalityConfig,
};
use burstsync::numeric::mix_seed;
use burstsync::sync::error_rate;
use burstsync::{BitString, DeletionParams};
use rand::Rng;

use crate::config::{Command, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::table::{fmt_g, Table};

/// Padding after the burst when sampling sources for the extent histogram.
const BRUN_TAIL: usize = 40;
/// Extents tabulated by the `bruns` command.
const MAX_LISTED_EXTENT: usize = 6;
/// Largest extent of a generated b-run in the property check.
const MAX_GENERATED_EXTENT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub summary: String,
}

impl Report {
    pub fn csv(&self) -> Result<String> {
        self.table.to_csv()
    }
}

/// Runs the configured command, on a dedicated pool when `threads` is set.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(|| dispatch(config)),
        None => dispatch(config),
    }
}

fn dispatch(cfg: &ExperimentConfig) -> Result<Report> {
    match cfg.command {
        Command::Exact => exact(cfg),
        Command::Mc => mc(cfg),
        Command::Asym => asym(cfg),
        Command::Bruns => bruns(cfg),
        Command::Typicality => typicality(cfg),
        Command::Syncdemo => syncdemo(cfg),
        Command::Sweep => sweep(cfg),
    }
}

fn seed(cfg: &ExperimentConfig) -> u64 {
    cfg.seed
        .expect("validated: stochastic commands carry a seed")
}

fn samples(cfg: &ExperimentConfig) -> usize {
    cfg.samples
        .expect("validated: sampling commands carry a sample count")
}

fn exact(cfg: &ExperimentConfig) -> Result<Report> {
    let params = cfg.params()?[0];
    let ns = cfg.sorted_ns();
    let reports = entropy_reports(&params, &ns, cfg.cap)?;
    let mut table = Table::new(&[
        "n",
        "R_n",
        "J_n",
        "E_n",
        "H_D1_D0",
        "H_D1_D0_Dn1",
        "identity_residual",
    ]);
    let mut worst: f64 = 0.0;
    for r in &reports {
        worst = worst.max(r.identity_residual.unwrap_or(0.0));
        table.push(vec![
            r.n.to_string(),
            fmt_g(r.r_n),
            fmt_g(r.j_n),
            fmt_g(r.e_n),
            fmt_g(r.h_d1_given_d0),
            fmt_g(r.h_d1_given_d0_dn1),
            r.identity_residual.map(fmt_g).unwrap_or_default(),
        ]);
    }
    let summary = format!(
        "exact: alpha={} beta={} n={}..{}; largest identity residual {:.3e}",
        params.alpha(),
        params.beta(),
        ns[0],
        ns[ns.len() - 1],
        worst
    );
    Ok(Report { table, summary })
}

fn mc(cfg: &ExperimentConfig) -> Result<Report> {
    let (samples, seed) = (samples(cfg), seed(cfg));
    let mut table = Table::new(&[
        "n",
        "beta",
        "E_n",
        "E_n_stderr",
        "J_n",
        "J_n_stderr",
        "Rmin_hat",
        "samples",
        "seed",
    ]);
    for n in cfg.sorted_ns() {
        for params in cfg.params()? {
            let e = estimate_en(&params, n, samples, seed)?;
            let j = estimate_jn(&params, n, samples, seed)?;
            let rmin = params.stationary_rate() + h_d1_given_d0(&params) - e.mean;
            table.push(vec![
                n.to_string(),
                fmt_g(params.beta()),
                fmt_g(e.mean),
                fmt_g(e.stderr),
                fmt_g(j.mean),
                fmt_g(j.stderr),
                fmt_g(rmin),
                samples.to_string(),
                seed.to_string(),
            ]);
        }
    }
    let summary = format!(
        "mc: {} rows, {samples} samples each, seed {seed}",
        table.rows.len()
    );
    Ok(Report { table, summary })
}

fn asym(cfg: &ExperimentConfig) -> Result<Report> {
    let mut table = Table::new(&[
        "beta",
        "d",
        "rmin_expansion",
        "d_term",
        "entropy_rate_term",
        "secret_term",
        "iid_expansion_d",
        "channel_mi_expansion",
        "beta_log2_beta",
        "target_coefficient",
    ]);
    let target = rmin_terms(cfg.alpha).linear;
    for params in cfg.params()? {
        let beta = params.beta();
        let d = params.stationary_rate();
        let comps = component_expansions(&params);
        table.push(vec![
            fmt_g(beta),
            fmt_g(d),
            fmt_g(rmin_expansion(&params, None)),
            fmt_g(comps.d_term),
            fmt_g(comps.entropy_rate_term),
            fmt_g(comps.secret_term),
            fmt_g(iid_expansion(d)),
            fmt_g(channel_mi_expansion(&params)),
            fmt_g(beta * beta.log2()),
            fmt_g(target),
        ]);
    }
    let summary = format!(
        "asym: C = {:.12}, linear coefficient at alpha={} is {:.12}",
        c_value(),
        cfg.alpha,
        target
    );
    Ok(Report { table, summary })
}

/// Counts of generated b-runs on which some burst deletion disagrees with the others.
pub fn brun_violations(b: usize, trials: usize, seed: u64) -> Result<usize> {
    let mut violations = 0;
    for i in 0..trials as u64 {
        let mut rng = sample_rng(seed, i);
        let period: Vec<bool> = (0..b).map(|_| rng.gen()).collect();
        let extent = rng.gen_range(1..=MAX_GENERATED_EXTENT);
        let x = BitString::from_bools((0..b + extent - 1).map(|j| period[j % b]));
        let outcomes = burst_delete_outcomes(&x, b)?;
        if outcomes.iter().any(|y| *y != outcomes[0]) {
            violations += 1;
        }
    }
    Ok(violations)
}

/// Histogram of the first b-run extent over `samples` uniform sources.
/// Returns `(counts[l] for l in 0..=MAX_LISTED_EXTENT, uncensored samples)`.
pub fn brun_extent_counts(b: usize, samples: usize, seed: u64) -> Result<(Vec<usize>, usize)> {
    let mut counts = vec![0usize; MAX_LISTED_EXTENT + 1];
    let mut kept = 0;
    for i in 0..samples as u64 {
        let x = BitString::random(b + BRUN_TAIL, &mut sample_rng(seed, i));
        let e = first_brun_extent(&x, b)?;
        if e.censored {
            continue;
        }
        kept += 1;
        if e.extent <= MAX_LISTED_EXTENT {
            counts[e.extent] += 1;
        }
    }
    Ok((counts, kept))
}

fn bruns(cfg: &ExperimentConfig) -> Result<Report> {
    let (samples, seed) = (samples(cfg), seed(cfg));
    let mut bursts = cfg.bursts.clone();
    bursts.sort_unstable();
    bursts.dedup();
    let mut table = Table::new(&["b", "l", "count", "kept", "freq", "expected"]);
    let mut summary = String::from("bruns:");
    for &b in &bursts {
        let stream = mix_seed(seed, b as u64);
        let (counts, kept) = brun_extent_counts(b, samples, stream)?;
        let mut worst: f64 = 0.0;
        for (l, &c) in counts.iter().enumerate().skip(1) {
            let freq = c as f64 / kept.max(1) as f64;
            let expected = 0.5f64.powi(l as i32);
            worst = worst.max((freq - expected).abs());
            table.push(vec![
                b.to_string(),
                l.to_string(),
                c.to_string(),
                kept.to_string(),
                fmt_g(freq),
                fmt_g(expected),
            ]);
        }
        let trials = samples.min(10_000);
        let violations = brun_violations(b, trials, mix_seed(stream, u64::MAX))?;
        summary.push_str(&format!(
            "\n  b={b}: max |freq - 2^-l| = {worst:.4}; {violations} violations over {trials} generated b-runs"
        ));
    }
    Ok(Report { table, summary })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn typicality(cfg: &ExperimentConfig) -> Result<Report> {
    let (samples, seed) = (samples(cfg), seed(cfg));
    let mut table = Table::new(&[
        "beta",
        "k",
        "window",
        "ones_cap",
        "n",
        "violation_rate",
        "stderr",
        "samples",
    ]);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for params in cfg.params()? {
        let c = TypicalityConfig::new(&params);
        let est = typicality_violation_rate(&params, samples, seed)?;
        xs.push(params.beta());
        ys.push(est.mean);
        table.push(vec![
            fmt_g(params.beta()),
            fmt_g(c.k),
            c.window.to_string(),
            c.ones_cap.to_string(),
            (2 * c.window).to_string(),
            fmt_g(est.mean),
            fmt_g(est.stderr),
            samples.to_string(),
        ]);
    }
    let summary = if xs.len() >= 2 {
        format!(
            "typicality: log-log slope of violation rate vs beta = {:.4}",
            loglog_slope(&xs, &ys)
        )
    } else {
        "typicality: one beta, no slope".into()
    };
    Ok(Report { table, summary })
}

fn syncdemo(cfg: &ExperimentConfig) -> Result<Report> {
    let seed = seed(cfg);
    let mut rates = cfg.rates.clone();
    rates.sort_by(f64::total_cmp);
    rates.dedup();
    let mut table = Table::new(&[
        "n",
        "beta",
        "rate",
        "message_bits",
        "trials",
        "errors",
        "error_rate",
        "stddev",
        "redrawn",
    ]);
    for n in cfg.sorted_ns() {
        for params in cfg.params()? {
            for &rate in &rates {
                let r = error_rate(&params, n, rate, cfg.trials, seed)?;
                table.push(vec![
                    n.to_string(),
                    fmt_g(params.beta()),
                    fmt_g(rate),
                    r.message_bits.to_string(),
                    r.trials.to_string(),
                    r.errors.to_string(),
                    fmt_g(r.error_rate()),
                    fmt_g(r.stddev()),
                    r.redrawn.to_string(),
                ]);
            }
        }
    }
    let summary = format!(
        "syncdemo: {} rows, {} trials each",
        table.rows.len(),
        cfg.trials
    );
    Ok(Report { table, summary })
}

/// Minimum-rate estimate at one beta, with the linear-coefficient diagnostic
/// `g = (R + beta log2 beta) / beta` and its target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientRow {
    pub n: usize,
    pub beta: f64,
    pub rmin_hat: f64,
    pub stderr: f64,
    pub rmin_expansion: f64,
    pub beta_log2_beta: f64,
    pub g_hat: f64,
    pub g_stderr: f64,
    pub target: f64,
}

/// Rows in ascending beta order for a single block length.
pub fn coefficient_report(
    alpha: f64,
    betas: &[f64],
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<CoefficientRow>> {
    let target = rmin_terms(alpha).linear;
    let mut betas = betas.to_vec();
    betas.sort_by(f64::total_cmp);
    betas
        .iter()
        .map(|&beta| {
            let params = DeletionParams::new(alpha, beta)?;
            let e = estimate_en(&params, n, samples, seed)?;
            let rmin_hat = params.stationary_rate() + h_d1_given_d0(&params) - e.mean;
            let beta_log2_beta = beta * beta.log2();
            Ok(CoefficientRow {
                n,
                beta,
                rmin_hat,
                stderr: e.stderr,
                rmin_expansion: rmin_expansion(&params, None),
                beta_log2_beta,
                g_hat: (rmin_hat + beta_log2_beta) / beta,
                g_stderr: e.stderr / beta,
                target,
            })
        })
        .collect()
}

fn sweep(cfg: &ExperimentConfig) -> Result<Report> {
    let (samples, seed) = (samples(cfg), seed(cfg));
    let mut table = Table::new(&[
        "n",
        "beta",
        "Rmin_hat",
        "stderr",
        "rmin_expansion",
        "beta_log2_beta",
        "g_hat",
        "g_stderr",
        "target",
    ]);
    let mut summary = String::from("sweep:");
    for n in cfg.sorted_ns() {
        for r in coefficient_report(cfg.alpha, &cfg.betas, n, samples, seed)? {
            summary.push_str(&format!(
                "\n  n={} beta={}: g = {:.4} ± {:.4}, target {:.4}, gap {:.4}",
                r.n,
                r.beta,
                r.g_hat,
                r.g_stderr,
                r.target,
                (r.g_hat - r.target).abs()
            ));
            table.push(vec![
                r.n.to_string(),
                fmt_g(r.beta),
                fmt_g(r.rmin_hat),
                fmt_g(r.stderr),
                fmt_g(r.rmin_expansion),
                fmt_g(r.beta_log2_beta),
                fmt_g(r.g_hat),
                fmt_g(r.g_stderr),
                fmt_g(r.target),
            ]);
        }
    }
    Ok(Report { table, summary })
}

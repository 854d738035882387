//! Alignment lattice over `(position in x, deletions so far, last pattern bit)`.
//!
//! Summing Markov path weights over every deletion pattern `d^n` with
//! `y(x, d^n) = y` gives the emission probability `p(y | x, D_0, D_{n+1})`;
//! splitting the sum on `D_1` gives the posterior of the first pattern bit.
//! Constrained emissions run forward from `D_0`; [`evaluate`] runs backward
//! from `D_{n+1}` so one pass yields both the emission and the posterior.
//! Only `n - |y| + 1` deletion counts are reachable at each position, so a
//! pass costs `O(n (n - |y| + 1))`.

use crate::deletion::{BitString, BoundaryCondition, DeletionParams};
use crate::error::{Error, Result};

/// A base-2 log-probability that keeps structural impossibility distinct
/// from numerical underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogProb {
    Impossible,
    Bits(f64),
}

impl LogProb {
    pub fn is_possible(self) -> bool {
        matches!(self, LogProb::Bits(_))
    }

    pub fn bits(self) -> Option<f64> {
        match self {
            LogProb::Impossible => None,
            LogProb::Bits(b) => Some(b),
        }
    }

    /// Linear-domain probability; `0.0` when impossible.
    pub fn prob(self) -> f64 {
        match self {
            LogProb::Impossible => 0.0,
            LogProb::Bits(b) => b.exp2(),
        }
    }

    fn shift(self, by: f64) -> LogProb {
        match self {
            LogProb::Impossible => LogProb::Impossible,
            LogProb::Bits(b) => LogProb::Bits(b + by),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LatticeQuery<'a> {
    pub x: &'a BitString,
    pub y: &'a BitString,
    pub boundary: BoundaryCondition,
    pub params: &'a DeletionParams,
    /// Fixes `D_1` when present.
    pub d1_constraint: Option<u8>,
}

impl<'a> LatticeQuery<'a> {
    pub fn new(
        x: &'a BitString,
        y: &'a BitString,
        boundary: BoundaryCondition,
        params: &'a DeletionParams,
    ) -> Self {
        Self {
            x,
            y,
            boundary,
            params,
            d1_constraint: None,
        }
    }

    pub fn with_d1(mut self, bit: u8) -> Self {
        self.d1_constraint = Some(bit);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.y.len() > self.x.len() {
            return Err(Error::SideInfoTooLong {
                x_len: self.x.len(),
                y_len: self.y.len(),
            });
        }
        if let Some(c) = self.d1_constraint {
            if c > 1 {
                return Err(Error::InvalidBit(c));
            }
            if self.x.is_empty() {
                return Err(Error::InvalidArgument(
                    "D_1 constraint on an empty source".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeResult {
    /// `log₂ p(y | x, D_0, D_{n+1})`.
    pub log_emission: LogProb,
    /// `P(D_1 = 1 | x, y, D_0, D_{n+1})`, defined when the emission is possible.
    pub d1_posterior: Option<f64>,
}

/// log₂ of the summed path weight `Σ Π K(d_{i-1}, d_i)` over consistent
/// patterns, including the closing step into `D_{n+1}`, starting from `D_0`.
fn forward_joint(
    params: &DeletionParams,
    x: &[u8],
    y: &[u8],
    boundary: BoundaryCondition,
    d1: Option<u8>,
) -> LogProb {
    let n = x.len();
    let m = y.len();
    debug_assert!(m <= n);
    let k = n - m;
    let kern = params.kernel();

    let width = (k + 1) * 2;
    let mut cur = vec![0.0f64; width];
    let mut next = vec![0.0f64; width];
    cur[boundary.d0 as usize] = 1.0;
    let mut log_scale = 0.0;

    for (i, &xi) in x.iter().enumerate() {
        next.iter_mut().for_each(|v| *v = 0.0);
        for del in 0..=i.min(k) {
            let j = i - del;
            let keep_ok = j < m && y[j] == xi;
            for s in 0..2 {
                let w = cur[del * 2 + s];
                if w == 0.0 {
                    continue;
                }
                let allow = |t: u8| i != 0 || d1.is_none_or(|c| c == t);
                if keep_ok && allow(0) {
                    next[del * 2] += w * kern[s][0];
                }
                if del < k && allow(1) {
                    next[(del + 1) * 2 + 1] += w * kern[s][1];
                }
            }
        }
        let total: f64 = next.iter().sum();
        if total == 0.0 {
            return LogProb::Impossible;
        }
        let inv = total.recip();
        next.iter_mut().for_each(|v| *v *= inv);
        log_scale += total.log2();
        std::mem::swap(&mut cur, &mut next);
    }

    let b1 = boundary.d_next as usize;
    let tail = cur[k * 2] * kern[0][b1] + cur[k * 2 + 1] * kern[1][b1];
    if tail == 0.0 {
        LogProb::Impossible
    } else {
        LogProb::Bits(log_scale + tail.log2())
    }
}

/// `log₂ p(y | x, D_0, D_{n+1})`, or, with a `D_1` constraint `c`,
/// `log₂ p(y | x, D_0, D_1 = c, D_{n+1})`.
pub fn emission_prob(query: &LatticeQuery<'_>) -> Result<LogProb> {
    query.validate()?;
    let params = query.params;
    let n = query.x.len();
    let b = query.boundary;
    let joint = forward_joint(
        params,
        query.x.as_slice(),
        query.y.as_slice(),
        b,
        query.d1_constraint,
    );
    let norm = match query.d1_constraint {
        None => params.kernel_power(n + 1)[b.d0 as usize][b.d_next as usize],
        Some(c) => {
            params.transition_prob(b.d0, c) * params.kernel_power(n)[c as usize][b.d_next as usize]
        }
    };
    Ok(joint.shift(-norm.log2()))
}

/// `P(D_1 = 1 | x, y, D_0, D_{n+1})`. Any `d1_constraint` on the query is ignored.
pub fn d1_posterior(query: &LatticeQuery<'_>) -> Result<f64> {
    evaluate(query)?.d1_posterior.ok_or(Error::Inconsistent)
}

/// Backward messages from position 1 to the end, including the closing step
/// into `D_{n+1}`. Returns `(log₂ scale, message at (del=0, s=0), message at (del=1, s=1))`,
/// the two states reachable after choosing `D_1`.
fn backward_first_step(params: &DeletionParams, x: &[u8], y: &[u8], d_next: u8) -> (f64, f64, f64) {
    let n = x.len();
    let m = y.len();
    let k = n - m;
    let kern = params.kernel();
    let b1 = d_next as usize;

    let width = (k + 1) * 2;
    let mut cur = vec![0.0f64; width];
    let mut prev = vec![0.0f64; width];
    cur[k * 2] = kern[0][b1];
    cur[k * 2 + 1] = kern[1][b1];
    let mut log_scale = 0.0;

    // cur holds messages for states after consuming i + 1 symbols
    for i in (1..n).rev() {
        prev.iter_mut().for_each(|v| *v = 0.0);
        let xi = x[i];
        let lo = i.saturating_sub(m);
        for del in lo..=i.min(k) {
            let j = i - del;
            let keep = if j < m && y[j] == xi {
                cur[del * 2]
            } else {
                0.0
            };
            let drop = if del < k { cur[(del + 1) * 2 + 1] } else { 0.0 };
            for s in 0..2 {
                prev[del * 2 + s] = kern[s][0] * keep + kern[s][1] * drop;
            }
        }
        let total: f64 = prev.iter().sum();
        if total == 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let inv = total.recip();
        prev.iter_mut().for_each(|v| *v *= inv);
        log_scale += total.log2();
        std::mem::swap(&mut cur, &mut prev);
    }
    let after_keep = cur[0];
    let after_delete = if k >= 1 { cur[3] } else { 0.0 };
    (log_scale, after_keep, after_delete)
}

/// Emission and `D_1` posterior from a single backward lattice pass.
pub fn evaluate(query: &LatticeQuery<'_>) -> Result<LatticeResult> {
    let q = LatticeQuery {
        d1_constraint: None,
        ..*query
    };
    q.validate()?;
    let params = q.params;
    let n = q.x.len();
    let b = q.boundary;
    if n == 0 {
        return Ok(LatticeResult {
            log_emission: LogProb::Bits(0.0),
            d1_posterior: None,
        });
    }
    let (x, y) = (q.x.as_slice(), q.y.as_slice());
    let (log_scale, after_keep, after_delete) = backward_first_step(params, x, y, b.d_next);
    let keep_ok = !y.is_empty() && y[0] == x[0];
    let w0 = if keep_ok {
        params.transition_prob(b.d0, 0) * after_keep
    } else {
        0.0
    };
    let w1 = params.transition_prob(b.d0, 1) * after_delete;
    let total = w0 + w1;
    if total == 0.0 {
        return Ok(LatticeResult {
            log_emission: LogProb::Impossible,
            d1_posterior: None,
        });
    }
    let norm = params.kernel_power(n + 1)[b.d0 as usize][b.d_next as usize];
    Ok(LatticeResult {
        log_emission: LogProb::Bits(log_scale + total.log2() - norm.log2()),
        d1_posterior: Some(w1 / total),
    })
}

/// Number of deletion patterns `d^n` with `y(x, d^n) = y`.
pub fn consistent_pattern_count(x: &BitString, y: &BitString) -> u128 {
    let (x, y) = (x.as_slice(), y.as_slice());
    let (n, m) = (x.len(), y.len());
    if m > n {
        return 0;
    }
    // ways[j]: patterns over the processed prefix of x that emit y[..j].
    let mut ways = vec![0u128; m + 1];
    ways[0] = 1;
    for &xi in x {
        for j in (0..m).rev() {
            if y[j] == xi {
                ways[j + 1] += ways[j];
            }
        }
    }
    ways[m]
}

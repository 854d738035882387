//! Small-β expansions of the minimum rate and its three components.
//!
//! With `α` fixed,
//!
//! ```text
//! R_min = −β log₂ β + β ((1 + h₂(α))/α + log₂ e − C) + O(β^(2−ε))
//! C     = Σ_{l≥1} 2^(−l−1) · l · log₂ l
//! ```
//!
//! `C` is summed here with a certified tail: for `l ≥ 1`, `log₂ l ≤ l`, and
//! `Σ_{l≥L} 2^(−l−1) l² = 2^(−L) (L² + 2L + 3)`.

use crate::deletion::DeletionParams;
use crate::numeric::{h2, LOG2_E_BITS};

/// Partial sum of `C` together with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedSum {
    pub value: f64,
    /// Upper bound on `C − value`.
    pub tail_bound: f64,
    /// Number of summed terms `l = 1 ..= terms`.
    pub terms: usize,
}

fn c_term(l: usize) -> f64 {
    let lf = l as f64;
    (-(lf + 1.0)).exp2() * lf * lf.log2()
}

/// Closed-form majorant of `Σ_{l ≥ from} 2^(−l−1) l log₂ l`.
pub fn c_tail_bound(from: usize) -> f64 {
    let l = from as f64;
    (-l).exp2() * (l * l + 2.0 * l + 3.0)
}

/// `Σ_{l=1}^{terms} 2^(−l−1) l log₂ l`, summed smallest term first.
pub fn c_partial_sum(terms: usize) -> f64 {
    (1..=terms).rev().map(c_term).sum()
}

/// The constant `C` with certified truncation error below `tolerance`.
pub fn constant_c(tolerance: f64) -> CertifiedSum {
    assert!(tolerance > 0.0, "tolerance must be positive");
    let mut terms = 1;
    while c_tail_bound(terms + 1) >= tolerance {
        terms += 1;
    }
    CertifiedSum {
        value: c_partial_sum(terms),
        tail_bound: c_tail_bound(terms + 1),
        terms,
    }
}

/// `C` to double precision.
pub fn c_value() -> f64 {
    constant_c(1e-17).value
}

/// Coefficients of `leading · (−β log₂ β) + linear · β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerms {
    pub leading: f64,
    pub linear: f64,
}

impl ExpansionTerms {
    pub fn value_at(&self, beta: f64) -> f64 {
        -self.leading * beta * beta.log2() + self.linear * beta
    }
}

/// `(1 + h₂(α))/α + log₂ e − C`, the linear coefficient of the rate expansion.
pub fn rate_linear_coefficient(alpha: f64) -> f64 {
    (1.0 + h2(alpha)) / alpha + LOG2_E_BITS - c_value()
}

pub fn rmin_terms(alpha: f64) -> ExpansionTerms {
    ExpansionTerms {
        leading: 1.0,
        linear: rate_linear_coefficient(alpha),
    }
}

/// Two-term expansion of `R_min` at `params.beta()` or at `beta_override`.
pub fn rmin_expansion(params: &DeletionParams, beta_override: Option<f64>) -> f64 {
    let beta = beta_override.unwrap_or(params.beta());
    rmin_terms(params.alpha()).value_at(beta)
}

/// Leading-order values of deleted content, pattern entropy rate, and (negated)
/// residual pattern uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentExpansions {
    pub d_term: f64,
    pub entropy_rate_term: f64,
    pub secret_term: f64,
}

impl ComponentExpansions {
    pub fn sum(&self) -> f64 {
        self.d_term + self.entropy_rate_term + self.secret_term
    }
}

pub fn component_expansions(params: &DeletionParams) -> ComponentExpansions {
    let (alpha, beta) = (params.alpha(), params.beta());
    ComponentExpansions {
        d_term: beta / alpha,
        entropy_rate_term: -beta * beta.log2() + beta * h2(alpha) / alpha + beta * LOG2_E_BITS,
        secret_term: -c_value() * beta,
    }
}

/// Two-term expansion for an iid deletion pattern with rate `d`:
/// `−d log₂ d + d (log₂ 2e − C)`.
pub fn iid_expansion(d: f64) -> f64 {
    -d * d.log2() + d * (1.0 + LOG2_E_BITS - c_value())
}

/// `1 − rmin_expansion`: the small-β expansion of the per-symbol mutual
/// information across the bursty deletion channel with uniform input. This
/// is a lower-bound expression, not a capacity.
pub fn channel_mi_expansion(params: &DeletionParams) -> f64 {
    1.0 - rmin_expansion(params, None)
}

/// Leading behaviour `d` when α and β are both small with a fixed ratio.
pub fn case1_rate(params: &DeletionParams) -> f64 {
    params.stationary_rate()
}

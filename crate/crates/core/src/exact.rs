//! Exact block entropies by exhaustive enumeration of the source.
//!
//! For each source word `x` and starting state `D_0`, a forward pass over
//! positions keeps one accumulator per (emitted prefix of y, last pattern
//! bit). Distinct deletion patterns that emit the same prefix merge, so the
//! state space is the set of subsequences of `x` rather than all `2^n`
//! patterns. Prefixes are indexed densely by the code `(1 << len) | bits`.
//!
//! All quantities are in bits and condition on the boundary pair
//! `B = (D_0, D_{n+1})` with `D_0` stationary.

use rayon::prelude::*;

use crate::deletion::{BoundaryCondition, DeletionParams};
use crate::error::{Error, Result};
use crate::numeric::{entropy, h2, neg_plogp, KahanSum};

pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Hard ceiling on the cap: dense prefix tables have `2^(n+1)` entries.
pub const MAX_ENUMERATION_CAP: usize = 20;

/// Every conditional entropy that one enumeration pass at block length `n` yields.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEntropies {
    pub n: usize,
    /// `(1/n) H(X^n | Y, B)`.
    pub r_n: f64,
    /// `d + (1/n) H(Y | X^n, B)`.
    pub j_n: f64,
    /// `H(D_1 | X^n, Y, B)`.
    pub e_n: f64,
    /// `H(Y | X^n, B)`, not normalized.
    pub h_y_given_xb: f64,
    /// `H(Y | B)`, not normalized.
    pub h_y_given_b: f64,
    /// `E[L_y]` from the enumerated joint law.
    pub mean_side_info_len: f64,
    /// Total enumerated probability mass; 1 up to rounding.
    pub total_mass: f64,
}

#[derive(Clone)]
struct Partial {
    h_y_given_xb: KahanSum,
    e_n: KahanSum,
    h_xyb: KahanSum,
    mean_len: KahanSum,
    mass: KahanSum,
    // p(y, b) indexed [boundary index][prefix code]
    p_yb: Vec<Vec<KahanSum>>,
}

impl Partial {
    fn new(codes: usize) -> Self {
        Self {
            h_y_given_xb: KahanSum::new(),
            e_n: KahanSum::new(),
            h_xyb: KahanSum::new(),
            mean_len: KahanSum::new(),
            mass: KahanSum::new(),
            p_yb: vec![vec![KahanSum::new(); codes]; 4],
        }
    }

    fn merge(&mut self, other: &Partial) {
        self.h_y_given_xb.merge(&other.h_y_given_xb);
        self.e_n.merge(&other.e_n);
        self.h_xyb.merge(&other.h_xyb);
        self.mean_len.merge(&other.mean_len);
        self.mass.merge(&other.mass);
        for (mine, theirs) in self.p_yb.iter_mut().zip(&other.p_yb) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                a.merge(b);
            }
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "block length must be at least 1".into(),
        ));
    }
    if n > cap.min(MAX_ENUMERATION_CAP) {
        return Err(Error::CapExceeded {
            n,
            cap: cap.min(MAX_ENUMERATION_CAP),
        });
    }
    Ok(())
}

/// Scratch tables for one source word: path weights per (prefix code, last bit),
/// total and restricted to `D_1 = 1`.
struct Tables {
    all: Vec<f64>,
    d1: Vec<f64>,
    next_all: Vec<f64>,
    next_d1: Vec<f64>,
}

impl Tables {
    fn new(codes: usize) -> Self {
        Self {
            all: vec![0.0; codes * 2],
            d1: vec![0.0; codes * 2],
            next_all: vec![0.0; codes * 2],
            next_d1: vec![0.0; codes * 2],
        }
    }

    /// Runs the prefix forward pass for source `x` (n bits, MSB first) from `D_0 = d0`.
    fn forward(&mut self, kern: &[[f64; 2]; 2], x: u64, n: usize, d0: usize) {
        self.all[..4].iter_mut().for_each(|v| *v = 0.0);
        self.d1[..4].iter_mut().for_each(|v| *v = 0.0);
        // empty prefix has code 1
        self.all[2 + d0] = 1.0;
        for i in 0..n {
            let xi = ((x >> (n - 1 - i)) & 1) as usize;
            let hi = 1usize << (i + 2);
            self.next_all[..hi * 2].iter_mut().for_each(|v| *v = 0.0);
            self.next_d1[..hi * 2].iter_mut().for_each(|v| *v = 0.0);
            for code in 1..(1usize << (i + 1)) {
                for (s, row) in kern.iter().enumerate() {
                    let w = self.all[code * 2 + s];
                    if w == 0.0 {
                        continue;
                    }
                    let w1 = self.d1[code * 2 + s];
                    let kept = (code << 1) | xi;
                    let (keep, del) = (row[0], row[1]);
                    self.next_all[kept * 2] += w * keep;
                    self.next_all[code * 2 + 1] += w * del;
                    if i == 0 {
                        self.next_d1[code * 2 + 1] += w * del;
                    } else {
                        self.next_d1[kept * 2] += w1 * keep;
                        self.next_d1[code * 2 + 1] += w1 * del;
                    }
                }
            }
            std::mem::swap(&mut self.all, &mut self.next_all);
            std::mem::swap(&mut self.d1, &mut self.next_d1);
        }
    }
}

/// Computes every block entropy at length `n` in a single enumeration.
pub fn block_entropies(params: &DeletionParams, n: usize, cap: usize) -> Result<BlockEntropies> {
    check_cap(n, cap)?;
    let codes = 1usize << (n + 1);
    let kern = params.kernel();
    let pi = params.stationary();
    let pn1 = params.kernel_power(n + 1);
    let px = (-(n as f64)).exp2();
    let sources = 1u64 << n;

    let chunks = sources.min(64);
    let per_chunk = sources / chunks;
    let partials: Vec<Partial> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut part = Partial::new(codes);
            let mut tables = Tables::new(codes);
            for x in c * per_chunk..(c + 1) * per_chunk {
                for d0 in 0..2 {
                    tables.forward(&kern, x, n, d0);
                    for d_next in 0..2 {
                        let p_cond = pn1[d0][d_next];
                        let pb = pi[d0] * p_cond;
                        let bidx = d0 * 2 + d_next;
                        for code in 1..codes {
                            let a = &tables.all[code * 2..code * 2 + 2];
                            let joint = a[0] * kern[0][d_next] + a[1] * kern[1][d_next];
                            if joint == 0.0 {
                                continue;
                            }
                            let b = &tables.d1[code * 2..code * 2 + 2];
                            let joint1 = b[0] * kern[0][d_next] + b[1] * kern[1][d_next];
                            let p_y = joint / p_cond;
                            let post = (joint1 / joint).clamp(0.0, 1.0);
                            let w = pb * px;
                            let p_xyb = w * p_y;
                            let len = (usize::BITS - 1 - code.leading_zeros()) as f64;
                            part.h_y_given_xb.add(w * neg_plogp(p_y));
                            part.e_n.add(p_xyb * h2(post));
                            part.h_xyb.add(neg_plogp(p_xyb));
                            part.mean_len.add(p_xyb * len);
                            part.mass.add(p_xyb);
                            part.p_yb[bidx][code].add(p_xyb);
                        }
                    }
                }
            }
            part
        })
        .collect();

    let mut total = Partial::new(codes);
    for p in &partials {
        total.merge(p);
    }

    let h_yb = entropy(total.p_yb.iter().flatten().map(KahanSum::value));
    let h_b = entropy(
        BoundaryCondition::all()
            .iter()
            .map(|b| b.probability(params, n)),
    );
    let h_y_given_xb = total.h_y_given_xb.value();
    let nf = n as f64;
    Ok(BlockEntropies {
        n,
        r_n: (total.h_xyb.value() - h_yb) / nf,
        j_n: params.stationary_rate() + h_y_given_xb / nf,
        e_n: total.e_n.value(),
        h_y_given_xb,
        h_y_given_b: h_yb - h_b,
        mean_side_info_len: total.mean_len.value(),
        total_mass: total.mass.value(),
    })
}

pub fn exact_rn(params: &DeletionParams, n: usize) -> Result<f64> {
    Ok(block_entropies(params, n, DEFAULT_ENUMERATION_CAP)?.r_n)
}

pub fn exact_jn(params: &DeletionParams, n: usize) -> Result<f64> {
    Ok(block_entropies(params, n, DEFAULT_ENUMERATION_CAP)?.j_n)
}

pub fn exact_en(params: &DeletionParams, n: usize) -> Result<f64> {
    Ok(block_entropies(params, n, DEFAULT_ENUMERATION_CAP)?.e_n)
}

/// Entropy rate of the deletion chain, `d h₂(α) + (1 − d) h₂(β)`.
pub fn h_d1_given_d0(params: &DeletionParams) -> f64 {
    let d = params.stationary_rate();
    d * h2(params.alpha()) + (1.0 - d) * h2(params.beta())
}

/// `H(D_1 | D_0, D_{n+1})` from the three-variable law built on kernel powers.
pub fn h_d1_given_d0_dn1(params: &DeletionParams, n: usize) -> f64 {
    let pi = params.stationary();
    let k = params.kernel();
    let kn = params.kernel_power(n);
    let mut triple = [0.0f64; 8];
    let mut pair = [0.0f64; 4];
    for d0 in 0..2 {
        for d1 in 0..2 {
            for dn in 0..2 {
                let p = pi[d0] * k[d0][d1] * kn[d1][dn];
                triple[d0 * 4 + d1 * 2 + dn] = p;
                pair[d0 * 2 + dn] += p;
            }
        }
    }
    entropy(triple) - entropy(pair)
}

/// Exact `E[L_y] = n (1 − d)`.
pub fn expected_side_info_length(params: &DeletionParams, n: usize) -> f64 {
    n as f64 * (1.0 - params.stationary_rate())
}

/// `|[H(D_1|D_0,D_{n+1}) − E_n] − [n J_n − (n−1) J_{n−1} − d]|`.
pub fn identity_residual_from(
    params: &DeletionParams,
    prev: &BlockEntropies,
    cur: &BlockEntropies,
) -> f64 {
    debug_assert_eq!(prev.n + 1, cur.n);
    let n = cur.n as f64;
    let lhs = h_d1_given_d0_dn1(params, cur.n) - cur.e_n;
    let rhs = n * (cur.j_n - prev.j_n) + prev.j_n - params.stationary_rate();
    (lhs - rhs).abs()
}

pub fn identity_residual(params: &DeletionParams, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "the block-length identity needs n >= 2".into(),
        ));
    }
    let prev = block_entropies(params, n - 1, DEFAULT_ENUMERATION_CAP)?;
    let cur = block_entropies(params, n, DEFAULT_ENUMERATION_CAP)?;
    Ok(identity_residual_from(params, &prev, &cur))
}

/// `min` over `1 ≤ m < n ≤ n_max` of `n R_n − m R_m − (n−m) R_{n−m}`.
/// Non-negative (up to rounding) when `{n R_n}` is superadditive.
pub fn superadditivity_check(params: &DeletionParams, n_max: usize) -> Result<f64> {
    superadditivity_check_with_cap(params, n_max, DEFAULT_ENUMERATION_CAP)
}

pub fn superadditivity_check_with_cap(
    params: &DeletionParams,
    n_max: usize,
    cap: usize,
) -> Result<f64> {
    check_cap(n_max, cap)?;
    let scaled: Vec<f64> = (1..=n_max)
        .map(|n| block_entropies(params, n, cap).map(|b| n as f64 * b.r_n))
        .collect::<Result<_>>()?;
    Ok(superadditivity_gap(&scaled))
}

/// Worst superadditivity gap of `scaled[i] = (i+1) R_{i+1}`.
pub fn superadditivity_gap(scaled: &[f64]) -> f64 {
    let mut worst = f64::INFINITY;
    for n in 2..=scaled.len() {
        for m in 1..n {
            let gap = scaled[n - 1] - scaled[m - 1] - scaled[n - m - 1];
            worst = worst.min(gap);
        }
    }
    worst
}

/// One row of the exact-entropy table.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub n: usize,
    pub params: DeletionParams,
    pub r_n: f64,
    pub j_n: f64,
    pub e_n: f64,
    pub h_d1_given_d0: f64,
    pub h_d1_given_d0_dn1: f64,
    /// Residual of the block-length identity; `None` at `n = 1`.
    pub identity_residual: Option<f64>,
}

/// Reports for each requested `n`, sharing enumerations between neighbours.
pub fn entropy_reports(
    params: &DeletionParams,
    ns: &[usize],
    cap: usize,
) -> Result<Vec<EntropyReport>> {
    for &n in ns {
        check_cap(n, cap)?;
    }
    let mut cache: std::collections::BTreeMap<usize, BlockEntropies> = Default::default();
    let mut get = |n: usize| -> Result<BlockEntropies> {
        if let Some(b) = cache.get(&n) {
            return Ok(b.clone());
        }
        let b = block_entropies(params, n, cap)?;
        cache.insert(n, b.clone());
        Ok(b)
    };
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let cur = get(n)?;
        let identity_residual = if n >= 2 {
            let prev = get(n - 1)?;
            Some(identity_residual_from(params, &prev, &cur))
        } else {
            None
        };
        out.push(EntropyReport {
            n,
            params: *params,
            r_n: cur.r_n,
            j_n: cur.j_n,
            e_n: cur.e_n,
            h_d1_given_d0: h_d1_given_d0(params),
            h_d1_given_d0_dn1: h_d1_given_d0_dn1(params, n),
            identity_residual,
        });
    }
    Ok(out)
}

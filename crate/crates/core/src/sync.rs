//! Toy random-binning synchronizer.
//!
//! The encoder sends a universal hash of the source block. The decoder
//! enumerates every length-`n` supersequence of its side-information, keeps
//! those in the announced bin and returns the one with the largest
//! posterior `p(y | x', D_0, D_{n+1})` (the source prior is uniform).
//! Supersequence enumeration is exponential in the number of deletions, so
//! decoding refuses inputs with more than a fixed number of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::deletion::{BitString, BoundaryCondition, DeletionParams};
use crate::error::{Error, Result};
use crate::lattice::{emission_prob, LatticeQuery, LogProb};
use crate::monte_carlo::{draw_block, sample_rng};

pub const DEFAULT_DELETION_CAP: usize = 6;

/// Two scores closer than this (in bits) are treated as tied.
pub const SCORE_TIE_BITS: f64 = 1e-9;

const MAX_REDRAWS: usize = 100_000;

/// Affine map `x ↦ A x ⊕ c` over GF(2) with `A` of full row rank.
///
/// For distinct inputs the collision probability over the random choice of
/// `A` is `(2^(n−m) − 1)/(2^n − 1) ≤ 2^(−m)`; with `m = n` the map is a bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearHash {
    rows: Vec<u64>,
    offset: u64,
}

impl LinearHash {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        assert!(m <= n && n <= 64);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::with_capacity(m);
        // reduced basis keyed by leading bit
        let mut basis: Vec<u64> = Vec::with_capacity(m);
        while rows.len() < m {
            let row = rng.gen::<u64>() & mask;
            let mut r = row;
            for &v in &basis {
                r = r.min(r ^ v);
            }
            if r != 0 {
                basis.push(r);
                basis.sort_unstable_by(|a, b| b.cmp(a));
                rows.push(row);
            }
        }
        let offset = if m == 0 {
            0
        } else {
            rng.gen::<u64>() >> (64 - m)
        };
        Self { rows, offset }
    }

    pub fn output_bits(&self) -> usize {
        self.rows.len()
    }

    pub fn hash_word(&self, x: u64) -> u64 {
        self.rows.iter().fold(0u64, |acc, &row| {
            (acc << 1) | ((row & x).count_ones() & 1) as u64
        }) ^ self.offset
    }
}

/// A random-binning code at block length `n` and rate `rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinCode {
    pub n: usize,
    pub rate: f64,
    pub message_bits: usize,
    pub hash_seed: u64,
    hash: LinearHash,
}

impl BinCode {
    pub fn new(n: usize, rate: f64, hash_seed: u64) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidArgument(format!(
                "block length {n} outside 1..=64"
            )));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "rate {rate} outside (0, 1]"
            )));
        }
        // n·rate is often an integer in exact arithmetic but not in binary floating point
        let message_bits = ((n as f64 * rate - 1e-9).ceil() as usize).clamp(1, n);
        Ok(Self {
            n,
            rate,
            message_bits,
            hash_seed,
            hash: LinearHash::new(n, message_bits, hash_seed),
        })
    }

    fn bin_of_word(&self, x: u64) -> u64 {
        self.hash.hash_word(x)
    }
}

pub fn encode(x: &BitString, code: &BinCode) -> Result<BitString> {
    if x.len() != code.n {
        return Err(Error::LengthMismatch {
            what: "source length must equal the code block length",
            expected: code.n,
            actual: x.len(),
        });
    }
    Ok(BitString::from_word(
        code.bin_of_word(x.to_word()),
        code.message_bits,
    ))
}

/// Every distinct length-`n` string containing `y` as a subsequence, each
/// generated once through its leftmost embedding of `y`.
pub fn supersequences(y: &BitString, n: usize) -> Vec<BitString> {
    fn walk(y: &[u8], j: usize, n: usize, prefix: &mut Vec<u8>, out: &mut Vec<BitString>) {
        let remaining = n - prefix.len();
        let need = y.len() - j;
        if remaining == 0 {
            if need == 0 {
                out.push(BitString::from_bits(prefix).expect("bits are 0/1"));
            }
            return;
        }
        if need > remaining {
            return;
        }
        if j < y.len() {
            prefix.push(y[j]);
            walk(y, j + 1, n, prefix, out);
            prefix.pop();
            if remaining > need {
                prefix.push(y[j] ^ 1);
                walk(y, j, n, prefix, out);
                prefix.pop();
            }
        } else {
            for b in 0..2 {
                prefix.push(b);
                walk(y, j, n, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if y.len() <= n {
        walk(y.as_slice(), 0, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Whether `candidate` (score `a`) should replace `best` (score `b`):
/// higher score wins, near-ties go to the lexicographically smaller string.
pub fn prefer(a: f64, candidate: &BitString, b: f64, best: &BitString) -> bool {
    if a > b + SCORE_TIE_BITS {
        true
    } else if a >= b - SCORE_TIE_BITS {
        candidate < best
    } else {
        false
    }
}

pub fn decode(
    message: &BitString,
    y: &BitString,
    code: &BinCode,
    params: &DeletionParams,
    boundary: BoundaryCondition,
) -> Result<Option<BitString>> {
    decode_with_cap(message, y, code, params, boundary, DEFAULT_DELETION_CAP)
}

/// Maximum-posterior source in the announced bin, or `None` if the bin holds
/// no supersequence of `y`.
pub fn decode_with_cap(
    message: &BitString,
    y: &BitString,
    code: &BinCode,
    params: &DeletionParams,
    boundary: BoundaryCondition,
    cap: usize,
) -> Result<Option<BitString>> {
    if message.len() != code.message_bits {
        return Err(Error::LengthMismatch {
            what: "message length must equal the code's message bits",
            expected: code.message_bits,
            actual: message.len(),
        });
    }
    if y.len() > code.n {
        return Err(Error::SideInfoTooLong {
            x_len: code.n,
            y_len: y.len(),
        });
    }
    let deletions = code.n - y.len();
    if deletions > cap {
        return Err(Error::DeletionCapExceeded { deletions, cap });
    }
    let bin = message.to_word();
    let mut best: Option<(f64, BitString)> = None;
    for cand in supersequences(y, code.n) {
        if code.bin_of_word(cand.to_word()) != bin {
            continue;
        }
        let q = LatticeQuery::new(&cand, y, boundary, params);
        let LogProb::Bits(score) = emission_prob(&q)? else {
            continue;
        };
        let replace = match &best {
            None => true,
            Some((b, x)) => prefer(score, &cand, *b, x),
        };
        if replace {
            best = Some((score, cand));
        }
    }
    Ok(best.map(|(_, x)| x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRateReport {
    pub n: usize,
    pub rate: f64,
    pub message_bits: usize,
    pub trials: usize,
    pub errors: usize,
    /// Draws discarded because they exceeded the deletion cap.
    pub redrawn: usize,
}

impl ErrorRateReport {
    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }

    /// Binomial standard deviation of the error-rate estimate.
    pub fn stddev(&self) -> f64 {
        let p = self.error_rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

pub fn error_rate(
    params: &DeletionParams,
    n: usize,
    rate: f64,
    trials: usize,
    seed: u64,
) -> Result<ErrorRateReport> {
    error_rate_with_cap(params, n, rate, trials, seed, DEFAULT_DELETION_CAP)
}

/// Empirical block error probability. Each trial draws a fresh hash and a
/// block whose deletion count fits under `cap`; decode failures count as errors.
pub fn error_rate_with_cap(
    params: &DeletionParams,
    n: usize,
    rate: f64,
    trials: usize,
    seed: u64,
    cap: usize,
) -> Result<ErrorRateReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "trial count must be positive".into(),
        ));
    }
    let message_bits = BinCode::new(n, rate, 0)?.message_bits;
    let outcomes: Vec<(bool, usize)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| -> Result<(bool, usize)> {
            let mut rng = sample_rng(seed, i);
            let code = BinCode::new(n, rate, rng.gen())?;
            let mut redrawn = 0;
            let draw = loop {
                let draw = draw_block(params, n, &mut rng);
                if n - draw.y.len() <= cap {
                    break draw;
                }
                redrawn += 1;
                if redrawn > MAX_REDRAWS {
                    return Err(Error::InvalidArgument(format!(
                        "no block with at most {cap} deletions after {MAX_REDRAWS} draws"
                    )));
                }
            };
            let message = encode(&draw.x, &code)?;
            let decoded = decode_with_cap(&message, &draw.y, &code, params, draw.boundary, cap)?;
            Ok((decoded.as_ref() != Some(&draw.x), redrawn))
        })
        .collect::<Result<_>>()?;
    Ok(ErrorRateReport {
        n,
        rate,
        message_bits,
        trials,
        errors: outcomes.iter().filter(|o| o.0).count(),
        redrawn: outcomes.iter().map(|o| o.1).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn message_length_is_ceiling() {
        assert_eq!(BinCode::new(10, 0.7, 0).unwrap().message_bits, 7);
        assert_eq!(BinCode::new(10, 0.71, 0).unwrap().message_bits, 8);
        assert_eq!(BinCode::new(16, 1.0, 0).unwrap().message_bits, 16);
        assert_eq!(BinCode::new(16, 0.01, 0).unwrap().message_bits, 1);
        assert!(BinCode::new(16, 0.0, 0).is_err());
        assert!(BinCode::new(16, 1.5, 0).is_err());
        assert!(BinCode::new(65, 0.5, 0).is_err());
    }

    #[test]
    fn full_rate_hash_is_bijective() {
        let h = LinearHash::new(10, 10, 42);
        let mut seen = vec![false; 1024];
        for x in 0..1024u64 {
            let v = h.hash_word(x) as usize;
            assert!(!seen[v]);
            seen[v] = true;
        }
    }

    #[test]
    fn encode_is_deterministic() {
        let code = BinCode::new(12, 0.5, 7).unwrap();
        let x = bs("011010011101");
        assert_eq!(encode(&x, &code).unwrap(), encode(&x, &code).unwrap());
        assert_eq!(encode(&x, &code).unwrap().len(), 6);
        assert!(encode(&bs("0110"), &code).is_err());
    }

    #[test]
    fn supersequences_of_short_string() {
        let mut got: Vec<String> = supersequences(&bs("001"), 4)
            .iter()
            .map(|s| s.to_string())
            .collect();
        got.sort();
        assert_eq!(got, ["0001", "0010", "0011", "0101", "1001"]);
    }

    #[test]
    fn no_deletions_full_rate_recovers_source() {
        let params = DeletionParams::new(0.5, 0.05).unwrap();
        let x = bs("1100101001110001");
        let code = BinCode::new(16, 1.0, 3).unwrap();
        let msg = encode(&x, &code).unwrap();
        let out = decode(
            &msg,
            &x,
            &code,
            &params,
            BoundaryCondition::new(0, 0).unwrap(),
        )
        .unwrap();
        assert_eq!(out, Some(x));
    }

    #[test]
    fn deletion_cap_is_enforced() {
        let params = DeletionParams::new(0.5, 0.05).unwrap();
        let code = BinCode::new(10, 0.5, 3).unwrap();
        let msg = BitString::zeros(5);
        let err = decode(
            &msg,
            &bs("01"),
            &code,
            &params,
            BoundaryCondition::new(0, 0).unwrap(),
        );
        assert!(matches!(
            err,
            Err(Error::DeletionCapExceeded {
                deletions: 8,
                cap: 6
            })
        ));
    }

    #[test]
    fn tie_break_prefers_lexicographically_smaller() {
        let (a, b) = (bs("0011"), bs("0101"));
        assert!(prefer(-3.0, &a, -3.0 + 1e-12, &b));
        assert!(!prefer(-3.0, &b, -3.0, &a));
        assert!(prefer(-2.0, &b, -3.0, &a));
    }
}

//! The bursty deletion process.
//!
//! Deletion patterns are a two-state stationary Markov chain `D_0, D_1, ...`
//! where `D_i = 1` removes source bit `X_i`. From the keep state a burst
//! starts with probability `beta`; from the delete state the burst ends with
//! probability `alpha`. The stationary delete probability is
//! `d = beta / (alpha + beta)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Parameters `(alpha, beta)` of the deletion chain, both in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeletionParams {
    alpha: f64,
    beta: f64,
}

impl DeletionParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let open = |v: f64| v > 0.0 && v < 1.0;
        if !open(alpha) || !open(beta) {
            return Err(Error::InvalidParams { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// Burst exit probability `P(D_i = 0 | D_{i-1} = 1)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Burst start probability `P(D_i = 1 | D_{i-1} = 0)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.alpha, beta)
    }

    /// Stationary fraction of deleted positions.
    pub fn stationary_rate(&self) -> f64 {
        self.beta / (self.alpha + self.beta)
    }

    /// Stationary law `(P(D=0), P(D=1))`.
    pub fn stationary(&self) -> [f64; 2] {
        let d = self.stationary_rate();
        [1.0 - d, d]
    }

    pub fn transition_prob(&self, from: u8, to: u8) -> f64 {
        self.kernel()[(from & 1) as usize][(to & 1) as usize]
    }

    /// One-step kernel, indexed `[from][to]`.
    pub fn kernel(&self) -> [[f64; 2]; 2] {
        [[1.0 - self.beta, self.beta], [self.alpha, 1.0 - self.alpha]]
    }

    /// `steps`-step kernel via the spectral form `Π + λ^k (I − Π)` with
    /// `λ = 1 − α − β`.
    pub fn kernel_power(&self, steps: usize) -> [[f64; 2]; 2] {
        let [p0, p1] = self.stationary();
        let lambda = 1.0 - self.alpha - self.beta;
        let lk = powi_usize(lambda, steps);
        [[p0 + lk * p1, p1 - lk * p1], [p0 - lk * p0, p1 + lk * p0]]
    }
}

fn powi_usize(base: f64, exp: usize) -> f64 {
    match i32::try_from(exp) {
        Ok(e) => base.powi(e),
        Err(_) => base.powf(exp as f64),
    }
}

/// Free-function form of [`DeletionParams::stationary_rate`].
pub fn stationary_rate(params: &DeletionParams) -> f64 {
    params.stationary_rate()
}

/// Free-function form of [`DeletionParams::transition_prob`].
pub fn transition_prob(params: &DeletionParams, from: u8, to: u8) -> f64 {
    params.transition_prob(from, to)
}

/// A finite binary string. Each element is `0` or `1`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit(b));
        }
        Ok(Self {
            bits: bits.to_vec(),
        })
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self {
            bits: bits.into_iter().map(u8::from).collect(),
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    /// The `len` low bits of `word`, most significant first.
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= 64);
        Self {
            bits: (0..len)
                .map(|i| ((word >> (len - 1 - i)) & 1) as u8)
                .collect(),
        }
    }

    /// Packs into a word with the first bit most significant. Panics above 64 bits.
    pub fn to_word(&self) -> u64 {
        assert!(self.bits.len() <= 64, "bit string too long to pack");
        self.bits.iter().fold(0u64, |w, &b| (w << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.bits.get(i).copied()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }

    pub fn push(&mut self, bit: u8) {
        self.bits.push(bit & 1);
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|&b| b ^ 1).collect(),
        }
    }

    /// Sub-string `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self {
            bits: self.bits[start..end].to_vec(),
        }
    }

    /// Whether `self` occurs in `other` as a (not necessarily contiguous) subsequence.
    pub fn is_subsequence_of(&self, other: &BitString) -> bool {
        let mut it = other.bits.iter();
        self.bits.iter().all(|b| it.any(|c| c == b))
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self {
            bits: (0..len).map(|_| rng.gen::<bool>() as u8).collect(),
        }
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')' | '_'))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::ParseBits(s.to_string())),
            })
            .collect::<Result<Vec<u8>>>()
            .map(|bits| Self { bits })
    }
}

/// The boundary pair `(D_0, D_{n+1})` every entropy quantity conditions on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryCondition {
    pub d0: u8,
    pub d_next: u8,
}

impl BoundaryCondition {
    pub fn new(d0: u8, d_next: u8) -> Result<Self> {
        for b in [d0, d_next] {
            if b > 1 {
                return Err(Error::InvalidBit(b));
            }
        }
        Ok(Self { d0, d_next })
    }

    pub fn all() -> [BoundaryCondition; 4] {
        [
            Self { d0: 0, d_next: 0 },
            Self { d0: 0, d_next: 1 },
            Self { d0: 1, d_next: 0 },
            Self { d0: 1, d_next: 1 },
        ]
    }

    /// Boundary bits of a full pattern `D_0 .. D_{n+1}`.
    pub fn of_pattern(full_pattern: &BitString) -> Result<Self> {
        let len = full_pattern.len();
        if len < 2 {
            return Err(Error::LengthMismatch {
                what: "full pattern must contain both boundary bits",
                expected: 2,
                actual: len,
            });
        }
        Self::new(full_pattern.as_slice()[0], full_pattern.as_slice()[len - 1])
    }

    /// `P(D_0 = d0, D_{n+1} = d_next)` for block length `n`.
    pub fn probability(&self, params: &DeletionParams, n: usize) -> f64 {
        params.stationary()[self.d0 as usize]
            * params.kernel_power(n + 1)[self.d0 as usize][self.d_next as usize]
    }
}

/// Draws `(D_0, ..., D_{n+1})` from the stationary chain.
pub fn sample_pattern<R: Rng + ?Sized>(
    params: &DeletionParams,
    n: usize,
    rng: &mut R,
) -> BitString {
    let kernel = params.kernel();
    let mut bits = Vec::with_capacity(n + 2);
    let mut state = u8::from(rng.gen::<f64>() < params.stationary_rate());
    bits.push(state);
    for _ in 0..=n {
        state = u8::from(rng.gen::<f64>() < kernel[state as usize][1]);
        bits.push(state);
    }
    BitString { bits }
}

/// Keeps the bits of `x` whose pattern bit is 0. `pattern` is `D_1 .. D_n`.
pub fn apply_deletion(x: &BitString, pattern: &BitString) -> Result<BitString> {
    if x.len() != pattern.len() {
        return Err(Error::LengthMismatch {
            what: "deletion pattern must match source length",
            expected: x.len(),
            actual: pattern.len(),
        });
    }
    Ok(BitString {
        bits: x
            .iter()
            .zip(pattern.iter())
            .filter(|&(_, d)| d == 0)
            .map(|(b, _)| b)
            .collect(),
    })
}

/// log₂ probability of a full pattern under the stationary-start chain.
/// The empty pattern has probability 1.
pub fn pattern_log_prob(params: &DeletionParams, full_pattern: &BitString) -> f64 {
    let bits = full_pattern.as_slice();
    let Some(&first) = bits.first() else {
        return 0.0;
    };
    let kernel = params.kernel();
    let mut lp = params.stationary()[first as usize].log2();
    for w in bits.windows(2) {
        lp += kernel[w[0] as usize][w[1] as usize].log2();
    }
    lp
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(a: f64, b: f64) -> DeletionParams {
        DeletionParams::new(a, b).unwrap()
    }

    #[test]
    fn rejects_degenerate_params() {
        for (a, b) in [
            (0.0, 0.5),
            (1.0, 0.5),
            (0.5, 0.0),
            (0.5, 1.0),
            (f64::NAN, 0.5),
        ] {
            assert!(DeletionParams::new(a, b).is_err(), "({a}, {b})");
        }
    }

    #[test]
    fn stationary_rate_values() {
        assert_eq!(p(0.5, 0.5).stationary_rate(), 0.5);
        assert!((p(0.5, 0.05).stationary_rate() - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn stationary_is_fixed_point() {
        let params = p(0.3, 0.1);
        let pi = params.stationary();
        let k = params.kernel();
        for to in 0..2 {
            let next = pi[0] * k[0][to] + pi[1] * k[1][to];
            assert!((next - pi[to]).abs() < 1e-15);
        }
    }

    #[test]
    fn transition_entries() {
        let params = p(0.3, 0.1);
        assert_eq!(params.transition_prob(1, 0), 0.3);
        assert_eq!(params.transition_prob(0, 1), 0.1);
        for from in 0..2 {
            let s = params.transition_prob(from, 0) + params.transition_prob(from, 1);
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn kernel_power_matches_repeated_multiplication() {
        let params = p(0.3, 0.1);
        let k = params.kernel();
        let mut m = [[1.0, 0.0], [0.0, 1.0]];
        for steps in 0..40 {
            let closed = params.kernel_power(steps);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((closed[i][j] - m[i][j]).abs() < 1e-13, "steps={steps}");
                }
            }
            let mut next = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    next[i][j] = m[i][0] * k[0][j] + m[i][1] * k[1][j];
                }
            }
            m = next;
        }
    }

    #[test]
    fn mixing_distance_decreases() {
        let params = p(0.3, 0.1);
        let pi = params.stationary();
        let mut last = f64::INFINITY;
        for steps in 1..30 {
            let pk = params.kernel_power(steps);
            let tv = (0..2)
                .map(|from| 0.5 * ((pk[from][0] - pi[0]).abs() + (pk[from][1] - pi[1]).abs()))
                .fold(0.0, f64::max);
            assert!(tv <= last);
            last = tv;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn worked_deletion_example() {
        let x: BitString = "0101101010".parse().unwrap();
        let d: BitString = "0110001110".parse().unwrap();
        assert_eq!(apply_deletion(&x, &d).unwrap().to_string(), "01100");
    }

    #[test]
    fn deletion_extremes_and_mismatch() {
        let x: BitString = "1101".parse().unwrap();
        assert_eq!(apply_deletion(&x, &BitString::zeros(4)).unwrap(), x);
        let all: BitString = "1111".parse().unwrap();
        assert!(apply_deletion(&x, &all).unwrap().is_empty());
        assert!(matches!(
            apply_deletion(&x, &BitString::zeros(3)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn pattern_log_prob_values() {
        let fair = p(0.5, 0.5);
        let pat: BitString = "0110100".parse().unwrap();
        assert!((pattern_log_prob(&fair, &pat) + 7.0).abs() < 1e-12);

        let params = p(0.3, 0.1);
        let lp = pattern_log_prob(&params, &"00".parse().unwrap());
        assert!((lp - (0.75f64 * 0.9).log2()).abs() < 1e-15);
    }

    #[test]
    fn pattern_probabilities_normalize() {
        let params = p(0.3, 0.1);
        for m in 1..=12usize {
            let total: f64 = (0..1u64 << m)
                .map(|w| pattern_log_prob(&params, &BitString::from_word(w, m)).exp2())
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn sampling_is_deterministic_and_stationary() {
        let params = p(0.5, 0.05);
        let a = sample_pattern(&params, 50, &mut ChaCha8Rng::seed_from_u64(3));
        let b = sample_pattern(&params, 50, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        assert_eq!(a.len(), 52);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = 100_000;
        let mut ones = [0usize; 4];
        for _ in 0..samples {
            let pat = sample_pattern(&params, 2, &mut rng);
            for (i, b) in pat.iter().enumerate() {
                ones[i] += b as usize;
            }
        }
        for c in ones {
            let freq = c as f64 / samples as f64;
            assert!(
                (freq - params.stationary_rate()).abs() < 0.005,
                "freq={freq}"
            );
        }
    }

    #[test]
    fn fair_chain_marginals() {
        let params = p(0.5, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples = 100_000;
        let ones: usize = (0..samples)
            .map(|_| sample_pattern(&params, 1, &mut rng).get(1).unwrap() as usize)
            .sum();
        assert!((ones as f64 / samples as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn bitstring_parse_and_word_roundtrip() {
        let s: BitString = "(0, 1, 1, 0)".parse().unwrap();
        assert_eq!(s.as_slice(), &[0, 1, 1, 0]);
        assert_eq!(BitString::from_word(s.to_word(), 4), s);
        assert!("012".parse::<BitString>().is_err());
        assert!(BitString::from_bits(&[0, 2]).is_err());
        assert!("".parse::<BitString>().unwrap().is_empty());
    }

    #[test]
    fn subsequence_test() {
        let x: BitString = "0001".parse().unwrap();
        assert!("001".parse::<BitString>().unwrap().is_subsequence_of(&x));
        assert!(!"11".parse::<BitString>().unwrap().is_subsequence_of(&x));
        assert!(BitString::new().is_subsequence_of(&x));
    }

    #[test]
    fn boundary_probabilities_sum_to_one() {
        let params = p(0.3, 0.1);
        for n in [1, 5, 20] {
            let s: f64 = BoundaryCondition::all()
                .iter()
                .map(|b| b.probability(&params, n))
                .sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }
}

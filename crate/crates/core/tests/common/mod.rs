//! Brute-force oracles: enumerate every deletion pattern explicitly.
//! Nothing here goes through the lattice or the prefix-table enumeration.
#![allow(dead_code)]

use std::collections::HashMap;

use burstsync::{BitString, BoundaryCondition, DeletionParams};

pub fn bits(word: u64, len: usize) -> Vec<u8> {
    (0..len)
        .map(|i| ((word >> (len - 1 - i)) & 1) as u8)
        .collect()
}

/// Markov path probability of `full`, stationary start, computed directly.
pub fn path_prob(params: &DeletionParams, full: &[u8]) -> f64 {
    let (a, b) = (params.alpha(), params.beta());
    let d = b / (a + b);
    let mut p = if full[0] == 1 { d } else { 1.0 - d };
    for w in full.windows(2) {
        p *= match (w[0], w[1]) {
            (0, 0) => 1.0 - b,
            (0, 1) => b,
            (1, 0) => a,
            _ => 1.0 - a,
        };
    }
    p
}

pub fn delete(x: &[u8], d: &[u8]) -> Vec<u8> {
    x.iter()
        .zip(d)
        .filter(|(_, &di)| di == 0)
        .map(|(&xi, _)| xi)
        .collect()
}

/// `(p(y, D_1=0 | x, b), p(y, D_1=1 | x, b))` by summing over all `2^n` inner patterns.
pub fn brute_emission_split(
    params: &DeletionParams,
    x: &[u8],
    y: &[u8],
    b: BoundaryCondition,
) -> [f64; 2] {
    let n = x.len();
    let mut split = [0.0; 2];
    let mut p_b = 0.0;
    for w in 0..1u64 << n {
        let inner = bits(w, n);
        let mut full = vec![b.d0];
        full.extend_from_slice(&inner);
        full.push(b.d_next);
        let p = path_prob(params, &full);
        p_b += p;
        if delete(x, &inner) == y {
            split[inner[0] as usize] += p;
        }
    }
    [split[0] / p_b, split[1] / p_b]
}

pub fn brute_emission(params: &DeletionParams, x: &[u8], y: &[u8], b: BoundaryCondition) -> f64 {
    let s = brute_emission_split(params, x, y, b);
    s[0] + s[1]
}

fn h(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

fn h2(p: f64) -> f64 {
    h(p) + h(1.0 - p)
}

/// Block entropies from a full joint table over `(x, D_0..D_{n+1})`.
pub struct BruteBlock {
    pub r_n: f64,
    pub j_n: f64,
    pub e_n: f64,
    pub mean_len: f64,
}

pub fn brute_block(params: &DeletionParams, n: usize) -> BruteBlock {
    // (x, y, d0, dn1) -> [mass with D1=0, mass with D1=1]
    let mut xyb: HashMap<(u64, Vec<u8>, u8, u8), [f64; 2]> = HashMap::new();
    let mut yb: HashMap<(Vec<u8>, u8, u8), f64> = HashMap::new();
    let mut xb: HashMap<(u64, u8, u8), f64> = HashMap::new();
    let mut mean_len = 0.0;
    let px = 0.5f64.powi(n as i32);
    for xw in 0..1u64 << n {
        let x = bits(xw, n);
        for pw in 0..1u64 << (n + 2) {
            let full = bits(pw, n + 2);
            let p = px * path_prob(params, &full);
            let y = delete(&x, &full[1..=n]);
            let (d0, dn1) = (full[0], full[n + 1]);
            mean_len += p * y.len() as f64;
            *yb.entry((y.clone(), d0, dn1)).or_default() += p;
            *xb.entry((xw, d0, dn1)).or_default() += p;
            xyb.entry((xw, y, d0, dn1)).or_default()[full[1] as usize] += p;
        }
    }
    let h_xyb: f64 = xyb.values().map(|v| h(v[0] + v[1])).sum();
    let h_yb: f64 = yb.values().map(|&v| h(v)).sum();
    let h_xb: f64 = xb.values().map(|&v| h(v)).sum();
    let e_n: f64 = xyb
        .values()
        .map(|v| {
            let t = v[0] + v[1];
            t * h2(v[1] / t)
        })
        .sum();
    let d = params.stationary_rate();
    let nf = n as f64;
    BruteBlock {
        r_n: (h_xyb - h_yb) / nf,
        j_n: d + (h_xyb - h_xb) / nf,
        e_n,
        mean_len,
    }
}

pub fn to_bitstring(v: &[u8]) -> BitString {
    BitString::from_bits(v).unwrap()
}

//! Periodic runs ("b-runs") and single-burst deletion outcomes.
//!
//! A string of length `b + l - 1` is a b-run of extent `l` when it is
//! periodic with period `b`. Deleting any of the `l` bursts of `b`
//! consecutive symbols inside it leaves the same string, which is why a
//! decoder cannot tell those `l` patterns apart.

use crate::deletion::{apply_deletion, BitString};
use crate::error::{Error, Result};

/// A burst of `b` deletions starting at 1-based `position`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BurstSpec {
    pub b: usize,
    pub position: usize,
}

impl BurstSpec {
    pub fn new(b: usize, position: usize) -> Result<Self> {
        if b == 0 || position == 0 {
            return Err(Error::InvalidArgument(format!(
                "burst length and position must be positive (b={b}, position={position})"
            )));
        }
        Ok(Self { b, position })
    }

    /// The pattern `0^(position-1) 1^b 0^(len-position-b+1)` over `len` symbols.
    pub fn pattern(&self, len: usize) -> Result<BitString> {
        let end = self.position - 1 + self.b;
        if end > len {
            return Err(Error::TooShort { len, b: end });
        }
        Ok(BitString::from_bools(
            (0..len).map(|i| i >= self.position - 1 && i < end),
        ))
    }
}

/// Extent of the first b-run, with a flag for runs cut off by the end of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrunExtent {
    pub extent: usize,
    pub censored: bool,
}

fn check_len(x: &BitString, b: usize) -> Result<()> {
    if b == 0 {
        return Err(Error::InvalidArgument(
            "burst length must be positive".into(),
        ));
    }
    if x.len() < b {
        return Err(Error::TooShort { len: x.len(), b });
    }
    Ok(())
}

/// Length of the longest prefix of `x` that is periodic with period `b`.
fn periodic_prefix_len(bits: &[u8], b: usize) -> usize {
    (b..bits.len())
        .find(|&i| bits[i] != bits[i - b])
        .unwrap_or(bits.len())
}

/// Whether the whole of `x` is a b-run (of extent `|x| − b + 1`).
pub fn is_brun(x: &BitString, b: usize) -> Result<bool> {
    check_len(x, b)?;
    Ok(periodic_prefix_len(x.as_slice(), b) == x.len())
}

/// Extent `l` of the first b-run: its segment length is `b + l − 1`.
pub fn first_brun_extent(x: &BitString, b: usize) -> Result<BrunExtent> {
    check_len(x, b)?;
    let seg = periodic_prefix_len(x.as_slice(), b);
    Ok(BrunExtent {
        extent: seg - b + 1,
        censored: seg == x.len(),
    })
}

/// `y(x, d_{i,b})` for every start `i = 1 ..= |x| − b + 1`.
pub fn burst_delete_outcomes(x: &BitString, b: usize) -> Result<Vec<BitString>> {
    check_len(x, b)?;
    (1..=x.len() - b + 1)
        .map(|i| {
            let pattern = BurstSpec::new(b, i)?.pattern(x.len())?;
            apply_deletion(x, &pattern)
        })
        .collect()
}

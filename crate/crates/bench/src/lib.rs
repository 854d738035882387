//! Benchmark fixtures shared by the criterion targets.

use burstsync::{apply_deletion, BitString, BoundaryCondition, DeletionParams};

/// A deterministic source/side-information pair with periodic deletions.
pub fn fixture(n: usize, deletion_every: usize) -> (BitString, BitString, BoundaryCondition) {
    let x = BitString::from_bools((0..n).map(|i| (i * 7 + i / 3) % 5 < 2));
    let pattern = BitString::from_bools((0..n).map(|i| i % deletion_every == deletion_every - 1));
    let y = apply_deletion(&x, &pattern).expect("lengths match");
    (x, y, BoundaryCondition { d0: 0, d_next: 0 })
}

pub fn default_params() -> DeletionParams {
    DeletionParams::new(0.5, 0.05).expect("valid parameters")
}

//! Minimum-rate computations for synchronizing a binary source against
//! side-information produced by a bursty (Markov) deletion process.
//!
//! - [`deletion`]: the deletion chain, bit strings and the deletion map.
//! - [`lattice`]: emission probabilities and first-bit posteriors by dynamic programming.
//! - [`exact`]: exhaustive block entropies `R_n`, `J_n`, `E_n` and their identities.
//! - [`brun`]: periodic runs and burst-deletion outcomes.
//! - [`asymptotics`]: small-β expansions and the constant `C`.
//! - [`monte_carlo`]: seeded estimators at large block length.
//! - [`sync`]: a toy random-binning encoder/decoder.

pub mod asymptotics;
pub mod brun;
pub mod deletion;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod monte_carlo;
pub mod numeric;
pub mod sync;

pub use deletion::{
    apply_deletion, pattern_log_prob, sample_pattern, BitString, BoundaryCondition, DeletionParams,
};
pub use error::{Error, Result};
pub use exact::{BlockEntropies, EntropyReport};
pub use lattice::{LatticeQuery, LatticeResult, LogProb};
pub use monte_carlo::{EstimateWithError, RminEstimate, TypicalityConfig};
pub use sync::{BinCode, ErrorRateReport};

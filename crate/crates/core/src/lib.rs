//! # spikeinfo
//!
//! Information theory on finite probability models, histogram estimators with
//! bias correction, and transfer-entropy causality analysis for discrete time
//! series and neural spike trains.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |---|---|
//! | [`prob`] | finite distributions, joint tables, parametric families, sample statistics |
//! | [`processes`] | Poisson processes, order-k Markov chains, coupled binary pairs |
//! | [`measures`] | exact entropy, MI, KL, transfer entropy, channel capacity |
//! | [`estimators`] | histograms, plug-in / Miller–Madow / jackknife entropy, plug-in MI and TE |
//! | [`spiketrains`] | binning, words, maximum-entropy benchmarks for time and rate codes |
//! | [`significance`] | surrogate shuffles and permutation tests |
//!
//! All information values are reported in bits ([`Bits`]). Randomised
//! operations take a caller-owned RNG; [`seeded_rng`] gives the reproducible
//! generator used throughout the tests and the CLI.
//!
//! ```
//! use spikeinfo::{measures, prob::JointTable};
//!
//! let joint = JointTable::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
//! let mi = measures::mutual_information(&joint).unwrap();
//! assert!((mi.0 - 1.0).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]

mod bits;
mod error;

pub mod estimators;
pub mod measures;
pub mod prob;
pub mod processes;
pub mod significance;
pub mod spiketrains;

pub use bits::Bits;
pub use error::{Error, Result};

use rand::SeedableRng;

/// Deterministic, platform-independent generator used for every randomised
/// operation in the crate.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds a [`SeededRng`] from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

/// Crate version, echoed into CLI reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

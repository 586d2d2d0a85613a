//! Boosted ensembles of agglomerative hierarchical clusterings.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! * [`CondensedMatrix`], an upper-triangle store of pairwise dissimilarities,
//!   together with [`pairwise_euclidean`] and the [`pearson`] correlation.
//! * [`agglomerate`], Lance-Williams agglomerative clustering for the seven
//!   classic linkage methods, producing a [`Dendrogram`]. [`cophenetic`] and
//!   [`cpcc`] turn dendrograms back into matrices and score them.
//! * [`hboost`], the boosting loop: weighted subsampling, base clustering,
//!   streaming consensus of cophenetic matrices, recovery of a consensus
//!   dendrogram, per-sample boosted values and additive weight updates.
//!
//! File formats, configuration parsing and the experiment harness live in
//! the companion `hboost` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

mod boost;
mod combine;
mod condensed;
mod data;
mod dendrogram;
mod error;
mod linkage;
mod sample;
mod stats;

pub use crate::boost::{
    boosted_values, hboost, hboost_with_observer, update_weights, BoostOutcome, BoostState,
    IterationRecord, RunConfig, DEFAULT_ITERATIONS, DEFAULT_SUBSAMPLE_FRACTION,
    DEFAULT_WEIGHT_FLOOR,
};
pub use crate::combine::{
    consensus, power_mean, CombineOperator, ConsensusAccumulator, Fallback, PairStats,
};
pub use crate::condensed::{condensed_index, condensed_len, condensed_pair, CondensedMatrix};
pub use crate::data::{pairwise_euclidean, standardize, DataMatrix};
pub use crate::dendrogram::{cophenetic, Dendrogram, Merge};
pub use crate::error::{Error, Result};
pub use crate::linkage::{agglomerate, cpcc, lw_coefficients, LinkageMethod, LwCoefficients};
pub use crate::sample::weighted_sample;
pub use crate::stats::pearson;

/// Random generator used throughout the crate.
///
/// ChaCha8 is portable and fully determined by its seed, which keeps boosting
/// runs reproducible across platforms.
pub type Rng = rand_chacha::ChaCha8Rng;

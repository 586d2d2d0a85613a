use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;

use crate::combine::{consensus, CombineOperator, ConsensusAccumulator, Fallback};
use crate::condensed::CondensedMatrix;
use crate::data::{euclidean_over, pairwise_euclidean, standardize, DataMatrix};
use crate::dendrogram::{cophenetic, Dendrogram};
use crate::error::{Error, Result};
use crate::linkage::{agglomerate, cpcc, LinkageMethod};
use crate::sample::weighted_sample;
use crate::stats::pearson;
use crate::Rng;

pub const DEFAULT_ITERATIONS: usize = 200;
pub const DEFAULT_SUBSAMPLE_FRACTION: f64 = 0.20;
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-6;

/// Parameters of one boosting run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Linkage used for each base clustering.
    pub clusterer: LinkageMethod,
    /// How cophenetic matrices of the ensemble are combined.
    pub combiner: CombineOperator,
    /// Linkage used to recover a dendrogram from the consensus matrix.
    pub recovery: LinkageMethod,
    pub iterations: usize,
    /// Share of the dataset drawn per iteration, in `(0, 1]`.
    pub subsample_fraction: f64,
    pub seed: u64,
    /// Lower clamp applied to sample weights after each update.
    pub weight_floor: f64,
    pub fallback: Fallback,
    /// Z-score features before computing distances.
    pub standardize: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            clusterer: LinkageMethod::Average,
            combiner: CombineOperator::Average,
            recovery: LinkageMethod::Average,
            iterations: DEFAULT_ITERATIONS,
            subsample_fraction: DEFAULT_SUBSAMPLE_FRACTION,
            seed: 0,
            weight_floor: DEFAULT_WEIGHT_FLOOR,
            fallback: Fallback::EuclidScaled,
            standardize: true,
        }
    }
}

impl RunConfig {
    /// Checks parameter ranges independent of the data.
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be positive".into()));
        }
        if !(self.subsample_fraction > 0.0 && self.subsample_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "subsample_fraction must be in (0, 1], got {}",
                self.subsample_fraction
            )));
        }
        if !(self.weight_floor > 0.0 && self.weight_floor.is_finite()) {
            return Err(Error::Config(format!(
                "weight_floor must be positive, got {}",
                self.weight_floor
            )));
        }
        if self.combiner.beta().is_nan() {
            return Err(Error::Config("combiner exponent is NaN".into()));
        }
        Ok(())
    }

    /// Subsample size for a dataset of `n` samples: `ceil(fraction · n)`.
    pub fn subsample_size(&self, n: usize) -> Result<usize> {
        let m = (libm::ceil(self.subsample_fraction * n as f64) as usize).min(n);
        if m < 2 {
            return Err(Error::Config(format!(
                "subsample of {m} from {n} samples is too small to cluster"
            )));
        }
        Ok(m)
    }
}

/// Per-iteration trace entry.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 1-based iteration number.
    pub iteration: usize,
    pub subsample: Vec<usize>,
    /// CPCC of the recovered consensus dendrogram against the data.
    pub cpcc: f64,
    pub weight_min: f64,
    pub weight_mean: f64,
    pub weight_max: f64,
}

/// Mutable state of a boosting run between iterations.
#[derive(Debug, Clone)]
pub struct BoostState {
    weights: Vec<f64>,
    iteration: usize,
    rng: Rng,
    accumulator: ConsensusAccumulator,
    trace: Vec<IterationRecord>,
    consensus: Option<CondensedMatrix>,
    recovered: Option<Dendrogram>,
}

impl BoostState {
    /// Uniform weights `1/N`, a generator seeded from `seed`, and an empty
    /// accumulator.
    pub fn new(n: usize, combiner: CombineOperator, seed: u64) -> Self {
        BoostState {
            weights: alloc::vec![1.0 / n as f64; n],
            iteration: 0,
            rng: Rng::seed_from_u64(seed),
            accumulator: ConsensusAccumulator::new(n, combiner),
            trace: Vec::new(),
            consensus: None,
            recovered: None,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of completed iterations.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn accumulator(&self) -> &ConsensusAccumulator {
        &self.accumulator
    }

    pub fn trace(&self) -> &[IterationRecord] {
        &self.trace
    }

    /// Consensus matrix after the latest iteration.
    pub fn consensus(&self) -> Option<&CondensedMatrix> {
        self.consensus.as_ref()
    }

    /// Dendrogram recovered from the latest consensus matrix.
    pub fn recovered(&self) -> Option<&Dendrogram> {
        self.recovered.as_ref()
    }

    /// Runs one iteration: sample, cluster, accumulate, recover, reweight.
    pub fn step(
        &mut self,
        data: &DataMatrix,
        euclid: &CondensedMatrix,
        cfg: &RunConfig,
    ) -> Result<()> {
        let m = cfg.subsample_size(data.n_samples())?;
        let subsample = weighted_sample(&self.weights, m, &mut self.rng)?;
        let base = agglomerate(&euclidean_over(data, &subsample), cfg.clusterer)?;
        self.accumulator
            .accumulate(&subsample, &cophenetic(&base))?;

        let merged = consensus(&self.accumulator, euclid, cfg.fallback)?;
        let recovered = agglomerate(&merged, cfg.recovery)?;
        let cd_agg = cophenetic(&recovered);
        let bv = boosted_values(euclid, &cd_agg)?;
        update_weights(&mut self.weights, &bv, cfg.weight_floor)?;

        self.iteration += 1;
        let (lo, hi, sum) = self.weights.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, 0.0),
            |(lo, hi, s), &w| (lo.min(w), hi.max(w), s + w),
        );
        self.trace.push(IterationRecord {
            iteration: self.iteration,
            subsample,
            cpcc: cpcc(euclid, &cd_agg)?,
            weight_min: lo,
            weight_mean: sum / self.weights.len() as f64,
            weight_max: hi,
        });
        self.consensus = Some(merged);
        self.recovered = Some(recovered);
        Ok(())
    }
}

/// Per-sample boosted values: the correlation, for each item, between its
/// row of original distances and its row of aggregated cophenetic
/// distances. Rows with zero variance score 0.
pub fn boosted_values(euclid_full: &CondensedMatrix, cd_agg: &CondensedMatrix) -> Result<Vec<f64>> {
    if euclid_full.n() != cd_agg.n() {
        return Err(Error::LengthMismatch {
            left: euclid_full.n(),
            right: cd_agg.n(),
        });
    }
    (0..euclid_full.n())
        .map(|i| pearson(&euclid_full.row(i), &cd_agg.row(i)))
        .collect()
}

/// Additive update `w ← max(w − BV, floor)`.
pub fn update_weights(weights: &mut [f64], bv: &[f64], floor: f64) -> Result<()> {
    if weights.len() != bv.len() {
        return Err(Error::LengthMismatch {
            left: weights.len(),
            right: bv.len(),
        });
    }
    for (w, b) in weights.iter_mut().zip(bv) {
        *w = (*w - b).max(floor);
    }
    Ok(())
}

/// Result of a full boosting run.
#[derive(Debug, Clone)]
pub struct BoostOutcome {
    /// The consensus hierarchy after the last iteration.
    pub dendrogram: Dendrogram,
    /// Consensus matrix the final dendrogram was recovered from.
    pub consensus: CondensedMatrix,
    /// Euclidean distances of the (possibly standardized) data.
    pub euclid: CondensedMatrix,
    pub trace: Vec<IterationRecord>,
    pub weights: Vec<f64>,
}

impl BoostOutcome {
    /// CPCC of the final dendrogram against the data.
    pub fn cpcc(&self) -> f64 {
        self.trace.last().map_or(0.0, |r| r.cpcc)
    }
}

/// Runs the boosting loop for `cfg.iterations` iterations.
pub fn hboost(d: &DataMatrix, cfg: &RunConfig) -> Result<BoostOutcome> {
    hboost_with_observer(d, cfg, |_| {})
}

/// Like [`hboost`], calling `observe` with the state after every iteration.
pub fn hboost_with_observer(
    d: &DataMatrix,
    cfg: &RunConfig,
    mut observe: impl FnMut(&BoostState),
) -> Result<BoostOutcome> {
    cfg.validate()?;
    cfg.subsample_size(d.n_samples())?;
    let scaled;
    let data = if cfg.standardize {
        scaled = standardize(d);
        &scaled
    } else {
        d
    };
    let euclid = pairwise_euclidean(data);
    let mut state = BoostState::new(data.n_samples(), cfg.combiner, cfg.seed);
    for _ in 0..cfg.iterations {
        state.step(data, &euclid, cfg)?;
        observe(&state);
    }
    let BoostState {
        weights,
        trace,
        consensus,
        recovered,
        ..
    } = state;
    Ok(BoostOutcome {
        dendrogram: recovered.expect("at least one iteration ran"),
        consensus: consensus.expect("at least one iteration ran"),
        euclid,
        trace,
        weights,
    })
}

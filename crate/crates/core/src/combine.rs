use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::condensed::{condensed_len, index_unchecked, CondensedMatrix};
use crate::error::{Error, Result};

/// Power-mean combination of the values observed for one pair.
///
/// `Min`, `Average` and `Max` are the power means at β = −∞, 1 and +∞.
/// `Power(β)` is `((1/m) Σ d^β)^(1/β)` for any other finite β, with β = 0
/// read as the geometric mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CombineOperator {
    Min,
    Average,
    Max,
    Power(f64),
}

impl CombineOperator {
    /// The three operators of the experiment grid.
    pub const NAMED: [CombineOperator; 3] = [
        CombineOperator::Min,
        CombineOperator::Average,
        CombineOperator::Max,
    ];

    /// Maps β onto an operator, collapsing −∞, 1 and +∞ onto the named ones.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta.is_nan() {
            return Err(Error::Config("combine exponent must not be NaN".into()));
        }
        Ok(if beta == f64::NEG_INFINITY {
            CombineOperator::Min
        } else if beta == f64::INFINITY {
            CombineOperator::Max
        } else if beta == 1.0 {
            CombineOperator::Average
        } else {
            CombineOperator::Power(beta)
        })
    }

    pub fn beta(self) -> f64 {
        match self {
            CombineOperator::Min => f64::NEG_INFINITY,
            CombineOperator::Average => 1.0,
            CombineOperator::Max => f64::INFINITY,
            CombineOperator::Power(b) => b,
        }
    }

    pub fn name(self) -> alloc::string::String {
        match self {
            CombineOperator::Min => "min".into(),
            CombineOperator::Average => "average".into(),
            CombineOperator::Max => "max".into(),
            CombineOperator::Power(b) => format!("power({b})"),
        }
    }
}

impl fmt::Display for CombineOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for CombineOperator {
    type Err = Error;

    /// Accepts `min`, `average` (or `mean`), `max`, or a numeric β such as
    /// `2`, `-inf`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "min" | "minimum" => Ok(CombineOperator::Min),
            "average" | "mean" | "avg" => Ok(CombineOperator::Average),
            "max" | "maximum" => Ok(CombineOperator::Max),
            _ => {
                let inner = t
                    .strip_prefix("power(")
                    .and_then(|r| r.strip_suffix(')'))
                    .unwrap_or(&t);
                let beta: f64 = inner
                    .parse()
                    .map_err(|_| Error::Config(format!("unknown combiner {s:?}")))?;
                Self::from_beta(beta)
            }
        }
    }
}

/// Power mean of a nonempty slice under `op`.
pub fn power_mean(values: &[f64], op: CombineOperator) -> Option<f64> {
    let mut s = PairStats::default();
    for &v in values {
        s.push(v, op);
    }
    s.value(op)
}

/// Streaming statistics for one pair.
///
/// Count, min, max and sum are always kept; `power_sum` accumulates `d^β`
/// (or `ln d` at β = 0) only for [`CombineOperator::Power`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairStats {
    pub count: u32,
    pub min: f64,
    pub max: f64,
    pub sum: f64,
    pub power_sum: f64,
}

impl Default for PairStats {
    fn default() -> Self {
        PairStats {
            count: 0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            sum: 0.0,
            power_sum: 0.0,
        }
    }
}

impl PairStats {
    #[inline]
    fn push(&mut self, v: f64, op: CombineOperator) {
        self.count += 1;
        self.min = self.min.min(v);
        self.max = self.max.max(v);
        self.sum += v;
        if let CombineOperator::Power(beta) = op {
            self.power_sum += if beta == 0.0 {
                libm::log(v)
            } else {
                libm::pow(v, beta)
            };
        }
    }

    /// Combined value under `op`, or `None` when nothing was observed.
    ///
    /// `Power` values are only meaningful for the operator the statistics
    /// were accumulated with.
    pub fn value(&self, op: CombineOperator) -> Option<f64> {
        if self.count == 0 {
            return None;
        }
        let m = self.count as f64;
        // every power mean lies in [min, max]; clamping removes rounding drift
        Some(match op {
            CombineOperator::Min => self.min,
            CombineOperator::Max => self.max,
            CombineOperator::Average => (self.sum / m).clamp(self.min, self.max),
            CombineOperator::Power(0.0) => libm::exp(self.power_sum / m).clamp(self.min, self.max),
            // zeros under a negative exponent give an infinite sum and a mean of 0
            CombineOperator::Power(beta) => {
                libm::pow(self.power_sum / m, 1.0 / beta).clamp(self.min, self.max)
            }
        })
    }
}

/// How pairs never seen together in any subsample are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fallback {
    /// Euclidean distance rescaled so its maximum equals the largest covered
    /// consensus value.
    #[default]
    EuclidScaled,
    /// The largest covered consensus value.
    MaxFill,
}

impl FromStr for Fallback {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euclid-scaled" => Ok(Fallback::EuclidScaled),
            "max-fill" => Ok(Fallback::MaxFill),
            _ => Err(Error::Config(format!("unknown fallback {s:?}"))),
        }
    }
}

impl fmt::Display for Fallback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fallback::EuclidScaled => "euclid-scaled",
            Fallback::MaxFill => "max-fill",
        })
    }
}

/// Per-pair streaming reduction of cophenetic matrices over subsamples of a
/// dataset of `n` items.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusAccumulator {
    n: usize,
    op: CombineOperator,
    stats: Vec<PairStats>,
}

impl ConsensusAccumulator {
    pub fn new(n: usize, op: CombineOperator) -> Self {
        ConsensusAccumulator {
            n,
            op,
            stats: vec![PairStats::default(); condensed_len(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn operator(&self) -> CombineOperator {
        self.op
    }

    /// Statistics in condensed order over the full dataset.
    pub fn stats(&self) -> &[PairStats] {
        &self.stats
    }

    /// Folds the cophenetic matrix of one subsample into the running state.
    ///
    /// `subsample[a]` is the dataset index of item `a` of `cd_sub`.
    pub fn accumulate(&mut self, subsample: &[usize], cd_sub: &CondensedMatrix) -> Result<()> {
        if cd_sub.n() != subsample.len() {
            return Err(Error::LengthMismatch {
                left: cd_sub.n(),
                right: subsample.len(),
            });
        }
        if let Some(&index) = subsample.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange { index, n: self.n });
        }
        let values = cd_sub.as_slice();
        let mut pos = 0;
        for (a, &ga) in subsample.iter().enumerate() {
            for &gb in &subsample[a + 1..] {
                let (i, j) = if ga < gb { (ga, gb) } else { (gb, ga) };
                if i == j {
                    return Err(Error::InvalidPair { i, j, n: self.n });
                }
                self.stats[index_unchecked(i, j, self.n)].push(values[pos], self.op);
                pos += 1;
            }
        }
        Ok(())
    }

    /// Consensus value of a covered pair at flat index `index` under `op`.
    pub fn value_at(&self, index: usize, op: CombineOperator) -> Option<f64> {
        self.stats[index].value(op)
    }

    pub fn covered_pairs(&self) -> usize {
        self.stats.iter().filter(|s| s.count > 0).count()
    }
}

/// Reads the consensus matrix out of `acc`, filling uncovered pairs per
/// `fallback`.
pub fn consensus(
    acc: &ConsensusAccumulator,
    euclid_full: &CondensedMatrix,
    fallback: Fallback,
) -> Result<CondensedMatrix> {
    if euclid_full.n() != acc.n {
        return Err(Error::LengthMismatch {
            left: euclid_full.n(),
            right: acc.n,
        });
    }
    let values: Vec<Option<f64>> = acc.stats.iter().map(|s| s.value(acc.op)).collect();
    let max_covered = values
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let max_euclid = euclid_full.max();
    let scale = if max_covered.is_finite() {
        if max_euclid > 0.0 {
            max_covered / max_euclid
        } else {
            0.0
        }
    } else {
        1.0
    };
    let data = values
        .iter()
        .zip(euclid_full.as_slice())
        .map(|(v, &e)| match (v, fallback) {
            (Some(v), _) => *v,
            (None, _) if !max_covered.is_finite() => e,
            (None, Fallback::EuclidScaled) => e * scale,
            (None, Fallback::MaxFill) => max_covered,
        })
        .collect();
    CondensedMatrix::with_size(acc.n, data)
}

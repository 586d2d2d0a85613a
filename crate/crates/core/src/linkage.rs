use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::condensed::CondensedMatrix;
use crate::dendrogram::{Dendrogram, Merge};
use crate::error::{Error, Result};
use crate::stats::pearson;

/// Inter-cluster dissimilarity rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkageMethod {
    Single,
    Complete,
    Average,
    Weighted,
    Centroid,
    Median,
    Ward,
}

impl LinkageMethod {
    /// All seven methods usable as base clusterers.
    pub const ALL: [LinkageMethod; 7] = [
        LinkageMethod::Centroid,
        LinkageMethod::Single,
        LinkageMethod::Average,
        LinkageMethod::Complete,
        LinkageMethod::Weighted,
        LinkageMethod::Median,
        LinkageMethod::Ward,
    ];

    /// The six methods used to recover a dendrogram from a consensus matrix.
    pub const RECOVERY: [LinkageMethod; 6] = [
        LinkageMethod::Average,
        LinkageMethod::Single,
        LinkageMethod::Complete,
        LinkageMethod::Ward,
        LinkageMethod::Centroid,
        LinkageMethod::Median,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LinkageMethod::Single => "single",
            LinkageMethod::Complete => "complete",
            LinkageMethod::Average => "average",
            LinkageMethod::Weighted => "weighted",
            LinkageMethod::Centroid => "centroid",
            LinkageMethod::Median => "median",
            LinkageMethod::Ward => "ward",
        }
    }

    /// Centroid, median and Ward run the recurrence on squared dissimilarities.
    pub fn uses_squared(self) -> bool {
        matches!(
            self,
            LinkageMethod::Centroid | LinkageMethod::Median | LinkageMethod::Ward
        )
    }

    /// Whether merge heights are guaranteed nondecreasing.
    pub fn is_monotone(self) -> bool {
        !matches!(self, LinkageMethod::Centroid | LinkageMethod::Median)
    }

    pub fn is_recovery(self) -> bool {
        self != LinkageMethod::Weighted
    }
}

impl fmt::Display for LinkageMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinkageMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = match s.trim().to_ascii_lowercase().as_str() {
            "single" => LinkageMethod::Single,
            "complete" => LinkageMethod::Complete,
            "average" => LinkageMethod::Average,
            "weighted" => LinkageMethod::Weighted,
            "centroid" => LinkageMethod::Centroid,
            "median" => LinkageMethod::Median,
            "ward" => LinkageMethod::Ward,
            _ => {
                return Err(Error::Config(alloc::format!(
                    "unknown linkage method {s:?}"
                )))
            }
        };
        Ok(m)
    }
}

/// Coefficients of `d(k, i∪j) = αi·d(k,i) + αj·d(k,j) + β·d(i,j) + γ·|d(k,i) − d(k,j)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LwCoefficients {
    pub alpha_i: f64,
    pub alpha_j: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl LwCoefficients {
    #[inline]
    fn apply(&self, d_ki: f64, d_kj: f64, d_ij: f64) -> f64 {
        self.alpha_i * d_ki
            + self.alpha_j * d_kj
            + self.beta * d_ij
            + self.gamma * (d_ki - d_kj).abs()
    }
}

/// Lance-Williams coefficients for merging clusters of sizes `size_i` and
/// `size_j`, as seen from a third cluster of size `size_k`.
pub fn lw_coefficients(
    method: LinkageMethod,
    size_i: usize,
    size_j: usize,
    size_k: usize,
) -> LwCoefficients {
    let (ni, nj, nk) = (size_i as f64, size_j as f64, size_k as f64);
    let c = |alpha_i, alpha_j, beta, gamma| LwCoefficients {
        alpha_i,
        alpha_j,
        beta,
        gamma,
    };
    match method {
        LinkageMethod::Single => c(0.5, 0.5, 0.0, -0.5),
        LinkageMethod::Complete => c(0.5, 0.5, 0.0, 0.5),
        LinkageMethod::Average => c(ni / (ni + nj), nj / (ni + nj), 0.0, 0.0),
        LinkageMethod::Weighted => c(0.5, 0.5, 0.0, 0.0),
        LinkageMethod::Centroid => {
            let s = ni + nj;
            c(ni / s, nj / s, -(ni * nj) / (s * s), 0.0)
        }
        LinkageMethod::Median => c(0.5, 0.5, -0.25, 0.0),
        LinkageMethod::Ward => {
            let s = ni + nj + nk;
            c((ni + nk) / s, (nj + nk) / s, -nk / s, 0.0)
        }
    }
}

/// Candidate pair ordering: smaller dissimilarity first, then the smaller
/// `(min_id, max_id)` of the two cluster ids.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    dist: f64,
    key: (usize, usize),
}

impl Candidate {
    const NONE: Candidate = Candidate {
        dist: f64::INFINITY,
        key: (usize::MAX, usize::MAX),
    };

    fn new(dist: f64, a: usize, b: usize) -> Self {
        Candidate {
            dist,
            key: if a < b { (a, b) } else { (b, a) },
        }
    }

    fn cmp(&self, other: &Candidate) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.key.cmp(&other.key))
    }
}

/// Working state for one agglomeration. Clusters live in slots; a merged
/// cluster takes the lower of its two slots, so slot `s` always holds the
/// cluster whose smallest leaf is `s`.
struct Linkage {
    n: usize,
    dist: Vec<f64>,
    id: Vec<usize>,
    size: Vec<usize>,
    active: Vec<usize>,
    nn: Vec<(Candidate, usize)>,
}

impl Linkage {
    #[inline]
    fn d(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.n + b]
    }

    #[inline]
    fn set(&mut self, a: usize, b: usize, v: f64) {
        self.dist[a * self.n + b] = v;
        self.dist[b * self.n + a] = v;
    }

    fn nearest(&self, a: usize) -> (Candidate, usize) {
        let mut best = (Candidate::NONE, usize::MAX);
        for &b in &self.active {
            if b != a {
                let c = Candidate::new(self.d(a, b), self.id[a], self.id[b]);
                if c.cmp(&best.0) == Ordering::Less {
                    best = (c, b);
                }
            }
        }
        best
    }
}

/// Agglomerative clustering of a precomputed dissimilarity matrix.
///
/// At each step the active pair of minimal dissimilarity is merged, ties going
/// to the lexicographically smallest pair of cluster ids. Centroid, median
/// and Ward operate on squared dissimilarities and report square-rooted
/// heights.
pub fn agglomerate(dist: &CondensedMatrix, method: LinkageMethod) -> Result<Dendrogram> {
    let n = dist.n();
    if n < 2 {
        return Err(Error::TooFewItems(n));
    }
    let squared = method.uses_squared();
    let mut dense = vec![0.0; n * n];
    let flat = dist.as_slice();
    let mut pos = 0;
    for i in 0..n {
        for j in i + 1..n {
            let v = if squared {
                flat[pos] * flat[pos]
            } else {
                flat[pos]
            };
            dense[i * n + j] = v;
            dense[j * n + i] = v;
            pos += 1;
        }
    }

    let mut st = Linkage {
        n,
        dist: dense,
        id: (0..n).collect(),
        size: vec![1; n],
        active: (0..n).collect(),
        nn: Vec::new(),
    };
    st.nn = (0..n).map(|a| st.nearest(a)).collect();

    let mut merges = Vec::with_capacity(n - 1);
    for t in 0..n - 1 {
        let mut best = (Candidate::NONE, usize::MAX, usize::MAX);
        for &a in &st.active {
            let (c, b) = st.nn[a];
            if c.cmp(&best.0) == Ordering::Less {
                best = (c, a, b);
            }
        }
        let (cand, x, y) = best;
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let d_ij = st.d(lo, hi);
        let (size_lo, size_hi) = (st.size[lo], st.size[hi]);

        let height = if squared {
            libm::sqrt(cand.dist.max(0.0))
        } else {
            cand.dist
        };
        merges.push(Merge {
            left: st.id[lo],
            right: st.id[hi],
            height,
            size: size_lo + size_hi,
        });

        st.active.retain(|&s| s != hi);
        for idx in 0..st.active.len() {
            let k = st.active[idx];
            if k == lo {
                continue;
            }
            let coef = lw_coefficients(method, size_lo, size_hi, st.size[k]);
            let mut v = coef.apply(st.d(k, lo), st.d(k, hi), d_ij);
            if squared && v < 0.0 {
                v = 0.0;
            }
            st.set(k, lo, v);
        }
        st.id[lo] = n + t;
        st.size[lo] = size_lo + size_hi;

        if st.active.len() > 1 {
            st.nn[lo] = st.nearest(lo);
            let new_id = st.id[lo];
            for idx in 0..st.active.len() {
                let k = st.active[idx];
                if k == lo {
                    continue;
                }
                let (_, nb) = st.nn[k];
                if nb == lo || nb == hi {
                    st.nn[k] = st.nearest(k);
                } else {
                    let c = Candidate::new(st.d(k, lo), st.id[k], new_id);
                    if c.cmp(&st.nn[k].0) == Ordering::Less {
                        st.nn[k] = (c, lo);
                    }
                }
            }
        }
    }
    Ok(Dendrogram::from_merges_unchecked(n, merges))
}

/// Cophenetic correlation: Pearson correlation of two condensed matrices over
/// the same items.
pub fn cpcc(a: &CondensedMatrix, b: &CondensedMatrix) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    pearson(a.as_slice(), b.as_slice())
}

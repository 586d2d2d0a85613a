use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::condensed::{condensed_len, index_unchecked, CondensedMatrix};
use crate::error::{Error, Result};

/// One agglomeration step.
///
/// Leaves are `0..n`; the merge at position `t` creates cluster `n + t`.
/// `left` is the side holding the smaller leaf index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

/// A stepwise dendrogram: `n - 1` merges in the order they happened.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n_leaves: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    /// Validates and wraps a merge list.
    ///
    /// Every cluster id must be consumed exactly once, sizes must add up and
    /// heights must be finite and nonnegative. Non-monotone heights are allowed.
    pub fn from_merges(n_leaves: usize, merges: Vec<Merge>) -> Result<Self> {
        if n_leaves < 2 {
            return Err(Error::TooFewItems(n_leaves));
        }
        if merges.len() != n_leaves - 1 {
            return Err(Error::BadDendrogram(format!(
                "{} merges for {} leaves",
                merges.len(),
                n_leaves
            )));
        }
        let total = 2 * n_leaves - 1;
        let mut sizes = vec![0usize; total];
        sizes[..n_leaves].fill(1);
        let mut consumed = vec![false; total];
        for (t, m) in merges.iter().enumerate() {
            let created = n_leaves + t;
            for id in [m.left, m.right] {
                if id >= created {
                    return Err(Error::BadDendrogram(format!(
                        "merge {t} references cluster {id} before it exists"
                    )));
                }
                if consumed[id] {
                    return Err(Error::BadDendrogram(format!("cluster {id} merged twice")));
                }
                consumed[id] = true;
            }
            if m.left == m.right {
                return Err(Error::BadDendrogram(format!(
                    "merge {t} joins {} with itself",
                    m.left
                )));
            }
            if !m.height.is_finite() || m.height < 0.0 {
                return Err(Error::BadDendrogram(format!(
                    "merge {t} has height {}",
                    m.height
                )));
            }
            let size = sizes[m.left] + sizes[m.right];
            if size != m.size {
                return Err(Error::BadDendrogram(format!(
                    "merge {t} has size {} but joins {} items",
                    m.size, size
                )));
            }
            sizes[created] = size;
        }
        Ok(Dendrogram { n_leaves, merges })
    }

    pub(crate) fn from_merges_unchecked(n_leaves: usize, merges: Vec<Merge>) -> Self {
        debug_assert!(Self::from_merges(n_leaves, merges.clone()).is_ok());
        Dendrogram { n_leaves, merges }
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn heights(&self) -> impl Iterator<Item = f64> + '_ {
        self.merges.iter().map(|m| m.height)
    }

    /// True when no merge is lower than the one before it.
    pub fn is_monotone(&self) -> bool {
        self.merges.windows(2).all(|w| w[0].height <= w[1].height)
    }
}

/// Cophenetic matrix: for each leaf pair, the height of the merge that first
/// puts them in the same cluster.
///
/// Inversions are kept as produced, so a pair may get a height below that of
/// a merge deeper in its subtree.
pub fn cophenetic(d: &Dendrogram) -> CondensedMatrix {
    let n = d.n_leaves;
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    members.reserve(n - 1);
    let mut data = vec![0.0; condensed_len(n)];
    for m in &d.merges {
        let left = core::mem::take(&mut members[m.left]);
        let right = core::mem::take(&mut members[m.right]);
        for &a in &left {
            for &b in &right {
                let (i, j) = if a < b { (a, b) } else { (b, a) };
                data[index_unchecked(i, j, n)] = m.height;
            }
        }
        let mut joined = left;
        joined.extend(right);
        members.push(joined);
    }
    CondensedMatrix::with_size(n, data).expect("merge heights are finite and nonnegative")
}

use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};

/// Number of unordered pairs over `n` items.
#[inline]
pub const fn condensed_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Flat position of the pair `(i, j)`, `i < j`, in row-major upper-triangle
/// order.
pub fn condensed_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i >= j || j >= n {
        return Err(Error::InvalidPair { i, j, n });
    }
    Ok(index_unchecked(i, j, n))
}

#[inline]
pub(crate) fn index_unchecked(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Inverse of [`condensed_index`].
pub fn condensed_pair(index: usize, n: usize) -> Result<(usize, usize)> {
    if index >= condensed_len(n) {
        return Err(Error::IndexOutOfRange {
            index,
            n: condensed_len(n),
        });
    }
    // Row i owns the n - 1 - i entries starting at `start`.
    let mut i = 0;
    let mut start = 0;
    loop {
        let row_len = n - 1 - i;
        if index < start + row_len {
            return Ok((i, i + 1 + index - start));
        }
        start += row_len;
        i += 1;
    }
}

/// Upper-triangle store of pairwise dissimilarities over `n` items.
///
/// Entries are finite and nonnegative. The pair `(i, j)` with `i < j` lives at
/// [`condensed_index`]`(i, j, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CondensedMatrix {
    /// Wraps a flat vector, inferring `n` from its length.
    pub fn from_vec(data: Vec<f64>) -> Result<Self> {
        let n = n_from_len(data.len()).ok_or(Error::BadCondensedLength { len: data.len() })?;
        Self::with_size(n, data)
    }

    pub fn with_size(n: usize, data: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewItems(n));
        }
        if data.len() != condensed_len(n) {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: condensed_len(n),
            });
        }
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::BadDissimilarity { index, value });
        }
        Ok(CondensedMatrix { n, data })
    }

    /// Builds a matrix by evaluating `f(i, j)` for every pair `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(condensed_len(n));
        for i in 0..n {
            for j in i + 1..n {
                data.push(f(i, j));
            }
        }
        Self::with_size(n, data)
    }

    /// Number of items (not entries).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Dissimilarity between two distinct items, in either order.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i != j && i < self.n && j < self.n, "bad pair ({i}, {j})");
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.data[index_unchecked(a, b, self.n)]
    }

    /// The `n - 1` entries pairing `item` with every other item, in item order.
    pub fn row(&self, item: usize) -> Vec<f64> {
        (0..self.n)
            .filter(|&k| k != item)
            .map(|k| self.get(item, k))
            .collect()
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Serializes as `n` (u64) followed by the entries, all little-endian.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * (1 + self.data.len()));
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_le_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 || !bytes.len().is_multiple_of(8) {
            return Err(Error::BadCondensedLength { len: bytes.len() });
        }
        let mut words = bytes
            .chunks_exact(8)
            .map(|c| <[u8; 8]>::try_from(c).expect("chunk of 8"));
        let n = u64::from_le_bytes(words.next().expect("length checked")) as usize;
        let data: Vec<f64> = words.map(f64::from_le_bytes).collect();
        Self::with_size(n, data)
    }
}

impl Index<usize> for CondensedMatrix {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.data[index]
    }
}

fn n_from_len(len: usize) -> Option<usize> {
    // n(n-1)/2 = len  =>  n = (1 + sqrt(1 + 8 len)) / 2
    let approx = ((1.0 + libm::sqrt(1.0 + 8.0 * len as f64)) / 2.0) as usize;
    (approx.saturating_sub(1)..=approx + 1).find(|&n| condensed_len(n) == len && n >= 2)
}

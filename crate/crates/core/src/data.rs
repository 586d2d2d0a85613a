use alloc::string::String;
use alloc::vec::Vec;

use crate::condensed::{condensed_len, CondensedMatrix};
use crate::error::{Error, Result};

/// `N` samples by `F` features, stored row-major.
///
/// Labels are carried for reporting only; nothing in the clustering path
/// reads them.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    n_samples: usize,
    n_features: usize,
    labels: Option<Vec<String>>,
}

impl DataMatrix {
    pub fn new(values: Vec<f64>, n_samples: usize, n_features: usize) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::TooFewItems(n_samples));
        }
        if n_features == 0 || values.len() != n_samples * n_features {
            return Err(Error::BadShape {
                rows: n_samples,
                cols: n_features,
                len: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n_features,
                column: pos % n_features,
            });
        }
        Ok(DataMatrix {
            values,
            n_samples,
            n_features,
            labels: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_features = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_features) {
            return Err(Error::LengthMismatch {
                left: bad.len(),
                right: n_features,
            });
        }
        Self::new(rows.concat(), rows.len(), n_features)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_samples {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: self.n_samples,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_features)
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[j])
    }
}

/// Z-scores every feature using the population standard deviation.
///
/// Constant features become all zeros.
pub fn standardize(d: &DataMatrix) -> DataMatrix {
    let n = d.n_samples as f64;
    let mut out = d.clone();
    for j in 0..d.n_features {
        let mean = d.column(j).sum::<f64>() / n;
        let var = d.column(j).map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let sd = libm::sqrt(var);
        for i in 0..d.n_samples {
            let v = &mut out.values[i * d.n_features + j];
            *v = if sd > 0.0 { (*v - mean) / sd } else { 0.0 };
        }
    }
    out
}

/// Euclidean distances between all rows.
pub fn pairwise_euclidean(d: &DataMatrix) -> CondensedMatrix {
    euclidean_over(d, &(0..d.n_samples).collect::<Vec<_>>())
}

/// Euclidean distances between the given rows, in the order given.
pub(crate) fn euclidean_over(d: &DataMatrix, rows: &[usize]) -> CondensedMatrix {
    let m = rows.len();
    let mut data = Vec::with_capacity(condensed_len(m));
    for (a, &i) in rows.iter().enumerate() {
        let xi = d.row(i);
        for &j in &rows[a + 1..] {
            let xj = d.row(j);
            let sq: f64 = xi.iter().zip(xj).map(|(p, q)| (p - q) * (p - q)).sum();
            data.push(libm::sqrt(sq));
        }
    }
    CondensedMatrix::with_size(m, data).expect("euclidean distances are finite and nonnegative")
}

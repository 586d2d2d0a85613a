//! File formats, the experiment grid and reporting for `hboost-core`.
//!
//! * [`io`] reads delimited datasets and `key = value` run configurations, and
//!   writes dendrogram, consensus-matrix and trace dumps.
//! * [`grid`] runs single-linkage baselines and the clusterer × combiner ×
//!   recovery grid, and ranks the results by mean CPCC.

pub mod grid;
pub mod io;

pub use hboost_core as core;

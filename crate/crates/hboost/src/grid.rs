use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use hboost_core::{
    agglomerate, cophenetic, cpcc, hboost, pairwise_euclidean, standardize, CombineOperator,
    DataMatrix, Fallback, LinkageMethod, RunConfig, DEFAULT_ITERATIONS, DEFAULT_SUBSAMPLE_FRACTION,
    DEFAULT_WEIGHT_FLOOR,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::{IoError, Result};

/// Axes and run parameters of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub clusterers: Vec<LinkageMethod>,
    pub combiners: Vec<CombineOperator>,
    pub recoveries: Vec<LinkageMethod>,
    pub iterations: usize,
    pub fraction: f64,
    pub seeds: Vec<u64>,
    pub weight_floor: f64,
    pub fallback: Fallback,
    pub standardize: bool,
}

impl GridSpec {
    /// The full 7 × 3 × 6 grid at 200 iterations and 20% subsamples.
    pub fn full(seeds: Vec<u64>) -> Self {
        GridSpec {
            clusterers: LinkageMethod::ALL.to_vec(),
            combiners: CombineOperator::NAMED.to_vec(),
            recoveries: LinkageMethod::RECOVERY.to_vec(),
            iterations: DEFAULT_ITERATIONS,
            fraction: DEFAULT_SUBSAMPLE_FRACTION,
            seeds,
            weight_floor: DEFAULT_WEIGHT_FLOOR,
            fallback: Fallback::EuclidScaled,
            standardize: true,
        }
    }

    pub fn len(&self) -> usize {
        self.clusterers.len() * self.combiners.len() * self.recoveries.len() * self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |message: &str| IoError::ConfigValue {
            key: "grid".into(),
            message: message.into(),
        };
        if self.is_empty() {
            return Err(bad("every axis needs at least one value"));
        }
        if let Some(m) = self.recoveries.iter().find(|m| !m.is_recovery()) {
            return Err(bad(&format!("{m} is not a recovery method")));
        }
        Ok(())
    }

    /// Run configurations in canonical order.
    pub fn configs(&self) -> Vec<RunConfig> {
        let mut out = Vec::with_capacity(self.len());
        for &clusterer in &self.clusterers {
            for &combiner in &self.combiners {
                for &recovery in &self.recoveries {
                    for &seed in &self.seeds {
                        out.push(RunConfig {
                            clusterer,
                            combiner,
                            recovery,
                            iterations: self.iterations,
                            subsample_fraction: self.fraction,
                            seed,
                            weight_floor: self.weight_floor,
                            fallback: self.fallback,
                            standardize: self.standardize,
                        });
                    }
                }
            }
        }
        out.sort_by_key(config_key);
        out
    }
}

fn config_key(c: &RunConfig) -> (String, String, String, u64) {
    (
        c.clusterer.name().into(),
        c.combiner.name(),
        c.recovery.name().into(),
        c.seed,
    )
}

/// Outcome of one run. `combiner` and `recovery` are `None` for a plain
/// single-method baseline; `cpcc` is `None` when the run failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub clusterer: String,
    pub combiner: Option<String>,
    pub recovery: Option<String>,
    pub seed: u64,
    pub cpcc: Option<f64>,
    pub error: Option<String>,
    pub runtime_secs: f64,
}

impl RunResult {
    /// `clusterer/combiner/recovery`, or just the method for a baseline.
    pub fn config_name(&self) -> String {
        match (&self.combiner, &self.recovery) {
            (Some(c), Some(r)) => format!("{}/{}/{}", self.clusterer, c, r),
            _ => self.clusterer.clone(),
        }
    }

    fn axis(&self, axis: GroupBy) -> String {
        match axis {
            GroupBy::Clusterer => self.clusterer.clone(),
            GroupBy::Combiner => self.combiner.clone().unwrap_or_else(|| "none".into()),
            GroupBy::Recovery => self.recovery.clone().unwrap_or_else(|| "none".into()),
            GroupBy::None => self.config_name(),
        }
    }
}

/// CPCC of one linkage method on the whole dataset, no subsampling.
pub fn run_single(
    d: &DataMatrix,
    method: LinkageMethod,
    standardize_features: bool,
) -> Result<RunResult> {
    let start = Instant::now();
    let data = if standardize_features {
        standardize(d)
    } else {
        d.clone()
    };
    let euclid = pairwise_euclidean(&data);
    let dend = agglomerate(&euclid, method)?;
    let score = cpcc(&euclid, &cophenetic(&dend))?;
    Ok(RunResult {
        clusterer: method.name().into(),
        combiner: None,
        recovery: None,
        seed: 0,
        cpcc: Some(score),
        error: None,
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

/// Runs one boosting configuration, turning failure into an error row.
pub fn run_config(d: &DataMatrix, cfg: &RunConfig) -> RunResult {
    let start = Instant::now();
    let outcome = hboost(d, cfg);
    let (cpcc, error) = match outcome {
        Ok(o) => (Some(o.cpcc()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    RunResult {
        clusterer: cfg.clusterer.name().into(),
        combiner: Some(cfg.combiner.name()),
        recovery: Some(cfg.recovery.name().into()),
        seed: cfg.seed,
        cpcc,
        error,
        runtime_secs: start.elapsed().as_secs_f64(),
    }
}

/// Runs every configuration of `g` on up to `jobs` worker threads (all cores
/// when `None`). Results come back in canonical order.
pub fn run_grid(d: &DataMatrix, g: &GridSpec, jobs: Option<usize>) -> Result<Vec<RunResult>> {
    g.validate()?;
    let configs = g.configs();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| IoError::ConfigValue {
            key: "jobs".into(),
            message: e.to_string(),
        })?;
    Ok(pool.install(|| configs.par_iter().map(|cfg| run_config(d, cfg)).collect()))
}

pub fn write_results(results: &[RunResult], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for r in results {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<RunResult>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(IoError::from))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    Clusterer,
    Combiner,
    Recovery,
    /// One row per full configuration, averaged over seeds.
    None,
}

impl FromStr for GroupBy {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clusterer" => Ok(GroupBy::Clusterer),
            "combiner" => Ok(GroupBy::Combiner),
            "recovery" => Ok(GroupBy::Recovery),
            "none" => Ok(GroupBy::None),
            _ => Err(IoError::ConfigValue {
                key: "group-by".into(),
                message: format!("unknown axis {s:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub rank: usize,
    pub name: String,
    /// Successful runs averaged into this row.
    pub runs: usize,
    pub failed: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std_dev: f64,
}

/// Rows sorted by descending mean CPCC, ties broken by name.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub group_by: GroupBy,
    pub rows: Vec<ReportRow>,
}

pub fn rank_report(results: &[RunResult], group_by: GroupBy) -> Result<ReportTable> {
    if results.is_empty() {
        return Err(IoError::ConfigValue {
            key: "results".into(),
            message: "no results to report".into(),
        });
    }
    let mut groups: BTreeMap<String, (Vec<f64>, usize)> = BTreeMap::new();
    for r in results {
        let entry = groups.entry(r.axis(group_by)).or_default();
        match r.cpcc {
            Some(v) => entry.0.push(v),
            None => entry.1 += 1,
        }
    }
    let mut rows: Vec<ReportRow> = groups
        .into_iter()
        .map(|(name, (vals, failed))| {
            let n = vals.len() as f64;
            let (mean, std_dev) = if vals.is_empty() {
                (f64::NAN, f64::NAN)
            } else {
                let mean = vals.iter().sum::<f64>() / n;
                let var = if vals.len() > 1 {
                    vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
                } else {
                    0.0
                };
                (mean, var.sqrt())
            };
            ReportRow {
                rank: 0,
                name,
                runs: vals.len(),
                failed,
                mean,
                std_dev,
            }
        })
        .collect();
    // groups with no successful run sink to the bottom
    rows.sort_by(|a, b| {
        let key = |r: &ReportRow| {
            if r.mean.is_nan() {
                f64::NEG_INFINITY
            } else {
                r.mean
            }
        };
        key(b).total_cmp(&key(a)).then_with(|| a.name.cmp(&b.name))
    });
    for (i, row) in rows.iter_mut().enumerate() {
        row.rank = i + 1;
    }
    Ok(ReportTable { group_by, rows })
}

impl ReportTable {
    pub fn render(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.name.len())
            .max()
            .unwrap_or(4)
            .max(6);
        let mut out = String::new();
        writeln!(
            out,
            "{:>4}  {:<width$}  {:>5}  {:>6}  {:>9}  {:>9}",
            "rank", "config", "runs", "failed", "mean", "std"
        )
        .unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{:>4}  {:<width$}  {:>5}  {:>6}  {:>9.6}  {:>9.6}",
                r.rank, r.name, r.runs, r.failed, r.mean, r.std_dev
            )
            .unwrap();
        }
        out
    }
}

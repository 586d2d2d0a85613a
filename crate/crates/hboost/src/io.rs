use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use hboost_core::{
    CombineOperator, CondensedMatrix, DataMatrix, Dendrogram, Fallback, IterationRecord,
    LinkageMethod, Merge, RunConfig,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: cannot parse {value:?} as a finite number")]
    Parse {
        line: usize,
        column: usize,
        value: String,
    },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("label column {column} out of range for {fields} fields")]
    LabelColumn { column: usize, fields: usize },
    #[error("config key {key:?}: {message}")]
    ConfigValue { key: String, message: String },
    #[error("config line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },
    #[error("dendrogram dump line {line}: {message}")]
    DendrogramDump { line: usize, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] hboost_core::Error),
}

pub type Result<T, E = IoError> = std::result::Result<T, E>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Reads a comma- or whitespace-delimited numeric dataset.
///
/// Blank lines are skipped. `label_column` is excluded from the features
/// and kept as sample labels.
pub fn load_dataset(
    path: impl AsRef<Path>,
    has_header: bool,
    label_column: Option<usize>,
) -> Result<DataMatrix> {
    parse_dataset(&read(path.as_ref())?, has_header, label_column)
}

pub fn parse_dataset(
    text: &str,
    has_header: bool,
    label_column: Option<usize>,
) -> Result<DataMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    if has_header {
        lines.next();
    }
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (idx, line) in lines {
        let line_no = idx + 1;
        let fields = split_fields(line);
        let expected = *width.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(IoError::Ragged {
                line: line_no,
                expected,
                found: fields.len(),
            });
        }
        if let Some(c) = label_column {
            if c >= fields.len() {
                return Err(IoError::LabelColumn {
                    column: c,
                    fields: fields.len(),
                });
            }
        }
        for (col, field) in fields.iter().enumerate() {
            if Some(col) == label_column {
                labels.push(field.to_string());
                continue;
            }
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(IoError::Parse {
                        line: line_no,
                        column: col + 1,
                        value: field.to_string(),
                    })
                }
            }
        }
        rows += 1;
    }
    let n_features = width.unwrap_or(0) - usize::from(label_column.is_some());
    let d = DataMatrix::new(values, rows, n_features)?;
    Ok(if label_column.is_some() {
        d.with_labels(labels)?
    } else {
        d
    })
}

/// Comma-separated rows at 17 significant digits, so values reload exactly.
pub fn format_dataset(d: &DataMatrix) -> String {
    let mut out = String::new();
    for row in d.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn write_dataset(d: &DataMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), format_dataset(d).as_bytes())
}

/// Parses a flat `key = value` run configuration. `#` starts a comment;
/// absent keys keep their defaults.
pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    parse_config_str(&read(path.as_ref())?)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| IoError::ConfigSyntax {
            line: idx + 1,
            message: format!("expected key = value in {raw:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |message: String| IoError::ConfigValue {
            key: key.to_string(),
            message,
        };
        match key {
            "clusterer" => {
                cfg.clusterer = value
                    .parse()
                    .map_err(|e: hboost_core::Error| bad(e.to_string()))?
            }
            "recovery" => {
                let m: LinkageMethod = value
                    .parse()
                    .map_err(|e: hboost_core::Error| bad(e.to_string()))?;
                if !m.is_recovery() {
                    return Err(bad(format!("{m} is not a recovery method")));
                }
                cfg.recovery = m;
            }
            "combiner" => {
                cfg.combiner = value
                    .parse::<CombineOperator>()
                    .map_err(|e| bad(e.to_string()))?
            }
            "iterations" => {
                cfg.iterations = value
                    .parse()
                    .map_err(|_| bad(format!("not an integer: {value:?}")))?;
                if cfg.iterations == 0 {
                    return Err(bad("must be positive".into()));
                }
            }
            "subsample_fraction" => {
                let f: f64 = value
                    .parse()
                    .map_err(|_| bad(format!("not a number: {value:?}")))?;
                if !(f > 0.0 && f <= 1.0) {
                    return Err(bad(format!("must be in (0, 1], got {f}")));
                }
                cfg.subsample_fraction = f;
            }
            "seed" => {
                cfg.seed = value
                    .parse()
                    .map_err(|_| bad(format!("not a u64: {value:?}")))?
            }
            "weight_floor" => {
                let f: f64 = value
                    .parse()
                    .map_err(|_| bad(format!("not a number: {value:?}")))?;
                if !(f > 0.0 && f.is_finite()) {
                    return Err(bad(format!("must be positive, got {f}")));
                }
                cfg.weight_floor = f;
            }
            "fallback" => {
                cfg.fallback = value.parse::<Fallback>().map_err(|e| bad(e.to_string()))?
            }
            "standardize" => {
                cfg.standardize = match value.to_ascii_lowercase().as_str() {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(bad(format!("not a boolean: {value:?}"))),
                }
            }
            _ => return Err(bad("unknown key".into())),
        }
    }
    Ok(cfg)
}

/// One merge per line: `left right height size`.
pub fn format_dendrogram(d: &Dendrogram) -> String {
    let mut out = String::new();
    for m in d.merges() {
        writeln!(out, "{} {} {:.6} {}", m.left, m.right, m.height, m.size).unwrap();
    }
    out
}

pub fn parse_dendrogram(text: &str) -> Result<Dendrogram> {
    let mut merges = Vec::new();
    for (idx, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let bad = |message: String| IoError::DendrogramDump {
            line: idx + 1,
            message,
        };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(bad(format!("expected 4 fields, found {}", f.len())));
        }
        let int = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad(format!("bad integer {s:?}")))
        };
        let height = f[2]
            .parse::<f64>()
            .map_err(|_| bad(format!("bad height {:?}", f[2])))?;
        merges.push(Merge {
            left: int(f[0])?,
            right: int(f[1])?,
            height,
            size: int(f[3])?,
        });
    }
    Ok(Dendrogram::from_merges(merges.len() + 1, merges)?)
}

pub fn write_dendrogram(d: &Dendrogram, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), format_dendrogram(d).as_bytes())
}

pub fn write_condensed(m: &CondensedMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &m.to_le_bytes())
}

pub fn read_condensed(path: impl AsRef<Path>) -> Result<CondensedMatrix> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    Ok(CondensedMatrix::from_le_bytes(&bytes)?)
}

/// Line-delimited JSON record of one boosting iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLine {
    pub iteration: usize,
    pub subsample: Vec<usize>,
    pub cpcc: f64,
    pub weight_min: f64,
    pub weight_mean: f64,
    pub weight_max: f64,
}

impl From<&IterationRecord> for TraceLine {
    fn from(r: &IterationRecord) -> Self {
        TraceLine {
            iteration: r.iteration,
            subsample: r.subsample.clone(),
            cpcc: r.cpcc,
            weight_min: r.weight_min,
            weight_mean: r.weight_mean,
            weight_max: r.weight_max,
        }
    }
}

pub fn write_trace(records: &[IterationRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    for r in records {
        serde_json::to_writer(&mut buf, &TraceLine::from(r))?;
        buf.write_all(b"\n").expect("writing to a Vec");
    }
    write_bytes(path, &buf)
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<Vec<TraceLine>> {
    read(path.as_ref())?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(IoError::from))
        .collect()
}

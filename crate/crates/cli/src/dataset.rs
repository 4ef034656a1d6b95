//! CSV ingestion.
//!
//! One observation per row. Real vectors may have any number of columns
//! (uniform across rows); binary, categorical and count data have exactly
//! one column. Parsing is strict: no imputation, no skipped rows.

use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use twosample::{Family, Observation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DataKind {
    RealVector,
    Binary,
    Categorical,
    Count,
}

impl fmt::Display for DataKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataKind::RealVector => "real-vector",
            DataKind::Binary => "binary",
            DataKind::Categorical => "categorical",
            DataKind::Count => "count",
        })
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: cannot read: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: line {line}: ragged row with {found} fields, expected {expected}")]
    Ragged {
        path: PathBuf,
        line: u64,
        found: usize,
        expected: usize,
    },
    #[error("{path}: no data rows")]
    Empty { path: PathBuf },
}

/// A parsed input file.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetFile {
    pub path: PathBuf,
    pub kind: DataKind,
    pub observations: Vec<Observation>,
    /// Columns for real vectors, `max + 1` for categorical data, 1 otherwise.
    pub dimension: usize,
}

impl DatasetFile {
    pub fn rows(&self) -> usize {
        self.observations.len()
    }
}

/// Reads and parses `path`.
pub fn load_csv(path: &Path, kind: DataKind, has_header: bool) -> Result<DatasetFile, LoadError> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    parse_csv(&text, path, kind, has_header)
}

/// Parses CSV text; `path` only labels errors.
pub fn parse_csv(
    text: &str,
    path: &Path,
    kind: DataKind,
    has_header: bool,
) -> Result<DatasetFile, LoadError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let parse_err = |line: u64, message: String| LoadError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut observations = Vec::new();
    let mut width: Option<usize> = None;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(LoadError::Ragged {
                path: path.to_path_buf(),
                line,
                found: record.len(),
                expected,
            });
        }
        if kind != DataKind::RealVector && record.len() != 1 {
            return Err(parse_err(
                line,
                format!("{kind} data takes one column, found {}", record.len()),
            ));
        }
        let obs = match kind {
            DataKind::RealVector => {
                let mut values = Vec::with_capacity(record.len());
                for field in record.iter() {
                    let v: f64 = field
                        .parse()
                        .map_err(|_| parse_err(line, format!("not a number: {field:?}")))?;
                    if !v.is_finite() {
                        return Err(parse_err(line, format!("non-finite value {field:?}")));
                    }
                    values.push(v);
                }
                Observation::Real(values)
            }
            DataKind::Binary => match &record[0] {
                "0" => Observation::Category(0),
                "1" => Observation::Category(1),
                other => {
                    return Err(parse_err(
                        line,
                        format!("binary value must be 0 or 1, got {other:?}"),
                    ))
                }
            },
            DataKind::Categorical => {
                let field = &record[0];
                let c: usize = field.parse().map_err(|_| {
                    parse_err(
                        line,
                        format!("category must be a non-negative integer, got {field:?}"),
                    )
                })?;
                Observation::Category(c)
            }
            DataKind::Count => {
                let field = &record[0];
                if field.starts_with('-') {
                    return Err(parse_err(line, format!("negative count {field:?}")));
                }
                let c: u64 = field.parse().map_err(|_| {
                    parse_err(
                        line,
                        format!("count must be a non-negative integer, got {field:?}"),
                    )
                })?;
                Observation::Count(c)
            }
        };
        observations.push(obs);
    }

    if observations.is_empty() {
        return Err(LoadError::Empty {
            path: path.to_path_buf(),
        });
    }
    let dimension = match kind {
        DataKind::RealVector => width.unwrap_or(0),
        DataKind::Categorical => observations
            .iter()
            .map(|o| match o {
                Observation::Category(c) => c + 1,
                _ => 0,
            })
            .max()
            .unwrap_or(0),
        DataKind::Binary | DataKind::Count => 1,
    };
    Ok(DatasetFile {
        path: path.to_path_buf(),
        kind,
        observations,
        dimension,
    })
}

/// The observation kind a family consumes.
pub fn kind_for(family_name: &str) -> Option<DataKind> {
    match family_name {
        "gaussian" => Some(DataKind::RealVector),
        "bernoulli" => Some(DataKind::Binary),
        "multinomial" => Some(DataKind::Categorical),
        "poisson" => Some(DataKind::Count),
        _ => None,
    }
}

/// Writes observations as CSV with a single header line. Reals use Rust's
/// shortest round-trip formatting, so reloading gives identical values.
pub fn write_csv(path: &Path, observations: &[Observation]) -> std::io::Result<()> {
    std::fs::write(path, to_csv(observations))
}

pub fn to_csv(observations: &[Observation]) -> String {
    let mut out = String::new();
    let width = match observations.first() {
        Some(Observation::Real(x)) => x.len(),
        _ => 1,
    };
    if width == 1 && !matches!(observations.first(), Some(Observation::Real(_))) {
        out.push_str("x\n");
    } else {
        let names: Vec<String> = (0..width).map(|i| format!("x{i}")).collect();
        out.push_str(&names.join(","));
        out.push('\n');
    }
    for obs in observations {
        match obs {
            Observation::Real(x) => {
                let fields: Vec<String> = x.iter().map(|v| v.to_string()).collect();
                out.push_str(&fields.join(","));
            }
            Observation::Category(c) => out.push_str(&c.to_string()),
            Observation::Count(c) => out.push_str(&c.to_string()),
        }
        out.push('\n');
    }
    out
}

/// Family implied by a data kind and its arity.
pub fn family_for(kind: DataKind, dimension: usize) -> Family {
    match kind {
        DataKind::RealVector => Family::Gaussian { dim: dimension },
        DataKind::Binary => Family::Bernoulli,
        DataKind::Categorical => Family::Multinomial {
            categories: dimension,
        },
        DataKind::Count => Family::Poisson,
    }
}

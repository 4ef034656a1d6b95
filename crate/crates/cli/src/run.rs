//! Test orchestration: load, choose a prior, dispatch, report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;
use twosample::{
    build_tree, canonical_order, default_prior, log_bayes_factor_dpm, parametric_test,
    select_backend, Backend, Decision, Family, Observation, Prior, TestResult,
};

use crate::dataset::{family_for, load_csv, DataKind, DatasetFile, LoadError};
use crate::report::{InputRecord, Inputs, PriorSource, ReportRecord, TOOL_NAME, TOOL_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Parametric,
    Dpm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyArg {
    Gaussian,
    Bernoulli,
    Multinomial,
    Poisson,
}

impl FamilyArg {
    pub fn data_kind(self) -> DataKind {
        match self {
            FamilyArg::Gaussian => DataKind::RealVector,
            FamilyArg::Bernoulli => DataKind::Binary,
            FamilyArg::Multinomial => DataKind::Categorical,
            FamilyArg::Poisson => DataKind::Count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BackendArg {
    Exact,
    Bhc,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PriorArg {
    Default,
    File,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestConfig {
    pub x_path: PathBuf,
    pub y_path: PathBuf,
    pub method: MethodArg,
    pub family: FamilyArg,
    pub backend: BackendArg,
    pub alpha: f64,
    pub prior: PriorArg,
    pub prior_file: Option<PathBuf>,
    pub log_prior_odds: f64,
    pub has_header: bool,
    /// Where to write BHC merge traces, when the BHC backend runs.
    pub bhc_trace: Option<PathBuf>,
}

impl TestConfig {
    pub fn new(
        x_path: impl Into<PathBuf>,
        y_path: impl Into<PathBuf>,
        method: MethodArg,
        family: FamilyArg,
    ) -> Self {
        Self {
            x_path: x_path.into(),
            y_path: y_path.into(),
            method,
            family,
            backend: BackendArg::Auto,
            alpha: twosample::DEFAULT_ALPHA,
            prior: PriorArg::Default,
            prior_file: None,
            log_prior_odds: 0.0,
            has_header: true,
            bhc_trace: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Model(#[from] twosample::Error),
    #[error("{0}")]
    Usage(String),
    #[error("dimension mismatch: {x} has dimension {dx}, {y} has dimension {dy}")]
    Dimension {
        x: PathBuf,
        dx: usize,
        y: PathBuf,
        dy: usize,
    },
    #[error("{path}: {message}")]
    PriorFile { path: PathBuf, message: String },
    #[error("{path}: cannot write: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn read_prior(path: &Path) -> Result<Prior, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::PriorFile {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| RunError::PriorFile {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn check_flags(cfg: &TestConfig) -> Result<(), RunError> {
    if !cfg.log_prior_odds.is_finite() {
        return Err(RunError::Usage(format!(
            "--log-prior-odds must be finite; got {}",
            cfg.log_prior_odds
        )));
    }
    match (cfg.prior, &cfg.prior_file) {
        (PriorArg::File, None) => {
            return Err(RunError::Usage("--prior file requires --prior-file".into()))
        }
        (PriorArg::Default, Some(_)) => {
            return Err(RunError::Usage("--prior-file requires --prior file".into()))
        }
        _ => {}
    }
    if cfg.method == MethodArg::Parametric {
        if cfg.backend != BackendArg::Auto {
            return Err(RunError::Usage(
                "--backend applies only to --method dpm".into(),
            ));
        }
        if cfg.bhc_trace.is_some() {
            return Err(RunError::Usage(
                "--bhc-trace applies only to --method dpm".into(),
            ));
        }
    }
    Ok(())
}

fn family_of(
    cfg: &TestConfig,
    x: &DatasetFile,
    y: &DatasetFile,
    file_prior: Option<&Prior>,
) -> Result<Family, RunError> {
    let kind = cfg.family.data_kind();
    match kind {
        DataKind::RealVector if x.dimension != y.dimension => Err(RunError::Dimension {
            x: x.path.clone(),
            dx: x.dimension,
            y: y.path.clone(),
            dy: y.dimension,
        }),
        // Arity is the larger of the two observed arities unless a prior
        // fixes it.
        DataKind::Categorical => Ok(match file_prior {
            Some(p) => p.family(),
            None => family_for(kind, x.dimension.max(y.dimension)),
        }),
        _ => Ok(family_for(kind, x.dimension)),
    }
}

fn write_traces(
    path: &Path,
    x: &[Observation],
    y: &[Observation],
    alpha: f64,
    prior: &Prior,
) -> Result<(), RunError> {
    let pooled: Vec<Observation> = x.iter().chain(y).cloned().collect();
    let mut out = String::new();
    for (label, data) in [("x", x), ("y", y), ("pooled", &pooled[..])] {
        let tree = build_tree(&canonical_order(data), alpha, prior)?;
        out.push_str(&format!("## {label} n={}\n", data.len()));
        out.push_str(&tree.merge_trace());
    }
    std::fs::write(path, out).map_err(|source| RunError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs one test end to end.
pub fn run_test(cfg: &TestConfig) -> Result<ReportRecord, RunError> {
    let start = Instant::now();
    check_flags(cfg)?;
    let kind = cfg.family.data_kind();
    let x = load_csv(&cfg.x_path, kind, cfg.has_header)?;
    let y = load_csv(&cfg.y_path, kind, cfg.has_header)?;

    let file_prior = match (&cfg.prior, &cfg.prior_file) {
        (PriorArg::File, Some(p)) => Some(read_prior(p)?),
        _ => None,
    };
    let family = family_of(cfg, &x, &y, file_prior.as_ref())?;
    let (prior, prior_source) = match file_prior {
        Some(p) => {
            if p.family() != family {
                return Err(RunError::PriorFile {
                    path: cfg.prior_file.clone().unwrap_or_default(),
                    message: format!("prior is for {}, data are {}", p.family(), family),
                });
            }
            (p, PriorSource::File)
        }
        None => {
            let pooled: Vec<Observation> = x
                .observations
                .iter()
                .chain(&y.observations)
                .cloned()
                .collect();
            (default_prior(&pooled, family)?, PriorSource::Default)
        }
    };

    let (result, backend): (TestResult, Option<Backend>) = match cfg.method {
        MethodArg::Parametric => (
            parametric_test(&x.observations, &y.observations, &prior)?,
            None,
        ),
        MethodArg::Dpm => {
            let backend = match cfg.backend {
                BackendArg::Exact => Backend::Exact,
                BackendArg::Bhc => Backend::Bhc,
                BackendArg::Auto => select_backend(x.rows(), y.rows()),
            };
            let result =
                log_bayes_factor_dpm(&x.observations, &y.observations, cfg.alpha, &prior, backend)?;
            if let Some(path) = &cfg.bhc_trace {
                if backend == Backend::Bhc {
                    write_traces(path, &x.observations, &y.observations, cfg.alpha, &prior)?;
                }
            }
            (result, Some(backend))
        }
    };

    let log_posterior_odds = result.log_bayes_factor + cfg.log_prior_odds;
    let decision = if log_posterior_odds > 0.0 {
        Decision::H1Different
    } else {
        Decision::H0Same
    };
    let dimension = match family {
        Family::Gaussian { dim } => dim,
        Family::Multinomial { categories } => categories,
        Family::Bernoulli | Family::Poisson => 1,
    };
    Ok(ReportRecord {
        tool: TOOL_NAME.into(),
        version: TOOL_VERSION.into(),
        method: result.method,
        backend,
        approximate: result.approximate,
        family,
        dimension,
        log_bayes_factor: result.log_bayes_factor,
        log_prior_odds: cfg.log_prior_odds,
        log_posterior_odds,
        decision,
        m1: result.m1,
        m2: result.m2,
        alpha: result.alpha,
        prior,
        prior_source,
        inputs: Inputs {
            x: InputRecord {
                path: x.path,
                rows: x.observations.len(),
            },
            y: InputRecord {
                path: y.path,
                rows: y.observations.len(),
            },
        },
        duration_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Exit code for a decision: 0 for H0, 1 for H1.
pub fn exit_code(decision: Decision) -> i32 {
    match decision {
        Decision::H0Same => 0,
        Decision::H1Different => 1,
    }
}

pub const EXIT_ERROR: i32 = 2;

//! The JSON record written for each test run.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use twosample::{Backend, Decision, Family, Method, Prior};

pub const TOOL_NAME: &str = "twosample";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorSource {
    Default,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: PathBuf,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub x: InputRecord,
    pub y: InputRecord,
}

/// One test run. `decision` is taken on the posterior log odds
/// `log_bayes_factor + log_prior_odds`, so it equals the Bayes-factor
/// decision when the prior odds are even.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRecord {
    pub tool: String,
    pub version: String,
    pub method: Method,
    pub backend: Option<Backend>,
    pub approximate: bool,
    pub family: Family,
    pub dimension: usize,
    pub log_bayes_factor: f64,
    pub log_prior_odds: f64,
    pub log_posterior_odds: f64,
    pub decision: Decision,
    pub m1: usize,
    pub m2: usize,
    pub alpha: Option<f64>,
    pub prior: Prior,
    pub prior_source: PriorSource,
    pub inputs: Inputs,
    pub duration_seconds: f64,
}

impl ReportRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        format!(
            "{} ({}{}): log BF = {:.6}, log posterior odds = {:.6} -> {} [m1={}, m2={}]",
            self.method,
            self.family,
            if self.approximate {
                ", approximate"
            } else {
                ""
            },
            self.log_bayes_factor,
            self.log_posterior_odds,
            self.decision,
            self.m1,
            self.m2
        )
    }
}

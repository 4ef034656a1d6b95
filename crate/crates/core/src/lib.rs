//! Bayesian two-sample tests.
//!
//! Two samples `X` and `Y` are compared through the Bayes factor
//!
//! ```text
//! χ = p(X) p(Y) / p(X ∪ Y)
//! ```
//!
//! of "drawn from different distributions" against "drawn from the same
//! distribution"; `χ > 1` accepts the former. The evidences come either
//! from a conjugate exponential-family model ([`parametric_test`]) or from
//! a Dirichlet process mixture of such models ([`np_test`]), evaluated
//! exactly by partition enumeration ([`dpm_exact`]) or approximately by
//! Bayesian hierarchical clustering ([`bhc`]).
//!
//! ```
//! use twosample::{log_bayes_factor_parametric, Observation, Prior};
//!
//! let x = vec![Observation::Category(1); 4];
//! let y = vec![Observation::Category(0); 4];
//! let prior = Prior::beta(1.0, 1.0).unwrap();
//! let log_bf = log_bayes_factor_parametric(&x, &y, &prior).unwrap();
//! assert!((log_bf - 25.2f64.ln()).abs() < 1e-10);
//! ```

pub mod bhc;
pub mod dpm_exact;
pub mod error;
pub mod exp_family;
pub mod math;

pub use bhc::{build_tree, log_dpm_marginal_bhc, BhcNode, BhcTree};
pub use dpm_exact::{
    enumerate_partitions, log_crp_prior, log_dpm_marginal_exact, Partition, MAX_EXACT_POINTS,
};
pub use error::{Error, Result};
pub use exp_family::{
    canonical_order, default_prior, log_marginal, suff_stats, Family, Observation, Prior,
    SufficientStats,
};
pub use np_test::{log_bayes_factor_dpm, log_dpm_marginal, select_backend, Backend, DEFAULT_ALPHA};
pub use parametric_test::{
    decide, log_bayes_factor_parametric, parametric_test, Decision, Method, TestResult,
};

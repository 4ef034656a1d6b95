//! Conjugate exponential-family models and their closed-form evidence.
//!
//! Every family here has densities of the form `f(x) g(θ) exp{θᵀu(x)}` and a
//! conjugate prior `h(η, ν) g(θ)^η exp{θᵀν}`. The evidence of a dataset `D`
//! with `n` points is then
//!
//! ```text
//! log p(D) = Σᵢ log f(xᵢ) + log h(η, ν) − log h(η + n, ν + u(D))
//! ```
//!
//! Priors are stored with their usual parameters instead of the abstract
//! `(η, ν)` pair:
//!
//! | family      | prior             | `η`, `ν` correspond to                       |
//! |-------------|-------------------|----------------------------------------------|
//! | Gaussian    | Normal-inv-Wishart| `κ₀` (and `ν₀`) count pseudo-points; `κ₀μ₀`, `Λ₀ + κ₀μ₀μ₀ᵀ` |
//! | Bernoulli   | Beta(a, b)        | `η = a + b`, `ν = a`                          |
//! | Multinomial | Dirichlet(α)      | `η = Σα`, `ν = α`                             |
//! | Poisson     | Gamma(a, b)       | `η = b` (rate), `ν = a` (shape)               |
//!
//! Sufficient statistics `u(x)` are, per observation:
//!
//! * Gaussian: `x` followed by the row-major entries of `xxᵀ`;
//! * Bernoulli: `x ∈ {0, 1}`;
//! * Multinomial: the one-hot indicator of the category;
//! * Poisson: `x` and `log x!` (the second entry carries `Σ log f(xᵢ)`).

use std::cmp::Ordering;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{ln_gamma, ln_multigamma};

/// Model family, including the arity that fixes the statistic length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Gaussian { dim: usize },
    Bernoulli,
    Multinomial { categories: usize },
    Poisson,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gaussian { dim } => write!(f, "gaussian(d={dim})"),
            Family::Bernoulli => f.write_str("bernoulli"),
            Family::Multinomial { categories } => write!(f, "multinomial(K={categories})"),
            Family::Poisson => f.write_str("poisson"),
        }
    }
}

impl Family {
    /// Number of accumulators `K` in `u(x)`.
    pub fn stat_len(&self) -> usize {
        match *self {
            Family::Gaussian { dim } => dim + dim * dim,
            Family::Bernoulli => 1,
            Family::Multinomial { categories } => categories,
            Family::Poisson => 2,
        }
    }

    /// Short tag without arity, e.g. `"gaussian"`.
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gaussian { .. } => "gaussian",
            Family::Bernoulli => "bernoulli",
            Family::Multinomial { .. } => "multinomial",
            Family::Poisson => "poisson",
        }
    }
}

/// A single data point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Observation {
    /// Real vector, for the Gaussian family.
    Real(Vec<f64>),
    /// Category index; `{0, 1}` for Bernoulli, `{0..K}` for Multinomial.
    Category(usize),
    /// Non-negative count, for Poisson.
    Count(u64),
}

impl Observation {
    /// Total order used to put datasets in canonical order. Reals compare
    /// lexicographically with `f64::total_cmp`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        use Observation::*;
        match (self, other) {
            (Real(a), Real(b)) => {
                for (x, y) in a.iter().zip(b) {
                    match x.total_cmp(y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                a.len().cmp(&b.len())
            }
            (Category(a), Category(b)) => a.cmp(b),
            (Count(a), Count(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Observation::Real(_) => 0,
            Observation::Category(_) => 1,
            Observation::Count(_) => 2,
        }
    }
}

/// Sorted copy of `data`. Every computation that must not depend on row
/// order runs on this.
pub fn canonical_order(data: &[Observation]) -> Vec<Observation> {
    let mut out = data.to_vec();
    out.sort_by(Observation::canonical_cmp);
    out
}

/// Checks that `obs` belongs to `family`.
pub fn validate_observation(index: usize, obs: &Observation, family: Family) -> Result<()> {
    let mismatch = |reason: String| Error::ObservationMismatch {
        index,
        family,
        reason,
    };
    match (family, obs) {
        (Family::Gaussian { dim }, Observation::Real(x)) => {
            if x.len() != dim {
                return Err(mismatch(format!("dimension {} != {dim}", x.len())));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            Ok(())
        }
        (Family::Bernoulli, Observation::Category(c)) => {
            if *c > 1 {
                return Err(mismatch(format!("binary value {c} not in {{0, 1}}")));
            }
            Ok(())
        }
        (Family::Multinomial { categories }, Observation::Category(c)) => {
            if *c >= categories {
                return Err(mismatch(format!("category {c} >= {categories}")));
            }
            Ok(())
        }
        (Family::Poisson, Observation::Count(_)) => Ok(()),
        (_, other) => Err(mismatch(format!("unexpected observation kind {other:?}"))),
    }
}

/// Additive accumulator `(n, u(D))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficientStats {
    family: Family,
    n: u64,
    u: Vec<f64>,
}

impl SufficientStats {
    /// The identity element: no observations.
    pub fn empty(family: Family) -> Self {
        Self {
            family,
            n: 0,
            u: vec![0.0; family.stat_len()],
        }
    }

    /// Statistics of a single point.
    pub fn of_observation(obs: &Observation, family: Family) -> Result<Self> {
        validate_observation(0, obs, family)?;
        let mut stats = Self::empty(family);
        stats.accumulate(obs);
        Ok(stats)
    }

    fn accumulate(&mut self, obs: &Observation) {
        self.n += 1;
        match (self.family, obs) {
            (Family::Gaussian { dim }, Observation::Real(x)) => {
                let (first, second) = self.u.split_at_mut(dim);
                for (acc, v) in first.iter_mut().zip(x) {
                    *acc += v;
                }
                for i in 0..dim {
                    for j in 0..dim {
                        second[i * dim + j] += x[i] * x[j];
                    }
                }
            }
            (Family::Bernoulli, Observation::Category(c)) => self.u[0] += *c as f64,
            (Family::Multinomial { .. }, Observation::Category(c)) => self.u[*c] += 1.0,
            (Family::Poisson, Observation::Count(c)) => {
                self.u[0] += *c as f64;
                self.u[1] += ln_gamma(*c as f64 + 1.0);
            }
            _ => unreachable!("observation validated against family"),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Componentwise sum. Commutative; `s.combine(&empty) == s`.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch {
                left: self.family,
                right: other.family,
            });
        }
        if other.n == 0 {
            return Ok(self.clone());
        }
        if self.n == 0 {
            return Ok(other.clone());
        }
        Ok(Self {
            family: self.family,
            n: self.n + other.n,
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
        })
    }
}

/// Accumulates `u(D)` over `data`.
///
/// The data are summed in canonical order, so any permutation of `data`
/// gives bit-identical statistics.
pub fn suff_stats(data: &[Observation], family: Family) -> Result<SufficientStats> {
    for (i, obs) in data.iter().enumerate() {
        validate_observation(i, obs, family)?;
    }
    let mut ordered: Vec<&Observation> = data.iter().collect();
    ordered.sort_by(|a, b| a.canonical_cmp(b));
    let mut stats = SufficientStats::empty(family);
    for obs in ordered {
        stats.accumulate(obs);
    }
    Ok(stats)
}

/// Normal-inverse-Wishart prior: `Σ ~ IW(Λ₀, ν₀)`, `μ | Σ ~ N(μ₀, Σ/κ₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NiwPrior {
    mu0: Vec<f64>,
    kappa0: f64,
    nu0: f64,
    /// Row-major `d × d`.
    lambda0: Vec<f64>,
    log_det_lambda0: f64,
}

impl NiwPrior {
    pub fn new(mu0: Vec<f64>, kappa0: f64, nu0: f64, lambda0: Vec<Vec<f64>>) -> Result<Self> {
        let d = mu0.len();
        if d == 0 {
            return Err(Error::InvalidPrior(
                "NIW mean must have dimension >= 1".into(),
            ));
        }
        if mu0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPrior("NIW mu0 must be finite".into()));
        }
        if !kappa0.is_finite() || kappa0 <= 0.0 {
            return Err(Error::InvalidPrior(format!(
                "NIW kappa0 must be finite and > 0; got {kappa0}"
            )));
        }
        if !nu0.is_finite() || nu0 <= d as f64 - 1.0 {
            return Err(Error::InvalidPrior(format!(
                "NIW nu0 must be finite and > d - 1 = {}; got {nu0}",
                d - 1
            )));
        }
        if lambda0.len() != d || lambda0.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidPrior(format!("NIW lambda0 must be {d}x{d}")));
        }
        let flat: Vec<f64> = lambda0.into_iter().flatten().collect();
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPrior("NIW lambda0 must be finite".into()));
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let (a, b) = (flat[i * d + j], flat[j * d + i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidPrior("NIW lambda0 must be symmetric".into()));
                }
            }
        }
        let log_det_lambda0 = log_det_spd(&flat, d)
            .ok_or_else(|| Error::InvalidPrior("NIW lambda0 must be positive definite".into()))?;
        Ok(Self {
            mu0,
            kappa0,
            nu0,
            lambda0: flat,
            log_det_lambda0,
        })
    }

    pub fn dim(&self) -> usize {
        self.mu0.len()
    }

    pub fn mu0(&self) -> &[f64] {
        &self.mu0
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    pub fn lambda0(&self) -> Vec<Vec<f64>> {
        self.lambda0
            .chunks(self.dim())
            .map(|r| r.to_vec())
            .collect()
    }

    fn log_marginal(&self, stats: &SufficientStats) -> Result<f64> {
        let d = self.dim();
        let n = stats.n as f64;
        let (sum, outer) = stats.u.split_at(d);
        let kappa_n = self.kappa0 + n;
        let nu_n = self.nu0 + n;

        // Λₙ = Λ₀ + S + κ₀n/κₙ (x̄ − μ₀)(x̄ − μ₀)ᵀ with S the centred scatter.
        let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
        let shrink = self.kappa0 * n / kappa_n;
        let mut lambda_n = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let scatter = outer[i * d + j] - n * mean[i] * mean[j];
                let dev = (mean[i] - self.mu0[i]) * (mean[j] - self.mu0[j]);
                lambda_n[i * d + j] = self.lambda0[i * d + j] + scatter + shrink * dev;
            }
        }
        let log_det_n = log_det_spd(&lambda_n, d).ok_or_else(|| {
            Error::Numerical(format!(
                "NIW posterior scale matrix is not positive definite (n = {})",
                stats.n
            ))
        })?;

        let d_f = d as f64;
        Ok(
            -0.5 * n * d_f * std::f64::consts::PI.ln() + ln_multigamma(nu_n / 2.0, d)
                - ln_multigamma(self.nu0 / 2.0, d)
                + 0.5 * self.nu0 * self.log_det_lambda0
                - 0.5 * nu_n * log_det_n
                + 0.5 * d_f * (self.kappa0.ln() - kappa_n.ln()),
        )
    }
}

fn log_det_spd(flat: &[f64], d: usize) -> Option<f64> {
    let m = DMatrix::from_row_slice(d, d, flat);
    let chol = m.cholesky()?;
    let l = chol.l_dirty();
    let mut out = 0.0;
    for i in 0..d {
        let v = l[(i, i)];
        if !(v.is_finite() && v > 0.0) {
            return None;
        }
        out += 2.0 * v.ln();
    }
    Some(out)
}

/// Conjugate prior with family-native hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PriorRecord", into = "PriorRecord")]
pub enum Prior {
    Gaussian(NiwPrior),
    Bernoulli { a: f64, b: f64 },
    Multinomial { alpha: Vec<f64> },
    Poisson { shape: f64, rate: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidPrior(format!(
            "{name} must be finite and > 0; got {v}"
        )))
    }
}

impl Prior {
    pub fn beta(a: f64, b: f64) -> Result<Self> {
        positive("beta a", a)?;
        positive("beta b", b)?;
        Ok(Prior::Bernoulli { a, b })
    }

    pub fn dirichlet(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidPrior("dirichlet alpha is empty".into()));
        }
        for &a in &alpha {
            positive("dirichlet alpha", a)?;
        }
        Ok(Prior::Multinomial { alpha })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        positive("gamma shape", shape)?;
        positive("gamma rate", rate)?;
        Ok(Prior::Poisson { shape, rate })
    }

    pub fn niw(mu0: Vec<f64>, kappa0: f64, nu0: f64, lambda0: Vec<Vec<f64>>) -> Result<Self> {
        NiwPrior::new(mu0, kappa0, nu0, lambda0).map(Prior::Gaussian)
    }

    pub fn family(&self) -> Family {
        match self {
            Prior::Gaussian(p) => Family::Gaussian { dim: p.dim() },
            Prior::Bernoulli { .. } => Family::Bernoulli,
            Prior::Multinomial { alpha } => Family::Multinomial {
                categories: alpha.len(),
            },
            Prior::Poisson { .. } => Family::Poisson,
        }
    }
}

/// Serialized form of [`Prior`], keyed by family-native parameter names.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum PriorRecord {
    Gaussian {
        mu0: Vec<f64>,
        kappa0: f64,
        nu0: f64,
        lambda0: Vec<Vec<f64>>,
    },
    Bernoulli {
        a: f64,
        b: f64,
    },
    Multinomial {
        alpha: Vec<f64>,
    },
    Poisson {
        shape: f64,
        rate: f64,
    },
}

impl TryFrom<PriorRecord> for Prior {
    type Error = Error;

    fn try_from(r: PriorRecord) -> Result<Self> {
        match r {
            PriorRecord::Gaussian {
                mu0,
                kappa0,
                nu0,
                lambda0,
            } => Prior::niw(mu0, kappa0, nu0, lambda0),
            PriorRecord::Bernoulli { a, b } => Prior::beta(a, b),
            PriorRecord::Multinomial { alpha } => Prior::dirichlet(alpha),
            PriorRecord::Poisson { shape, rate } => Prior::gamma(shape, rate),
        }
    }
}

impl From<Prior> for PriorRecord {
    fn from(p: Prior) -> Self {
        match p {
            Prior::Gaussian(niw) => PriorRecord::Gaussian {
                lambda0: niw.lambda0(),
                mu0: niw.mu0,
                kappa0: niw.kappa0,
                nu0: niw.nu0,
            },
            Prior::Bernoulli { a, b } => PriorRecord::Bernoulli { a, b },
            Prior::Multinomial { alpha } => PriorRecord::Multinomial { alpha },
            Prior::Poisson { shape, rate } => PriorRecord::Poisson { shape, rate },
        }
    }
}

/// Log evidence `log ∫ Πᵢ p(xᵢ|θ) p(θ|prior) dθ` in closed form.
///
/// Depends on the data only through `stats`; empty statistics give exactly 0.
pub fn log_marginal(stats: &SufficientStats, prior: &Prior) -> Result<f64> {
    if stats.family != prior.family() {
        return Err(Error::FamilyMismatch {
            left: stats.family,
            right: prior.family(),
        });
    }
    if stats.n == 0 {
        return Ok(0.0);
    }
    let n = stats.n as f64;
    let u = &stats.u;
    match prior {
        Prior::Gaussian(niw) => niw.log_marginal(stats),
        Prior::Bernoulli { a, b } => {
            let ones = u[0];
            let zeros = n - ones;
            Ok(ln_beta(a + ones, b + zeros) - ln_beta(*a, *b))
        }
        Prior::Multinomial { alpha } => {
            let total: f64 = alpha.iter().sum();
            let mut out = ln_gamma(total) - ln_gamma(total + n);
            for (a, c) in alpha.iter().zip(u) {
                if *c > 0.0 {
                    out += ln_gamma(a + c) - ln_gamma(*a);
                }
            }
            Ok(out)
        }
        Prior::Poisson { shape, rate } => {
            let (sum, log_fact) = (u[0], u[1]);
            Ok(shape * rate.ln() - ln_gamma(*shape) + ln_gamma(shape + sum)
                - (shape + sum) * (rate + n).ln()
                - log_fact)
        }
    }
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Relative ridge added to a data-driven NIW scale matrix.
pub const NIW_RIDGE: f64 = 1e-6;

/// Deterministic, weakly-informative prior derived from pooled data.
///
/// Gaussian: `μ₀` = pooled mean, `κ₀ = 1`, `ν₀ = d + 2`, `Λ₀` = pooled
/// covariance (divisor `n`) plus `1e-6 · trace/d · I`; when the trace is
/// zero the ridge falls back to `1e-6 · I`. Other families get flat priors:
/// Beta(1, 1), Dirichlet(1, …, 1), Gamma(1, 1).
pub fn default_prior(data: &[Observation], family: Family) -> Result<Prior> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    for (i, obs) in data.iter().enumerate() {
        validate_observation(i, obs, family)?;
    }
    match family {
        Family::Gaussian { dim } => {
            let ordered = canonical_order(data);
            let rows: Vec<&[f64]> = ordered
                .iter()
                .map(|o| match o {
                    Observation::Real(x) => x.as_slice(),
                    _ => unreachable!("validated as real vectors"),
                })
                .collect();
            niw_from_rows(&rows, dim)
        }
        Family::Bernoulli => Prior::beta(1.0, 1.0),
        Family::Multinomial { categories } => Prior::dirichlet(vec![1.0; categories]),
        Family::Poisson => Prior::gamma(1.0, 1.0),
    }
}

fn niw_from_rows(rows: &[&[f64]], dim: usize) -> Result<Prior> {
    let n = rows.len() as f64;
    let mut mean = vec![0.0; dim];
    for row in rows {
        for (m, v) in mean.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut cov = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let c = rows
                .iter()
                .map(|r| (r[i] - mean[i]) * (r[j] - mean[j]))
                .sum::<f64>()
                / n;
            cov[i][j] = c;
            cov[j][i] = c;
        }
    }
    let trace: f64 = (0..dim).map(|i| cov[i][i]).sum();
    let scale = if trace > 0.0 { trace / dim as f64 } else { 1.0 };
    for (i, row) in cov.iter_mut().enumerate() {
        row[i] += NIW_RIDGE * scale;
    }
    Prior::niw(mean, 1.0, dim as f64 + 2.0, cov)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bern(xs: &[usize]) -> Vec<Observation> {
        xs.iter().map(|&x| Observation::Category(x)).collect()
    }

    #[test]
    fn bernoulli_stats_count_ones() {
        let s = suff_stats(&bern(&[1, 0, 1]), Family::Bernoulli).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.u(), &[2.0]);
        let empty = suff_stats(&[], Family::Bernoulli).unwrap();
        assert_eq!(empty.n(), 0);
        assert_eq!(empty.u(), &[0.0]);
    }

    #[test]
    fn gaussian_single_point_stats() {
        let s = suff_stats(&[Observation::Real(vec![2.0])], Family::Gaussian { dim: 1 }).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.u(), &[2.0, 4.0]);
    }

    #[test]
    fn stats_reject_bad_observations() {
        let fam = Family::Gaussian { dim: 2 };
        let err = suff_stats(&[Observation::Real(vec![1.0])], fam).unwrap_err();
        assert!(matches!(err, Error::ObservationMismatch { index: 0, .. }));
        let err = suff_stats(
            &[
                Observation::Real(vec![1.0, 1.0]),
                Observation::Real(vec![f64::NAN, 0.0]),
            ],
            fam,
        )
        .unwrap_err();
        assert_eq!(err, Error::NonFinite { index: 1 });
        assert!(suff_stats(&bern(&[2]), Family::Bernoulli).is_err());
        assert!(suff_stats(&[Observation::Count(3)], Family::Bernoulli).is_err());
    }

    #[test]
    fn combine_adds_and_has_identity() {
        let a = suff_stats(&bern(&[1, 0, 1]), Family::Bernoulli).unwrap();
        let b = suff_stats(&bern(&[0]), Family::Bernoulli).unwrap();
        let c = a.combine(&b).unwrap();
        assert_eq!((c.n(), c.u()), (4, &[2.0][..]));
        assert_eq!(
            a.combine(&SufficientStats::empty(Family::Bernoulli))
                .unwrap(),
            a
        );
        assert_eq!(a.combine(&b).unwrap(), b.combine(&a).unwrap());
        let p = SufficientStats::empty(Family::Poisson);
        assert!(matches!(a.combine(&p), Err(Error::FamilyMismatch { .. })));
    }

    #[test]
    fn beta_bernoulli_golden_values() {
        let prior = Prior::beta(1.0, 1.0).unwrap();
        let one = suff_stats(&bern(&[1]), Family::Bernoulli).unwrap();
        let v = log_marginal(&one, &prior).unwrap();
        assert!((v - 0.5f64.ln()).abs() < 1e-12);
        let two = suff_stats(&bern(&[1, 0]), Family::Bernoulli).unwrap();
        let v = log_marginal(&two, &prior).unwrap();
        assert!((v - (1.0f64 / 6.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn empty_data_has_zero_evidence() {
        let priors = [
            Prior::beta(2.0, 3.0).unwrap(),
            Prior::dirichlet(vec![0.5, 1.0, 2.0]).unwrap(),
            Prior::gamma(2.0, 1.0).unwrap(),
            Prior::niw(
                vec![0.0, 1.0],
                1.0,
                3.0,
                vec![vec![1.0, 0.2], vec![0.2, 2.0]],
            )
            .unwrap(),
        ];
        for p in &priors {
            let s = SufficientStats::empty(p.family());
            assert_eq!(log_marginal(&s, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn poisson_single_count_closed_form() {
        // ∫ Pois(3|λ) Gamma(λ|2,1) dλ = Γ(5)/(3! Γ(2)) · 2^{-5} = 4/32
        let prior = Prior::gamma(2.0, 1.0).unwrap();
        let s = suff_stats(&[Observation::Count(3)], Family::Poisson).unwrap();
        let v = log_marginal(&s, &prior).unwrap();
        assert!((v - (4.0f64 / 32.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_reduces_to_beta_for_two_categories() {
        let data = bern(&[1, 0, 0, 1, 1]);
        let beta = log_marginal(
            &suff_stats(&data, Family::Bernoulli).unwrap(),
            &Prior::beta(0.7, 2.5).unwrap(),
        )
        .unwrap();
        // Dirichlet ordering is (α₀ for category 0, α₁ for category 1); Beta's
        // `a` goes with x = 1.
        let dir = log_marginal(
            &suff_stats(&data, Family::Multinomial { categories: 2 }).unwrap(),
            &Prior::dirichlet(vec![2.5, 0.7]).unwrap(),
        )
        .unwrap();
        assert!((beta - dir).abs() < 1e-12);
    }

    #[test]
    fn prior_constraints_are_checked() {
        assert!(Prior::beta(0.0, 1.0).is_err());
        assert!(Prior::gamma(1.0, -1.0).is_err());
        assert!(Prior::dirichlet(vec![1.0, f64::NAN]).is_err());
        assert!(Prior::dirichlet(vec![]).is_err());
        assert!(Prior::niw(vec![0.0], 0.0, 2.0, vec![vec![1.0]]).is_err());
        assert!(Prior::niw(
            vec![0.0, 0.0],
            1.0,
            0.9,
            vec![vec![1.0, 0.0], vec![0.0, 1.0]]
        )
        .is_err());
        assert!(Prior::niw(
            vec![0.0, 0.0],
            1.0,
            3.0,
            vec![vec![1.0, 2.0], vec![2.0, 1.0]]
        )
        .is_err());
        assert!(Prior::niw(
            vec![0.0, 0.0],
            1.0,
            3.0,
            vec![vec![1.0, 0.5], vec![0.1, 1.0]]
        )
        .is_err());
        assert!(Prior::niw(vec![0.0], 1.0, 1.0, vec![vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn default_prior_from_two_points() {
        let data = [Observation::Real(vec![0.0]), Observation::Real(vec![2.0])];
        let prior = default_prior(&data, Family::Gaussian { dim: 1 }).unwrap();
        let Prior::Gaussian(niw) = prior else {
            panic!("expected NIW prior")
        };
        assert_eq!(niw.mu0(), &[1.0]);
        assert_eq!(niw.kappa0(), 1.0);
        assert_eq!(niw.nu0(), 3.0);
        // population variance 1, plus ridge 1e-6 · (1 / 1)
        assert!((niw.lambda0()[0][0] - (1.0 + 1e-6)).abs() < 1e-15);
    }

    #[test]
    fn default_prior_fixed_families() {
        assert_eq!(
            default_prior(&bern(&[1, 0]), Family::Bernoulli).unwrap(),
            Prior::Bernoulli { a: 1.0, b: 1.0 }
        );
        assert_eq!(
            default_prior(&bern(&[2]), Family::Multinomial { categories: 3 }).unwrap(),
            Prior::Multinomial {
                alpha: vec![1.0; 3]
            }
        );
        assert_eq!(
            default_prior(&[Observation::Count(0)], Family::Poisson).unwrap(),
            Prior::Poisson {
                shape: 1.0,
                rate: 1.0
            }
        );
        assert_eq!(default_prior(&[], Family::Bernoulli), Err(Error::EmptyData));
    }

    #[test]
    fn default_prior_survives_constant_data() {
        let data = vec![Observation::Real(vec![3.0, 1.0]); 4];
        let prior = default_prior(&data, Family::Gaussian { dim: 2 }).unwrap();
        let s = suff_stats(&data, Family::Gaussian { dim: 2 }).unwrap();
        assert!(log_marginal(&s, &prior).unwrap().is_finite());

        let partly = [
            Observation::Real(vec![0.0, 5.0]),
            Observation::Real(vec![1.0, 5.0]),
        ];
        assert!(default_prior(&partly, Family::Gaussian { dim: 2 }).is_ok());
    }

    #[test]
    fn prior_json_round_trip_and_validation() {
        let p = Prior::niw(
            vec![0.5, -1.0],
            2.0,
            4.0,
            vec![vec![1.0, 0.3], vec![0.3, 2.0]],
        )
        .unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: Prior = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
        let bad = r#"{"family":"bernoulli","a":-1.0,"b":1.0}"#;
        assert!(serde_json::from_str::<Prior>(bad).is_err());
        let ok: Prior =
            serde_json::from_str(r#"{"family":"poisson","shape":2,"rate":0.5}"#).unwrap();
        assert_eq!(
            ok,
            Prior::Poisson {
                shape: 2.0,
                rate: 0.5
            }
        );
    }
}

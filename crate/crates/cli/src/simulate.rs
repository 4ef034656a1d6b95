//! Seeded synthetic sample pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use twosample::Observation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// X ~ N(0, I), Y ~ N(shift·1, I).
    GaussianShift,
    /// X ~ N(0, I), Y ~ N(0, scale² I).
    GaussianScale,
    /// X ~ Bernoulli(p1), Y ~ Bernoulli(p2).
    BernoulliRate,
    /// First coordinate: X ~ ½N(−s, 1) + ½N(s, 1), Y ~ N(0, 1 + s²);
    /// remaining coordinates N(0, 1) in both. Means and variances match.
    MixtureVsUnimodal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub generator: Generator,
    pub dim: usize,
    pub m1: usize,
    pub m2: usize,
    pub shift: f64,
    pub scale: f64,
    pub p1: f64,
    pub p2: f64,
    pub separation: f64,
    pub seed: u64,
}

impl SimulateConfig {
    pub fn new(generator: Generator, seed: u64) -> Self {
        Self {
            generator,
            dim: 1,
            m1: 50,
            m2: 50,
            shift: 0.0,
            scale: 1.0,
            p1: 0.5,
            p2: 0.5,
            separation: 2.0,
            seed,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SimulateError {
    #[error("dimension must be >= 1")]
    Dimension,
    #[error("{name} must be {requirement}; got {value}")]
    Parameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
}

fn check(
    name: &'static str,
    value: f64,
    ok: bool,
    requirement: &'static str,
) -> Result<(), SimulateError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(SimulateError::Parameter {
            name,
            requirement,
            value,
        })
    }
}

/// Draws `(X, Y)`. X is drawn first, then Y, from one ChaCha8 stream, so a
/// seed fixes both samples.
pub fn generate(
    cfg: &SimulateConfig,
) -> Result<(Vec<Observation>, Vec<Observation>), SimulateError> {
    if cfg.dim == 0 {
        return Err(SimulateError::Dimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let gaussian = |rng: &mut ChaCha8Rng, m: usize, mean: f64, sd: f64| -> Vec<Observation> {
        (0..m)
            .map(|_| {
                Observation::Real(
                    (0..cfg.dim)
                        .map(|_| mean + sd * std_normal.sample(rng))
                        .collect(),
                )
            })
            .collect()
    };

    match cfg.generator {
        Generator::GaussianShift => {
            check("shift", cfg.shift, true, "finite")?;
            let x = gaussian(&mut rng, cfg.m1, 0.0, 1.0);
            let y = gaussian(&mut rng, cfg.m2, cfg.shift, 1.0);
            Ok((x, y))
        }
        Generator::GaussianScale => {
            check("scale", cfg.scale, cfg.scale > 0.0, "finite and > 0")?;
            let x = gaussian(&mut rng, cfg.m1, 0.0, 1.0);
            let y = gaussian(&mut rng, cfg.m2, 0.0, cfg.scale);
            Ok((x, y))
        }
        Generator::BernoulliRate => {
            check("p1", cfg.p1, (0.0..=1.0).contains(&cfg.p1), "in [0, 1]")?;
            check("p2", cfg.p2, (0.0..=1.0).contains(&cfg.p2), "in [0, 1]")?;
            let mut draw = |m: usize, p: f64| -> Vec<Observation> {
                (0..m)
                    .map(|_| Observation::Category(usize::from(rng.random::<f64>() < p)))
                    .collect()
            };
            let x = draw(cfg.m1, cfg.p1);
            let y = draw(cfg.m2, cfg.p2);
            Ok((x, y))
        }
        Generator::MixtureVsUnimodal => {
            let s = cfg.separation;
            check("separation", s, true, "finite")?;
            let wide = (1.0 + s * s).sqrt();
            let mut x = Vec::with_capacity(cfg.m1);
            for _ in 0..cfg.m1 {
                let centre = if rng.random::<bool>() { s } else { -s };
                let mut row = vec![centre + std_normal.sample(&mut rng)];
                row.extend((1..cfg.dim).map(|_| std_normal.sample(&mut rng)));
                x.push(Observation::Real(row));
            }
            let mut y = Vec::with_capacity(cfg.m2);
            for _ in 0..cfg.m2 {
                let mut row = vec![wide * std_normal.sample(&mut rng)];
                row.extend((1..cfg.dim).map(|_| std_normal.sample(&mut rng)));
                y.push(Observation::Real(row));
            }
            Ok((x, y))
        }
    }
}

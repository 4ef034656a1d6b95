//! Exact Dirichlet-process-mixture evidence by summing over set partitions.
//!
//! ```text
//! p(D | α, β) = Σ_v p(v | α) Π_blocks p(D_b | β)
//! ```
//!
//! with the Chinese-restaurant-process prior
//! `log p(v|α) = K log α + Σ_b log Γ(n_b) + log Γ(α) − log Γ(α + n)`.
//! The number of partitions of `n` points is the Bell number `B(n)`
//! (`B(10) = 115975`, `B(12) = 4213597`), so enumeration is capped at
//! [`MAX_EXACT_POINTS`].

use crate::error::{Error, Result};
use crate::exp_family::{canonical_order, log_marginal, Observation, Prior, SufficientStats};
use crate::math::{ln_gamma, LogSumExp};

/// Largest dataset the exact sum accepts.
pub const MAX_EXACT_POINTS: usize = 12;

/// A set partition of `{0..n}` as a restricted-growth string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    n_blocks: usize,
}

impl Partition {
    /// Validates restricted-growth form: `a[0] = 0` and each label is at most
    /// one more than the running maximum.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let mut next = 0usize;
        for (i, &label) in assignment.iter().enumerate() {
            if label > next {
                return Err(Error::InvalidPartition(format!(
                    "label {label} at position {i} breaks restricted-growth form"
                )));
            }
            if label == next {
                next += 1;
            }
        }
        Ok(Self {
            assignment,
            n_blocks: next,
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_blocks];
        for &label in &self.assignment {
            sizes[label] += 1;
        }
        sizes
    }

    /// Member indices of each block, blocks ordered by label.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.n_blocks];
        for (i, &label) in self.assignment.iter().enumerate() {
            blocks[label].push(i);
        }
        blocks
    }
}

/// Iterator over all partitions of `{0..n}` in lexicographic RGS order.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<usize>>,
    prefix_max: Vec<usize>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.current.as_mut()?;
        let n = current.len();
        let n_blocks = self.prefix_max[n - 1] + 1;
        let out = Partition {
            assignment: current.clone(),
            n_blocks,
        };

        // Advance: bump the rightmost position that can still grow, reset the
        // tail to zero.
        let mut advanced = false;
        for i in (1..n).rev() {
            if current[i] <= self.prefix_max[i - 1] {
                current[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(current[i]);
                let m = self.prefix_max[i];
                current[i + 1..].fill(0);
                self.prefix_max[i + 1..].fill(m);
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.current = None;
        }
        Some(out)
    }
}

/// Every set partition of `{0..n}` exactly once; `1 <= n <= 12`.
pub fn enumerate_partitions(n: usize) -> Result<Partitions> {
    if n == 0 || n > MAX_EXACT_POINTS {
        return Err(Error::SizeCap {
            n,
            cap: MAX_EXACT_POINTS,
        });
    }
    Ok(Partitions {
        current: Some(vec![0; n]),
        prefix_max: vec![0; n],
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// CRP log prior of a partition.
pub fn log_crp_prior(partition: &Partition, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let n = partition.len() as f64;
    let blocks: f64 = partition
        .block_sizes()
        .iter()
        .map(|&s| ln_gamma(s as f64))
        .sum();
    Ok(partition.n_blocks() as f64 * alpha.ln() + blocks + ln_gamma(alpha) - ln_gamma(alpha + n))
}

/// Exact log DPM evidence of `data`; `1 <= |data| <= 12`.
///
/// Block evidences are tabulated once per subset (`2ⁿ − 1` of them) and the
/// partition sum is a depth-first walk in RGS order. The data are put in
/// canonical order first, so any permutation gives the same value.
pub fn log_dpm_marginal_exact(data: &[Observation], alpha: f64, prior: &Prior) -> Result<f64> {
    check_alpha(alpha)?;
    let n = data.len();
    if n == 0 || n > MAX_EXACT_POINTS {
        return Err(Error::SizeCap {
            n,
            cap: MAX_EXACT_POINTS,
        });
    }
    let data = canonical_order(data);
    let family = prior.family();
    let points = data
        .iter()
        .map(|obs| SufficientStats::of_observation(obs, family))
        .collect::<Result<Vec<_>>>()?;

    let weights = block_weights(&points, prior)?;
    let mut acc = LogSumExp::new();
    let mut blocks = Vec::with_capacity(n);
    walk_partitions(0, n, &mut blocks, &weights, alpha.ln(), &mut acc);
    Ok(acc.value() + ln_gamma(alpha) - ln_gamma(alpha + n as f64))
}

/// `weights[mask] = log Γ(|mask|) + log p(D_mask | β)`.
fn block_weights(points: &[SufficientStats], prior: &Prior) -> Result<Vec<f64>> {
    let n = points.len();
    let size = 1usize << n;
    let mut stats: Vec<Option<SufficientStats>> = vec![None; size];
    let mut weights = vec![f64::NEG_INFINITY; size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let s = match &stats[rest] {
            Some(r) => r.combine(&points[low])?,
            None => points[low].clone(),
        };
        weights[mask] = ln_gamma(mask.count_ones() as f64) + log_marginal(&s, prior)?;
        stats[mask] = Some(s);
    }
    Ok(weights)
}

/// Depth-first over restricted-growth strings: point `i` joins each open
/// block in turn, then opens a new one. `blocks` holds member bitmasks.
fn walk_partitions(
    i: usize,
    n: usize,
    blocks: &mut Vec<usize>,
    weights: &[f64],
    log_alpha: f64,
    acc: &mut LogSumExp,
) {
    if i == n {
        let term: f64 = blocks.iter().map(|&m| weights[m]).sum();
        acc.push(term + blocks.len() as f64 * log_alpha);
        return;
    }
    let bit = 1usize << i;
    for b in 0..blocks.len() {
        blocks[b] |= bit;
        walk_partitions(i + 1, n, blocks, weights, log_alpha, acc);
        blocks[b] &= !bit;
    }
    blocks.push(bit);
    walk_partitions(i + 1, n, blocks, weights, log_alpha, acc);
    blocks.pop();
}

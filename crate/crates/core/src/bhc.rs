//! Bayesian hierarchical clustering as an approximation to DPM evidence.
//!
//! Starting from singletons, the pair whose merged node has the highest
//! merge posterior `r_k` is joined until one tree remains. For a node `k`
//! with children `i`, `j` and `n_k` points:
//!
//! ```text
//! d_k        = α Γ(n_k) + d_i d_j                     (leaves: d = α)
//! π_k        = α Γ(n_k) / d_k
//! p(D_k|T_k) = π_k p(D_k|H1) + (1 − π_k) p(D_i|T_i) p(D_j|T_j)
//! r_k        = π_k p(D_k|H1) / p(D_k|T_k)
//! ```
//!
//! `d_k` equals the sum of `α^K Π Γ(n_b)` over the partitions the tree can
//! express, so `p(D|T)` weights those partitions by `α^K Π Γ(n_b) / d_root`.
//! Rescaling by `d_root Γ(α) / Γ(α + n)` restores their CRP weights, and the
//! result is a sum over a subset of the exact partition sum: a lower bound
//! on the DPM evidence. [`log_dpm_marginal_bhc`] returns that bound.
//!
//! Candidate merges are evaluated once and kept in a priority queue; each
//! merge only evaluates the new node against the remaining active nodes,
//! which gives `n + (n − 1)²` evidence evaluations in total.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exp_family::{log_marginal, Observation, Prior, SufficientStats};
use crate::math::{ln_gamma, log_add_exp};

#[derive(Debug, Clone, PartialEq)]
pub struct BhcNode {
    pub left: Option<usize>,
    pub right: Option<usize>,
    /// Indices into the input dataset, ascending.
    pub members: Vec<usize>,
    pub stats: SufficientStats,
    /// All members in one cluster.
    pub log_p_h1: f64,
    /// `log p(D_k | T_k)`.
    pub log_p_tree: f64,
    pub log_d: f64,
    pub log_pi: f64,
    /// Log merge posterior; 0 for leaves.
    pub log_r: f64,
}

impl BhcNode {
    pub fn is_leaf(&self) -> bool {
        self.left.is_none()
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Finished merge tree. Leaves are nodes `0..n` in input order; internal
/// nodes follow in merge order, so the root is the last node.
#[derive(Debug, Clone)]
pub struct BhcTree {
    nodes: Vec<BhcNode>,
    alpha: f64,
    prior: Prior,
    evidence_evaluations: usize,
}

struct Candidate {
    stats: SufficientStats,
    log_p_h1: f64,
    log_p_tree: f64,
    log_d: f64,
    log_pi: f64,
    log_r: f64,
}

#[derive(Debug, Clone, Copy)]
struct QueueKey {
    log_r: f64,
    left: usize,
    right: usize,
}

impl PartialEq for QueueKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueKey {}

impl PartialOrd for QueueKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueKey {
    // Max-heap: larger r first, then the lexicographically smaller pair.
    fn cmp(&self, other: &Self) -> Ordering {
        self.log_r
            .total_cmp(&other.log_r)
            .then_with(|| (other.left, other.right).cmp(&(self.left, self.right)))
    }
}

fn candidate(a: &BhcNode, b: &BhcNode, log_alpha: f64, prior: &Prior) -> Result<Candidate> {
    let stats = a.stats.combine(&b.stats)?;
    let log_p_h1 = log_marginal(&stats, prior)?;
    let n_k = stats.n() as f64;
    let log_merge = log_alpha + ln_gamma(n_k);
    let log_split = a.log_d + b.log_d;
    let log_d = log_add_exp(log_merge, log_split);
    let log_pi = log_merge - log_d;
    let log_not_pi = log_split - log_d;
    let merged = log_pi + log_p_h1;
    let log_p_tree = log_add_exp(merged, log_not_pi + a.log_p_tree + b.log_p_tree);
    Ok(Candidate {
        stats,
        log_p_h1,
        log_p_tree,
        log_d,
        log_pi,
        log_r: merged - log_p_tree,
    })
}

/// Greedy agglomeration of `data` into a BHC tree.
///
/// Ties in `r` go to the lexicographically smallest node-id pair, so the
/// tree is a deterministic function of the input order.
pub fn build_tree(data: &[Observation], alpha: f64, prior: &Prior) -> Result<BhcTree> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let family = prior.family();
    let log_alpha = alpha.ln();
    let n = data.len();
    let mut evaluations = 0usize;

    let mut nodes = Vec::with_capacity(2 * n - 1);
    for (i, obs) in data.iter().enumerate() {
        let stats = SufficientStats::of_observation(obs, family).map_err(|e| match e {
            Error::ObservationMismatch { family, reason, .. } => Error::ObservationMismatch {
                index: i,
                family,
                reason,
            },
            Error::NonFinite { .. } => Error::NonFinite { index: i },
            other => other,
        })?;
        let log_p_h1 = log_marginal(&stats, prior)?;
        evaluations += 1;
        nodes.push(BhcNode {
            left: None,
            right: None,
            members: vec![i],
            stats,
            log_p_h1,
            log_p_tree: log_p_h1,
            log_d: log_alpha,
            log_pi: 0.0,
            log_r: 0.0,
        });
    }

    let mut active = vec![true; n];
    let mut pending: HashMap<(usize, usize), Candidate> = HashMap::new();
    let mut queue = BinaryHeap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let c = candidate(&nodes[i], &nodes[j], log_alpha, prior)?;
            evaluations += 1;
            queue.push(QueueKey {
                log_r: c.log_r,
                left: i,
                right: j,
            });
            pending.insert((i, j), c);
        }
    }

    while let Some(key) = queue.pop() {
        let Some(c) = pending.remove(&(key.left, key.right)) else {
            continue;
        };
        if !(active[key.left] && active[key.right]) {
            continue;
        }
        active[key.left] = false;
        active[key.right] = false;
        let mut members = nodes[key.left].members.clone();
        members.extend_from_slice(&nodes[key.right].members);
        members.sort_unstable();
        let id = nodes.len();
        nodes.push(BhcNode {
            left: Some(key.left),
            right: Some(key.right),
            members,
            stats: c.stats,
            log_p_h1: c.log_p_h1,
            log_p_tree: c.log_p_tree,
            log_d: c.log_d,
            log_pi: c.log_pi,
            log_r: c.log_r,
        });
        active.push(true);

        for other in 0..id {
            if !active[other] {
                continue;
            }
            let c = candidate(&nodes[other], &nodes[id], log_alpha, prior)?;
            evaluations += 1;
            queue.push(QueueKey {
                log_r: c.log_r,
                left: other,
                right: id,
            });
            pending.insert((other, id), c);
        }
    }

    let tree = BhcTree {
        nodes,
        alpha,
        prior: prior.clone(),
        evidence_evaluations: evaluations,
    };
    debug_assert!(tree.validate().is_ok());
    Ok(tree)
}

impl BhcTree {
    pub fn root(&self) -> &BhcNode {
        self.nodes.last().expect("tree has at least one node")
    }

    pub fn nodes(&self) -> &[BhcNode] {
        &self.nodes
    }

    pub fn n_points(&self) -> usize {
        self.nodes.len().div_ceil(2)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    /// Number of conjugate-evidence evaluations spent building the tree.
    pub fn evidence_evaluations(&self) -> usize {
        self.evidence_evaluations
    }

    /// Structural check: the root covers every point once, and each node's
    /// members are the disjoint union of its children's.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_points();
        if self.nodes.len() != 2 * n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} nodes for {n} points",
                self.nodes.len()
            )));
        }
        let mut used = vec![false; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            match (node.left, node.right) {
                (None, None) => {
                    if id >= n || node.members != [id] {
                        return Err(Error::InvalidTree(format!("leaf {id} is malformed")));
                    }
                }
                (Some(l), Some(r)) => {
                    if l >= id || r >= id || used[l] || used[r] {
                        return Err(Error::InvalidTree(format!(
                            "node {id} has invalid children"
                        )));
                    }
                    used[l] = true;
                    used[r] = true;
                    let mut union = self.nodes[l].members.clone();
                    union.extend_from_slice(&self.nodes[r].members);
                    union.sort_unstable();
                    if union.windows(2).any(|w| w[0] == w[1]) || union != node.members {
                        return Err(Error::InvalidTree(format!(
                            "node {id} members are not the disjoint union of its children"
                        )));
                    }
                }
                _ => return Err(Error::InvalidTree(format!("node {id} has one child"))),
            }
        }
        if self.root().members != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidTree("root does not cover all points".into()));
        }
        Ok(())
    }

    /// Line-oriented merge trace, one line per merge in order.
    ///
    /// Columns: `step left right node size log_p_h1 log_pi log_d log_p_tree log_r`.
    pub fn merge_trace(&self) -> String {
        let n = self.n_points();
        let mut out =
            String::from("# step left right node size log_p_h1 log_pi log_d log_p_tree log_r\n");
        for (step, (id, node)) in self.nodes.iter().enumerate().skip(n).enumerate() {
            let _ = writeln!(
                out,
                "{} {} {} {} {} {} {} {} {} {}",
                step,
                node.left.unwrap(),
                node.right.unwrap(),
                id,
                node.size(),
                node.log_p_h1,
                node.log_pi,
                node.log_d,
                node.log_p_tree,
                node.log_r
            );
        }
        out
    }
}

/// Tree-consistent lower bound on the log DPM evidence:
/// `log p(D|T) + log d_root + log Γ(α) − log Γ(α + n)`.
///
/// Matches the exact evidence for one or two points.
pub fn log_dpm_marginal_bhc(tree: &BhcTree) -> f64 {
    let root = tree.root();
    let n = root.size() as f64;
    root.log_p_tree + root.log_d + ln_gamma(tree.alpha) - ln_gamma(tree.alpha + n)
}

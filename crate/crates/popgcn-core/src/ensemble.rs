//! Bootstrapped graph ensembles.
//!
//! Starting from one population graph, members are generated by dropping
//! each edge independently with probability `p` (one coin per unordered
//! pair, so symmetry is free). Every member trains its own network from a
//! member-derived seed, and the per-node probability outputs are fused by
//! consensus: entrywise mean, or entrywise max renormalized back onto the
//! simplex.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcnn::{self, row_argmax, GcnnConfig, GcnnParams, TrainMask};
use crate::graph::WeightedGraph;
use crate::matrix::DenseMatrix;
use crate::seed::split_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Consensus {
    Mean,
    Max,
}

impl Default for Consensus {
    fn default() -> Self {
        Consensus::Mean
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    /// Number of member graphs P.
    pub ensemble_size: usize,
    /// Probability of dropping each edge, in [0, 1].
    pub edge_drop_p: f64,
    pub master_seed: u64,
    pub consensus: Consensus,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            ensemble_size: 20,
            edge_drop_p: 0.3,
            master_seed: 0,
            consensus: Consensus::Mean,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ensemble_size == 0 {
            return Err(Error::InvalidConfig {
                what: format!("ensemble_size must be >= 1, got {}", self.ensemble_size),
            });
        }
        if !(0.0..=1.0).contains(&self.edge_drop_p) {
            return Err(Error::InvalidConfig {
                what: format!("edge_drop_p must lie in [0, 1], got {}", self.edge_drop_p),
            });
        }
        Ok(())
    }
}

/// Seed of member `index`'s graph stream: `split_seed(master, 2 * index)`.
pub fn member_graph_seed(master_seed: u64, index: usize) -> u64 {
    split_seed(master_seed, 2 * index as u64)
}

/// Seed of member `index`'s parameter stream: `split_seed(master, 2 * index + 1)`.
pub fn member_param_seed(master_seed: u64, index: usize) -> u64 {
    split_seed(master_seed, 2 * index as u64 + 1)
}

/// Keeps each edge independently with probability `1 - p`; survivors keep
/// their weights, the node set is untouched, and the draw order follows the
/// canonical edge order so the result is a pure function of `(g, p, seed)`.
pub fn edge_dropout(g: &WeightedGraph, p: f64, seed: u64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig {
            what: format!("edge drop probability must lie in [0, 1], got {p}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kept = g
        .edges()
        .iter()
        .filter(|_| rng.gen::<f64>() >= p)
        .copied()
        .collect();
    Ok(WeightedGraph::from_sorted_edges(g.num_nodes(), kept))
}

/// The P member graphs: member `p` is `edge_dropout` of `g` with the seed
/// from [`member_graph_seed`]. The unperturbed graph is not a member.
pub fn build_ensemble(g: &WeightedGraph, cfg: &EnsembleConfig) -> Result<Vec<WeightedGraph>> {
    cfg.validate()?;
    (0..cfg.ensemble_size)
        .map(|p| edge_dropout(g, cfg.edge_drop_p, member_graph_seed(cfg.master_seed, p)))
        .collect()
}

/// Trains one network per member graph, each from its member-derived
/// parameter seed. Members are independent, so results do not depend on
/// execution order; failures carry the member index.
pub fn train_ensemble(
    g: &WeightedGraph,
    x: &DenseMatrix,
    mask: &TrainMask,
    gcnn_cfg: &GcnnConfig,
    ens_cfg: &EnsembleConfig,
) -> Result<Vec<GcnnParams>> {
    let graphs = build_ensemble(g, ens_cfg)?;
    graphs
        .iter()
        .enumerate()
        .map(|(index, member_graph)| {
            train_member(member_graph, x, mask, gcnn_cfg, ens_cfg.master_seed, index)
                .map(|(params, _)| params)
        })
        .collect()
}

/// One member's training run, reusable by callers that schedule members
/// themselves (the parallel runner, the sweep).
pub fn train_member(
    member_graph: &WeightedGraph,
    x: &DenseMatrix,
    mask: &TrainMask,
    gcnn_cfg: &GcnnConfig,
    master_seed: u64,
    index: usize,
) -> Result<(GcnnParams, Vec<gcnn::EpochStat>)> {
    let mut member_cfg = gcnn_cfg.clone();
    member_cfg.seed = member_param_seed(master_seed, index);
    gcnn::train(member_graph, x, mask, &member_cfg).map_err(|e| Error::Member {
        index,
        source: alloc::boxed::Box::new(e),
    })
}

/// Eval-mode probabilities of every member on its own graph.
pub fn predict_members(
    graphs: &[WeightedGraph],
    params: &[GcnnParams],
    x: &DenseMatrix,
    gcnn_cfg: &GcnnConfig,
) -> Result<Vec<DenseMatrix>> {
    if graphs.len() != params.len() {
        return Err(Error::DimensionMismatch {
            what: "member graphs vs parameter sets",
            expected: graphs.len(),
            got: params.len(),
        });
    }
    graphs
        .iter()
        .zip(params.iter())
        .enumerate()
        .map(|(index, (g, p))| {
            gcnn::predict_proba(p, g, x, gcnn_cfg).map_err(|e| Error::Member {
                index,
                source: alloc::boxed::Box::new(e),
            })
        })
        .collect()
}

/// Member probability matrices plus the fused decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub member_probabilities: Vec<DenseMatrix>,
    pub fused_probabilities: DenseMatrix,
    pub predicted_labels: Vec<usize>,
}

/// Fuses member probabilities. Mean: entrywise arithmetic mean, with each
/// entry's addends summed in sorted order so the result is exactly
/// invariant under member reordering. Max: entrywise max followed by row
/// renormalization onto the simplex. Labels are row argmaxes with ties
/// resolved toward the lower class.
pub fn consensus(members: &[DenseMatrix], rule: Consensus) -> Result<PredictionSet> {
    let first = members.first().ok_or(Error::EmptyEnsemble)?;
    let (n, c) = (first.rows(), first.cols());
    for m in members {
        if m.rows() != n || m.cols() != c {
            return Err(Error::DimensionMismatch {
                what: "member probability shape",
                expected: n * c,
                got: m.rows() * m.cols(),
            });
        }
    }

    let mut fused = DenseMatrix::zeros(n, c);
    match rule {
        Consensus::Mean => {
            let inv = 1.0 / members.len() as f64;
            let mut stack: Vec<f64> = Vec::with_capacity(members.len());
            for idx in 0..n * c {
                stack.clear();
                stack.extend(members.iter().map(|m| m.data()[idx]));
                stack.sort_by(|a, b| a.total_cmp(b));
                fused.data_mut()[idx] = stack.iter().sum::<f64>() * inv;
            }
        }
        Consensus::Max => {
            for idx in 0..n * c {
                fused.data_mut()[idx] = members
                    .iter()
                    .map(|m| m.data()[idx])
                    .fold(f64::NEG_INFINITY, f64::max);
            }
            for i in 0..n {
                let row = fused.row_mut(i);
                let sum: f64 = row.iter().sum();
                for v in row.iter_mut() {
                    *v /= sum;
                }
            }
        }
    }

    let predicted_labels = (0..n).map(|i| row_argmax(fused.row(i))).collect();
    Ok(PredictionSet {
        member_probabilities: members.to_vec(),
        fused_probabilities: fused,
        predicted_labels,
    })
}

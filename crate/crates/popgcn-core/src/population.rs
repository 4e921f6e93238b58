//! Population graph construction from phenotype records and feature vectors.
//!
//! Edge weights combine a sex/site agreement score with the linear kernel
//! between the two subjects' feature vectors: matching on sex multiplies the
//! score by `lambda1 > 1`, matching on site by `lambda2 > 1`, non-matching
//! fields contribute 1. The kernel is clamped at zero so weights stay
//! non-negative, and pairs at or below `edge_threshold` are omitted.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::ensemble::edge_dropout;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::matrix::FeatureMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sex {
    M,
    F,
}

impl Sex {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "M" => Ok(Sex::M),
            "F" => Ok(Sex::F),
            other => Err(Error::InvalidConfig {
                what: format!("sex must be M or F, got {other:?}"),
            }),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Sex::M => "M",
            Sex::F => "F",
        }
    }
}

/// One subject's non-imaging metadata. `label` is `None` for subjects whose
/// diagnosis is unknown (written `?` in phenotype files).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhenotypeRecord {
    pub subject_id: String,
    pub sex: Sex,
    pub site: String,
    pub label: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineRule {
    Multiply,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityConfig {
    /// Score for matching sex; must exceed 1.
    pub lambda1: f64,
    /// Score for matching site; must exceed 1.
    pub lambda2: f64,
    /// Pairs with combined weight at or below this are omitted.
    pub edge_threshold: f64,
    pub combine_rule: CombineRule,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        Self {
            lambda1: 2.0,
            lambda2: 2.0,
            edge_threshold: 0.0,
            combine_rule: CombineRule::Multiply,
        }
    }
}

impl SimilarityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda1.is_finite() && self.lambda1 > 1.0) {
            return Err(Error::InvalidConfig {
                what: format!("lambda1 must be > 1, got {}", self.lambda1),
            });
        }
        if !(self.lambda2.is_finite() && self.lambda2 > 1.0) {
            return Err(Error::InvalidConfig {
                what: format!("lambda2 must be > 1, got {}", self.lambda2),
            });
        }
        if !(self.edge_threshold.is_finite() && self.edge_threshold >= 0.0) {
            return Err(Error::InvalidConfig {
                what: format!("edge_threshold must be >= 0, got {}", self.edge_threshold),
            });
        }
        Ok(())
    }
}

/// Sex/site agreement score: `s_sex * s_site` where each factor is the
/// configured lambda when the field matches and 1 when it does not.
pub fn sex_site_score(a: &PhenotypeRecord, b: &PhenotypeRecord, cfg: &SimilarityConfig) -> f64 {
    let s_sex = if a.sex == b.sex { cfg.lambda1 } else { 1.0 };
    let s_site = if a.site == b.site { cfg.lambda2 } else { 1.0 };
    s_sex * s_site
}

/// Euclidean dot product between two feature vectors.
pub fn linear_kernel(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "linear kernel operands",
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(x.iter().zip(y.iter()).map(|(&a, &b)| a * b).sum())
}

/// Population graph: weight of pair `(a, b)` is
/// `sex_site_score(a, b) * max(linear_kernel(x_a, x_b), 0)`, with pairs at
/// or below the threshold omitted. Symmetric by construction, no self-loops.
pub fn build_population_graph(
    features: &FeatureMatrix,
    phenotypes: &[PhenotypeRecord],
    cfg: &SimilarityConfig,
) -> Result<WeightedGraph> {
    cfg.validate()?;
    let n = features.num_subjects();
    if phenotypes.len() != n {
        return Err(Error::DimensionMismatch {
            what: "phenotype records vs feature rows",
            expected: n,
            got: phenotypes.len(),
        });
    }
    let mut edges = Vec::new();
    for i in 0..n {
        let xi = features.values.row(i);
        for j in (i + 1)..n {
            let kernel = linear_kernel(xi, features.values.row(j))?.max(0.0);
            let weight = sex_site_score(&phenotypes[i], &phenotypes[j], cfg) * kernel;
            if weight > cfg.edge_threshold {
                edges.push((i, j, weight));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

/// The no-metadata baseline: an edgeless graph, so every node's receptive
/// field is itself and the network reduces to a per-node dense classifier.
pub fn naive_graph(n: usize) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::InvalidConfig {
            what: String::from("naive graph needs at least one node"),
        });
    }
    Ok(WeightedGraph::edgeless(n))
}

/// Named alias for the corrupted-input condition: `drop_fraction` of the
/// edges removed at random, delegating to [`edge_dropout`].
pub fn noisy_graph(g: &WeightedGraph, drop_fraction: f64, seed: u64) -> Result<WeightedGraph> {
    edge_dropout(g, drop_fraction, seed)
}

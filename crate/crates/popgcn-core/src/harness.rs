//! Synthetic cohorts, cross-validation, and the experiment matrix.
//!
//! The cohort generator plants controllable class, site, and sex signals in
//! the ROI correlation structure, so the qualitative claims (the graph
//! helps, the ensemble helps, noise hurts) become testable properties at
//! desk scale. The experiment runner reproduces the evaluation protocol:
//! per fold, standardize and select features on the training rows only,
//! build the designated graph, train the single model or the ensemble, and
//! score the held-out fold.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::ensemble::{build_ensemble, consensus, Consensus, EnsembleConfig};
use crate::error::{Error, Result};
use crate::features::{connectivity_vector, rfe_select, standardize, RfeConfig, RoiTimeSeries};
use crate::gcnn::{self, row_argmax, GcnnConfig, GcnnParams, TrainMask};
use crate::graph::WeightedGraph;
use crate::matrix::{DenseMatrix, FeatureMatrix};
use crate::population::{
    build_population_graph, naive_graph, noisy_graph, PhenotypeRecord, Sex, SimilarityConfig,
};
use crate::seed::{derive_seed, split_seed};

const STREAM_FOLD_SPLIT: u64 = 0xF01D;
const STREAM_FOLD_MASTER: u64 = 0x3A57;
const STREAM_NOISY: u64 = 0x0153;
const STREAM_SWEEP: u64 = 0x53EE;

/// Parameters of the synthetic cohort generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub num_subjects: usize,
    pub num_sites: usize,
    pub num_rois: usize,
    pub time_len: usize,
    /// Strength of the class-specific correlation pattern.
    pub class_effect: f64,
    /// Strength of the per-site batch pattern.
    pub site_effect: f64,
    /// Strength of the per-sex pattern.
    pub sex_effect: f64,
    pub noise_sd: f64,
    /// Probability of class 1.
    pub class_balance: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            num_subjects: 200,
            num_sites: 5,
            num_rois: 20,
            time_len: 150,
            class_effect: 0.2,
            site_effect: 0.45,
            sex_effect: 0.25,
            noise_sd: 1.0,
            class_balance: 0.5,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_sites == 0 || self.num_subjects < 4 * self.num_sites {
            return Err(Error::InvalidConfig {
                what: format!(
                    "num_subjects must be >= 4 * num_sites, got {} subjects over {} sites",
                    self.num_subjects, self.num_sites
                ),
            });
        }
        if self.num_rois < 2 {
            return Err(Error::InvalidConfig {
                what: String::from("num_rois must be >= 2"),
            });
        }
        if self.time_len < 3 {
            return Err(Error::InvalidConfig {
                what: String::from("time_len must be >= 3"),
            });
        }
        for (name, v) in [
            ("class_effect", self.class_effect),
            ("site_effect", self.site_effect),
            ("sex_effect", self.sex_effect),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidConfig {
                    what: format!("{name} must be finite"),
                });
            }
        }
        if !(self.noise_sd.is_finite() && self.noise_sd > 0.0) {
            return Err(Error::InvalidConfig {
                what: format!("noise_sd must be > 0, got {}", self.noise_sd),
            });
        }
        if !(self.class_balance > 0.0 && self.class_balance < 1.0) {
            return Err(Error::InvalidConfig {
                what: format!("class_balance must lie in (0, 1), got {}", self.class_balance),
            });
        }
        Ok(())
    }
}

fn pattern(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Synthetic cohort: phenotypes plus ROI time series whose correlation
/// structure carries additive class, site, and sex factor patterns over
/// Gaussian noise. Deterministic given `spec.seed`.
pub fn generate_synthetic_cohort(
    spec: &SyntheticSpec,
) -> Result<(Vec<RoiTimeSeries>, Vec<PhenotypeRecord>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let r = spec.num_rois;

    let class_patterns: Vec<Vec<f64>> = (0..2).map(|_| pattern(&mut rng, r)).collect();
    let site_patterns: Vec<Vec<f64>> = (0..spec.num_sites).map(|_| pattern(&mut rng, r)).collect();
    let sex_patterns: Vec<Vec<f64>> = (0..2).map(|_| pattern(&mut rng, r)).collect();

    let mut series_out = Vec::with_capacity(spec.num_subjects);
    let mut phenotypes = Vec::with_capacity(spec.num_subjects);
    for s in 0..spec.num_subjects {
        let class = usize::from(rng.gen::<f64>() < spec.class_balance);
        let site = rng.gen_range(0..spec.num_sites);
        let sex = if rng.gen::<f64>() < 0.5 { Sex::M } else { Sex::F };

        let mut series = DenseMatrix::zeros(r, spec.time_len);
        for t in 0..spec.time_len {
            let g: f64 = rng.sample(StandardNormal);
            let h: f64 = rng.sample(StandardNormal);
            let m: f64 = rng.sample(StandardNormal);
            for roi in 0..r {
                let noise: f64 = rng.sample(StandardNormal);
                let value = spec.class_effect * class_patterns[class][roi] * g
                    + spec.site_effect * site_patterns[site][roi] * h
                    + spec.sex_effect * sex_patterns[sex as usize][roi] * m
                    + spec.noise_sd * noise;
                series.set(roi, t, value);
            }
        }

        let subject_id = format!("s{s:04}");
        series_out.push(RoiTimeSeries::new(subject_id.clone(), series)?);
        phenotypes.push(PhenotypeRecord {
            subject_id,
            sex,
            site: format!("site{site}"),
            label: Some(class),
        });
    }
    Ok((series_out, phenotypes))
}

/// Connectivity vectors for a whole cohort, stacked into a feature matrix.
/// Row order follows the input; errors carry the offending subject's index
/// via the fold-style context.
pub fn connectivity_matrix(cohort: &[RoiTimeSeries]) -> Result<FeatureMatrix> {
    let first = cohort.first().ok_or(Error::EmptyMask)?;
    let dim = first.num_rois() * (first.num_rois() - 1) / 2;
    let mut values = DenseMatrix::zeros(cohort.len(), dim);
    for (row, ts) in cohort.iter().enumerate() {
        let vec = connectivity_vector(ts).map_err(|e| Error::Fold {
            fold: row,
            source: alloc::boxed::Box::new(e),
        })?;
        if vec.len() != dim {
            return Err(Error::DimensionMismatch {
                what: "connectivity vector length",
                expected: dim,
                got: vec.len(),
            });
        }
        values.row_mut(row).copy_from_slice(&vec);
    }
    FeatureMatrix::with_default_labels(values)
}

/// Fold index per labeled subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSplit {
    pub k: usize,
    pub assignments: Vec<usize>,
}

/// Random stratified partition, deterministic given `seed`.
///
/// Per class, subjects are shuffled and dealt so every fold's class count
/// is within one of proportional; remainders go to the currently smallest
/// folds. `k` may be as large as the number of subjects (leave-one-out).
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<FoldSplit> {
    if k == 0 || k > labels.len() {
        return Err(Error::InvalidConfig {
            what: format!("k must lie in 1..={}, got {k}", labels.len()),
        });
    }
    let num_classes = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
    for (i, &l) in labels.iter().enumerate() {
        per_class[l].push(i);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0usize; labels.len()];
    let mut fold_totals = vec![0usize; k];
    for members in per_class.iter_mut() {
        members.shuffle(&mut rng);
        let base = members.len() / k;
        let rem = members.len() % k;

        let mut counts = vec![base; k];
        // Hand the remainder to the smallest folds, lower index first.
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&f| (fold_totals[f], f));
        for &f in order.iter().take(rem) {
            counts[f] += 1;
        }

        let mut cursor = 0;
        for (f, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                assignments[members[cursor]] = f;
                fold_totals[f] += 1;
                cursor += 1;
            }
        }
    }
    Ok(FoldSplit { k, assignments })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Population,
    Naive,
    Noisy,
}

impl core::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            GraphKind::Population => "population",
            GraphKind::Naive => "naive",
            GraphKind::Noisy => "noisy",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Single,
    Ensemble,
}

impl core::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            ModelKind::Single => "single",
            ModelKind::Ensemble => "ensemble",
        })
    }
}

/// Everything a run needs beyond the data itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub similarity: SimilarityConfig,
    pub rfe: RfeConfig,
    pub gcnn: GcnnConfig,
    pub ensemble: EnsembleConfig,
    /// Edge fraction dropped for the noisy-graph condition.
    pub noisy_drop: f64,
    pub k_folds: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            similarity: SimilarityConfig::default(),
            rfe: RfeConfig::default(),
            gcnn: GcnnConfig::default(),
            ensemble: EnsembleConfig::default(),
            noisy_drop: 0.3,
            k_folds: 10,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.similarity.validate()?;
        self.rfe.validate()?;
        self.gcnn.validate()?;
        self.ensemble.validate()?;
        if !(0.0..=1.0).contains(&self.noisy_drop) {
            return Err(Error::InvalidConfig {
                what: format!("noisy_drop must lie in [0, 1], got {}", self.noisy_drop),
            });
        }
        if self.k_folds < 2 {
            return Err(Error::InvalidConfig {
                what: format!("k_folds must be >= 2, got {}", self.k_folds),
            });
        }
        Ok(())
    }

    /// Selection target actually used: the configured target capped at
    /// half the input dimension (synthetic cohorts sit far below the
    /// full-scale feature space).
    pub fn effective_rfe_target(&self, dim: usize) -> usize {
        self.rfe.target_dim.min((dim / 2).max(1))
    }
}

/// One fold's work order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldJob {
    pub fold: usize,
    /// True on rows held out for evaluation.
    pub test_mask: Vec<bool>,
    /// Master seed for this fold's models (single and ensemble).
    pub master_seed: u64,
    /// Seed of the noisy-graph corruption for this fold.
    pub noisy_seed: u64,
}

/// Fold jobs for the labeled subjects under `cfg.seed`. The split seed and
/// the per-fold master/noisy seeds are derived streams, so jobs can run in
/// any order or in parallel without affecting results.
pub fn plan_folds(phenotypes: &[PhenotypeRecord], cfg: &ExperimentConfig) -> Result<Vec<FoldJob>> {
    let labeled_rows: Vec<usize> = phenotypes
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.label.map(|_| i))
        .collect();
    let labels: Vec<usize> = labeled_rows
        .iter()
        .map(|&i| phenotypes[i].label.expect("filtered"))
        .collect();
    if labels.is_empty() {
        return Err(Error::EmptyMask);
    }
    let split = stratified_kfold(&labels, cfg.k_folds, split_seed(cfg.seed, STREAM_FOLD_SPLIT))?;

    Ok((0..split.k)
        .map(|fold| {
            let mut test_mask = vec![false; phenotypes.len()];
            for (pos, &row) in labeled_rows.iter().enumerate() {
                if split.assignments[pos] == fold {
                    test_mask[row] = true;
                }
            }
            FoldJob {
                fold,
                test_mask,
                master_seed: derive_seed(cfg.seed, STREAM_FOLD_MASTER, fold as u64),
                noisy_seed: derive_seed(cfg.seed, STREAM_NOISY, fold as u64),
            }
        })
        .collect())
}

/// The per-fold data pipeline output: standardized, RFE-reduced features,
/// the designated graph, and the training mask.
#[derive(Debug, Clone)]
pub struct PreparedCell {
    pub reduced: FeatureMatrix,
    pub graph: WeightedGraph,
    pub mask: TrainMask,
    pub test_rows: Vec<usize>,
    pub selected_features: Vec<usize>,
}

/// Runs standardization and feature selection on the training rows, applies
/// them to all rows, and builds the designated graph from the reduced
/// features.
pub fn prepare_cell(
    features: &FeatureMatrix,
    phenotypes: &[PhenotypeRecord],
    test_mask: &[bool],
    graph_kind: GraphKind,
    cfg: &ExperimentConfig,
    noisy_seed: u64,
) -> Result<PreparedCell> {
    let n = features.num_subjects();
    if phenotypes.len() != n || test_mask.len() != n {
        return Err(Error::DimensionMismatch {
            what: "phenotypes/test mask vs feature rows",
            expected: n,
            got: phenotypes.len().min(test_mask.len()),
        });
    }

    let fit_rows: Vec<bool> = (0..n)
        .map(|i| phenotypes[i].label.is_some() && !test_mask[i])
        .collect();
    let (standardized, _) = standardize(features, &fit_rows)?;

    let target = cfg.effective_rfe_target(features.dim());
    let (selected_features, reduced) = if target >= features.dim() {
        ((0..features.dim()).collect(), standardized)
    } else {
        let fit_labels: Vec<Option<usize>> = (0..n)
            .map(|i| if fit_rows[i] { phenotypes[i].label } else { None })
            .collect();
        let mut rfe_cfg = cfg.rfe.clone();
        rfe_cfg.target_dim = target;
        rfe_select(&standardized, &fit_labels, &rfe_cfg)?
    };

    let graph = match graph_kind {
        GraphKind::Population => build_population_graph(&reduced, phenotypes, &cfg.similarity)?,
        GraphKind::Naive => naive_graph(n)?,
        GraphKind::Noisy => {
            let base = build_population_graph(&reduced, phenotypes, &cfg.similarity)?;
            noisy_graph(&base, cfg.noisy_drop, noisy_seed)?
        }
    };

    let mask = TrainMask {
        mask: fit_rows,
        labels: phenotypes.iter().map(|p| p.label.unwrap_or(0)).collect(),
    };
    let test_rows = (0..n).filter(|&i| test_mask[i]).collect();
    Ok(PreparedCell {
        reduced,
        graph,
        mask,
        test_rows,
        selected_features,
    })
}

/// One trained member: parameters, eval-mode probabilities on its graph,
/// and held-out accuracy.
#[derive(Debug, Clone)]
pub struct MemberOutcome {
    pub params: GcnnParams,
    pub probabilities: DenseMatrix,
    pub accuracy: f64,
}

/// Trains and scores one member (`index`) of the ensemble keyed by
/// `master_seed` on the given member graph. A single model is member 0 on
/// the unperturbed graph.
pub fn evaluate_member(
    prep: &PreparedCell,
    gcnn_cfg: &GcnnConfig,
    member_graph: &WeightedGraph,
    master_seed: u64,
    index: usize,
) -> Result<MemberOutcome> {
    let (params, _) = crate::ensemble::train_member(
        member_graph,
        &prep.reduced.values,
        &prep.mask,
        gcnn_cfg,
        master_seed,
        index,
    )?;
    let probabilities = gcnn::predict_proba(&params, member_graph, &prep.reduced.values, gcnn_cfg)
        .map_err(|e| Error::Member {
            index,
            source: alloc::boxed::Box::new(e),
        })?;
    let predicted: Vec<usize> = (0..probabilities.rows())
        .map(|i| row_argmax(probabilities.row(i)))
        .collect();
    let accuracy = accuracy_on(&predicted, &prep.mask.labels, &prep.test_rows);
    Ok(MemberOutcome {
        params,
        probabilities,
        accuracy,
    })
}

/// Fraction of `rows` where `predicted` matches `labels`.
pub fn accuracy_on(predicted: &[usize], labels: &[usize], rows: &[usize]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let correct = rows
        .iter()
        .filter(|&&i| predicted[i] == labels[i])
        .count();
    correct as f64 / rows.len() as f64
}

/// Trained models of one fold, exposed so callers can checkpoint them or
/// assert leakage properties.
#[derive(Debug, Clone)]
pub enum ModelSet {
    Single(GcnnParams),
    Ensemble(Vec<GcnnParams>),
}

#[derive(Debug, Clone)]
pub struct FoldEval {
    pub fold: usize,
    pub master_seed: u64,
    pub noisy_seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub accuracy: f64,
    pub member_accuracies: Vec<f64>,
    pub selected_features: Vec<usize>,
    pub models: ModelSet,
}

/// Evaluates one fold end to end.
pub fn evaluate_fold(
    features: &FeatureMatrix,
    phenotypes: &[PhenotypeRecord],
    job: &FoldJob,
    graph_kind: GraphKind,
    model_kind: ModelKind,
    cfg: &ExperimentConfig,
) -> Result<FoldEval> {
    let attach = |e: Error| Error::Fold {
        fold: job.fold,
        source: alloc::boxed::Box::new(e),
    };
    let prep = prepare_cell(features, phenotypes, &job.test_mask, graph_kind, cfg, job.noisy_seed)
        .map_err(attach)?;
    let n_train = prep.mask.masked_count();
    let n_test = prep.test_rows.len();

    let eval = match model_kind {
        ModelKind::Single => {
            let single =
                evaluate_member(&prep, &cfg.gcnn, &prep.graph, job.master_seed, 0).map_err(attach)?;
            FoldEval {
                fold: job.fold,
                master_seed: job.master_seed,
                noisy_seed: job.noisy_seed,
                n_train,
                n_test,
                accuracy: single.accuracy,
                member_accuracies: Vec::new(),
                selected_features: prep.selected_features.clone(),
                models: ModelSet::Single(single.params),
            }
        }
        ModelKind::Ensemble => {
            let mut ens_cfg = cfg.ensemble.clone();
            ens_cfg.master_seed = job.master_seed;
            let graphs = build_ensemble(&prep.graph, &ens_cfg).map_err(attach)?;
            let mut outcomes = Vec::with_capacity(graphs.len());
            for (index, member_graph) in graphs.iter().enumerate() {
                outcomes.push(
                    evaluate_member(&prep, &cfg.gcnn, member_graph, job.master_seed, index)
                        .map_err(attach)?,
                );
            }
            assemble_ensemble_eval(&prep, job, n_train, n_test, outcomes, ens_cfg.consensus)
                .map_err(attach)?
        }
    };
    Ok(eval)
}

/// Consensus step shared by the sequential and parallel fold runners.
pub fn assemble_ensemble_eval(
    prep: &PreparedCell,
    job: &FoldJob,
    n_train: usize,
    n_test: usize,
    outcomes: Vec<MemberOutcome>,
    rule: Consensus,
) -> Result<FoldEval> {
    let member_probs: Vec<DenseMatrix> =
        outcomes.iter().map(|o| o.probabilities.clone()).collect();
    let fused = consensus(&member_probs, rule)?;
    let accuracy = accuracy_on(&fused.predicted_labels, &prep.mask.labels, &prep.test_rows);
    Ok(FoldEval {
        fold: job.fold,
        master_seed: job.master_seed,
        noisy_seed: job.noisy_seed,
        n_train,
        n_test,
        accuracy,
        member_accuracies: outcomes.iter().map(|o| o.accuracy).collect(),
        selected_features: prep.selected_features.clone(),
        models: ModelSet::Ensemble(outcomes.into_iter().map(|o| o.params).collect()),
    })
}

/// Full config echo attached to every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub graph_kind: GraphKind,
    pub model_kind: ModelKind,
    pub k_folds: usize,
    pub seed: u64,
    pub noisy_drop: f64,
    pub similarity: SimilarityConfig,
    pub rfe: RfeConfig,
    pub rfe_target_effective: usize,
    pub gcnn: GcnnConfig,
    pub ensemble: Option<EnsembleConfig>,
    pub synthetic: Option<SyntheticSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub master_seed: u64,
    pub noisy_seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub accuracy: f64,
    pub member_accuracies: Vec<f64>,
}

/// Cross-validated result of one (graph kind, model kind) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub folds: Vec<FoldResult>,
    pub mean_accuracy: f64,
    /// Filled by callers that time the run; excluded from reproducibility
    /// comparisons.
    pub wall_clock_secs: f64,
}

/// Builds the report from fold evaluations (order by fold index is
/// enforced here, so parallel callers can pass results in any order).
pub fn assemble_run_report(
    graph_kind: GraphKind,
    model_kind: ModelKind,
    cfg: &ExperimentConfig,
    feature_dim: usize,
    synthetic: Option<&SyntheticSpec>,
    mut evals: Vec<FoldEval>,
) -> RunReport {
    evals.sort_by_key(|e| e.fold);
    let folds: Vec<FoldResult> = evals
        .iter()
        .map(|e| FoldResult {
            fold: e.fold,
            master_seed: e.master_seed,
            noisy_seed: e.noisy_seed,
            n_train: e.n_train,
            n_test: e.n_test,
            accuracy: e.accuracy,
            member_accuracies: e.member_accuracies.clone(),
        })
        .collect();
    let mean_accuracy = folds.iter().map(|f| f.accuracy).sum::<f64>() / folds.len().max(1) as f64;
    RunReport {
        config: ConfigEcho {
            graph_kind,
            model_kind,
            k_folds: cfg.k_folds,
            seed: cfg.seed,
            noisy_drop: cfg.noisy_drop,
            similarity: cfg.similarity.clone(),
            rfe: cfg.rfe.clone(),
            rfe_target_effective: cfg.effective_rfe_target(feature_dim),
            gcnn: cfg.gcnn.clone(),
            ensemble: match model_kind {
                ModelKind::Ensemble => Some(cfg.ensemble.clone()),
                ModelKind::Single => None,
            },
            synthetic: synthetic.cloned(),
        },
        folds,
        mean_accuracy,
        wall_clock_secs: 0.0,
    }
}

/// One cell of the Table-style matrix: k-fold cross-validation of the given
/// graph and model kind. Sequential reference implementation; the std
/// companion crate provides a parallel runner with identical results.
pub fn run_experiment(
    features: &FeatureMatrix,
    phenotypes: &[PhenotypeRecord],
    graph_kind: GraphKind,
    model_kind: ModelKind,
    cfg: &ExperimentConfig,
    synthetic: Option<&SyntheticSpec>,
) -> Result<RunReport> {
    cfg.validate()?;
    let jobs = plan_folds(phenotypes, cfg)?;
    let evals: Result<Vec<FoldEval>> = jobs
        .iter()
        .map(|job| evaluate_fold(features, phenotypes, job, graph_kind, model_kind, cfg))
        .collect();
    Ok(assemble_run_report(
        graph_kind,
        model_kind,
        cfg,
        features.dim(),
        synthetic,
        evals?,
    ))
}

/// One sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub ensemble_size: usize,
    pub edge_drop_p: f64,
    pub accuracy: f64,
    pub member_accuracies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub graph_kind: GraphKind,
    pub seed: u64,
    pub split_k: usize,
    pub consensus: Consensus,
    pub gcnn: GcnnConfig,
    /// The `P = 1, p = 0` reference cell.
    pub baseline: SweepCell,
    pub cells: Vec<SweepCell>,
    pub wall_clock_secs: f64,
}

/// A member to train during the sweep: dropout probability (by IEEE bits,
/// so identical probabilities share members across cells) and member index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SweepJob {
    pub p_bits: u64,
    pub member_index: usize,
}

/// Everything the sweep needs once the fixed split is prepared.
pub struct SweepPlan {
    pub prep: PreparedCell,
    pub split_master: u64,
    pub jobs: Vec<SweepJob>,
}

/// Plans the sweep on a fixed train/test split (fold 0 of the k-fold
/// split). Member jobs are deduplicated across cells: within one dropout
/// probability, a larger ensemble's members are a superset of a smaller
/// one's, so each (p, index) pair trains exactly once.
pub fn plan_sweep(
    features: &FeatureMatrix,
    phenotypes: &[PhenotypeRecord],
    graph_kind: GraphKind,
    ensemble_sizes: &[usize],
    drop_ps: &[f64],
    cfg: &ExperimentConfig,
) -> Result<SweepPlan> {
    cfg.validate()?;
    if ensemble_sizes.is_empty() || drop_ps.is_empty() {
        return Err(Error::InvalidConfig {
            what: String::from("sweep grids must be nonempty"),
        });
    }
    if ensemble_sizes.contains(&0) {
        return Err(Error::InvalidConfig {
            what: String::from("ensemble sizes must be >= 1"),
        });
    }
    for &p in drop_ps {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidConfig {
                what: format!("edge drop probability must lie in [0, 1], got {p}"),
            });
        }
    }

    let jobs_for = |p: f64, count: usize| {
        (0..count).map(move |member_index| SweepJob {
            p_bits: p.to_bits(),
            member_index,
        })
    };
    let max_size = *ensemble_sizes.iter().max().expect("nonempty");
    let mut jobs: Vec<SweepJob> = jobs_for(0.0, 1).collect(); // baseline
    for &p in drop_ps {
        jobs.extend(jobs_for(p, max_size));
    }
    jobs.sort();
    jobs.dedup();

    let mut fold_cfg = cfg.clone();
    fold_cfg.seed = cfg.seed;
    let jobs_folds = plan_folds(phenotypes, &fold_cfg)?;
    let fixed = &jobs_folds[0];
    let prep = prepare_cell(
        features,
        phenotypes,
        &fixed.test_mask,
        graph_kind,
        cfg,
        fixed.noisy_seed,
    )?;
    Ok(SweepPlan {
        prep,
        split_master: split_seed(cfg.seed, STREAM_SWEEP),
        jobs,
    })
}

/// Master seed of the sweep's per-probability member stream.
pub fn sweep_cell_master(split_master: u64, p: f64) -> u64 {
    split_seed(split_master, p.to_bits())
}

/// Trains one sweep member.
pub fn run_sweep_member(plan: &SweepPlan, cfg: &ExperimentConfig, job: &SweepJob) -> Result<MemberOutcome> {
    let p = f64::from_bits(job.p_bits);
    let master = sweep_cell_master(plan.split_master, p);
    let member_graph = crate::ensemble::edge_dropout(
        &plan.prep.graph,
        p,
        crate::ensemble::member_graph_seed(master, job.member_index),
    )?;
    evaluate_member(&plan.prep, &cfg.gcnn, &member_graph, master, job.member_index)
}

/// Gathers member outcomes into the cell grid. `outcomes` must align with
/// `plan.jobs`.
pub fn assemble_sweep(
    plan: &SweepPlan,
    cfg: &ExperimentConfig,
    graph_kind: GraphKind,
    ensemble_sizes: &[usize],
    drop_ps: &[f64],
    outcomes: &[MemberOutcome],
) -> Result<SweepReport> {
    if outcomes.len() != plan.jobs.len() {
        return Err(Error::DimensionMismatch {
            what: "sweep outcomes vs jobs",
            expected: plan.jobs.len(),
            got: outcomes.len(),
        });
    }
    let cell = |p: f64, size: usize| -> Result<SweepCell> {
        let mut members: Vec<(usize, &MemberOutcome)> = plan
            .jobs
            .iter()
            .zip(outcomes.iter())
            .filter(|(job, _)| job.p_bits == p.to_bits() && job.member_index < size)
            .map(|(job, o)| (job.member_index, o))
            .collect();
        members.sort_by_key(|&(idx, _)| idx);
        if members.len() != size {
            return Err(Error::DimensionMismatch {
                what: "sweep cell members",
                expected: size,
                got: members.len(),
            });
        }
        let probs: Vec<DenseMatrix> = members
            .iter()
            .map(|(_, o)| o.probabilities.clone())
            .collect();
        let fused = consensus(&probs, cfg.ensemble.consensus)?;
        let accuracy = accuracy_on(
            &fused.predicted_labels,
            &plan.prep.mask.labels,
            &plan.prep.test_rows,
        );
        Ok(SweepCell {
            ensemble_size: size,
            edge_drop_p: p,
            accuracy,
            member_accuracies: members.iter().map(|(_, o)| o.accuracy).collect(),
        })
    };

    let baseline = cell(0.0, 1)?;
    let mut cells = Vec::with_capacity(ensemble_sizes.len() * drop_ps.len());
    for &p in drop_ps {
        for &size in ensemble_sizes {
            cells.push(cell(p, size)?);
        }
    }
    Ok(SweepReport {
        graph_kind,
        seed: cfg.seed,
        split_k: cfg.k_folds,
        consensus: cfg.ensemble.consensus,
        gcnn: cfg.gcnn.clone(),
        baseline,
        cells,
        wall_clock_secs: 0.0,
    })
}

/// Full Cartesian sweep on the fixed split, sequential reference
/// implementation.
pub fn sweep(
    features: &FeatureMatrix,
    phenotypes: &[PhenotypeRecord],
    graph_kind: GraphKind,
    ensemble_sizes: &[usize],
    drop_ps: &[f64],
    cfg: &ExperimentConfig,
) -> Result<SweepReport> {
    let plan = plan_sweep(features, phenotypes, graph_kind, ensemble_sizes, drop_ps, cfg)?;
    let outcomes: Result<Vec<MemberOutcome>> = plan
        .jobs
        .iter()
        .map(|job| run_sweep_member(&plan, cfg, job))
        .collect();
    assemble_sweep(&plan, cfg, graph_kind, ensemble_sizes, drop_ps, &outcomes?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stratified_balanced_tiny_case() {
        // 5 + 5 subjects over 5 folds: exactly one of each class per fold.
        let labels = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let split = stratified_kfold(&labels, 5, 3).unwrap();
        for fold in 0..5 {
            let members: Vec<usize> = (0..10)
                .filter(|&i| split.assignments[i] == fold)
                .collect();
            assert_eq!(members.len(), 2);
            let classes: Vec<usize> = members.iter().map(|&i| labels[i]).collect();
            assert!(classes.contains(&0) && classes.contains(&1));
        }
    }

    #[test]
    fn leave_one_out_gives_singleton_folds() {
        let labels = [0, 1, 0, 1];
        let split = stratified_kfold(&labels, 4, 0).unwrap();
        let mut counts = [0usize; 4];
        for &f in &split.assignments {
            counts[f] += 1;
        }
        assert_eq!(counts, [1, 1, 1, 1]);
    }

    #[test]
    fn abide_scale_fold_sizes() {
        // 872 labeled subjects into 10 folds: sizes must be 87 or 88.
        let labels: Vec<usize> = (0..872).map(|i| i % 2).collect();
        let split = stratified_kfold(&labels, 10, 42).unwrap();
        let mut sizes = vec![0usize; 10];
        for &f in &split.assignments {
            sizes[f] += 1;
        }
        assert_eq!(sizes.iter().sum::<usize>(), 872);
        assert!(sizes.iter().all(|&s| s == 87 || s == 88), "{sizes:?}");
    }

    #[test]
    fn stratification_within_one_of_proportional() {
        let labels: Vec<usize> = (0..103).map(|i| usize::from(i % 3 == 0)).collect();
        let split = stratified_kfold(&labels, 7, 9).unwrap();
        let total_ones = labels.iter().filter(|&&l| l == 1).count();
        for fold in 0..7 {
            let members: Vec<usize> = (0..labels.len())
                .filter(|&i| split.assignments[i] == fold)
                .collect();
            let ones = members.iter().filter(|&&i| labels[i] == 1).count();
            let proportional = total_ones as f64 * members.len() as f64 / labels.len() as f64;
            assert!(
                (ones as f64 - proportional).abs() <= 1.0,
                "fold {fold}: {ones} vs {proportional}"
            );
        }
    }

    #[test]
    fn kfold_rejects_bad_k() {
        let labels = [0, 1, 0, 1];
        assert!(stratified_kfold(&labels, 0, 0).is_err());
        assert!(stratified_kfold(&labels, 5, 0).is_err());
    }

    #[test]
    fn cohort_generation_is_deterministic() {
        let spec = SyntheticSpec {
            num_subjects: 24,
            num_sites: 3,
            num_rois: 6,
            time_len: 20,
            ..Default::default()
        };
        let (ts_a, ph_a) = generate_synthetic_cohort(&spec).unwrap();
        let (ts_b, ph_b) = generate_synthetic_cohort(&spec).unwrap();
        assert_eq!(ph_a, ph_b);
        for (a, b) in ts_a.iter().zip(ts_b.iter()) {
            assert!(a.series.bits_eq(&b.series));
        }
        // And a different seed changes the data.
        let other = SyntheticSpec { seed: 1, ..spec };
        let (ts_c, _) = generate_synthetic_cohort(&other).unwrap();
        assert!(!ts_a[0].series.bits_eq(&ts_c[0].series));
    }

    #[test]
    fn cohort_spec_validation() {
        let mut spec = SyntheticSpec::default();
        spec.num_subjects = 10;
        assert!(generate_synthetic_cohort(&spec).is_err());
        let mut spec = SyntheticSpec::default();
        spec.noise_sd = 0.0;
        assert!(spec.validate().is_err());
        let mut spec = SyntheticSpec::default();
        spec.class_balance = 1.0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn effective_rfe_target_halves_small_inputs() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.effective_rfe_target(190), 95);
        assert_eq!(cfg.effective_rfe_target(6105), 2000);
        assert_eq!(cfg.effective_rfe_target(2), 1);
    }
}

//! Parallel execution of folds, ensemble members, and sweep cells.
//!
//! Every job is a pure function of derived seeds, so scheduling cannot
//! change results: outputs are collected by index and must be bit-identical
//! to the sequential reference runners in `popgcn_core::harness` for any
//! worker count.

use std::time::Instant;

use popgcn_core::ensemble::build_ensemble;
use popgcn_core::harness::{
    assemble_ensemble_eval, assemble_run_report, assemble_sweep, evaluate_member, plan_folds,
    plan_sweep, prepare_cell, run_sweep_member, ExperimentConfig, FoldEval, FoldJob, GraphKind,
    MemberOutcome, ModelKind, ModelSet, RunReport, SweepReport, SyntheticSpec,
};
use popgcn_core::population::PhenotypeRecord;
use popgcn_core::FeatureMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Builds a rayon pool with `workers` threads (`None` = one per core).
pub fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::Usage(format!("cannot build thread pool: {e}")))
}

/// One fold with ensemble members trained in parallel. Equivalent to
/// `popgcn_core::harness::evaluate_fold`.
pub fn evaluate_fold_parallel(
    features: &FeatureMatrix,
    phenotypes: &[PhenotypeRecord],
    job: &FoldJob,
    graph_kind: GraphKind,
    model_kind: ModelKind,
    cfg: &ExperimentConfig,
) -> Result<FoldEval> {
    let attach = |e: popgcn_core::Error| {
        Error::Core(popgcn_core::Error::Fold {
            fold: job.fold,
            source: Box::new(e),
        })
    };
    let prep = prepare_cell(
        features,
        phenotypes,
        &job.test_mask,
        graph_kind,
        cfg,
        job.noisy_seed,
    )
    .map_err(attach)?;
    let n_train = prep.mask.masked_count();
    let n_test = prep.test_rows.len();

    match model_kind {
        ModelKind::Single => {
            let single = evaluate_member(&prep, &cfg.gcnn, &prep.graph, job.master_seed, 0)
                .map_err(attach)?;
            Ok(FoldEval {
                fold: job.fold,
                master_seed: job.master_seed,
                noisy_seed: job.noisy_seed,
                n_train,
                n_test,
                accuracy: single.accuracy,
                member_accuracies: Vec::new(),
                selected_features: prep.selected_features.clone(),
                models: ModelSet::Single(single.params),
            })
        }
        ModelKind::Ensemble => {
            let mut ens_cfg = cfg.ensemble.clone();
            ens_cfg.master_seed = job.master_seed;
            let graphs = build_ensemble(&prep.graph, &ens_cfg).map_err(attach)?;
            let outcomes: Result<Vec<MemberOutcome>> = graphs
                .par_iter()
                .enumerate()
                .map(|(index, member_graph)| {
                    evaluate_member(&prep, &cfg.gcnn, member_graph, job.master_seed, index)
                        .map_err(attach)
                })
                .collect();
            assemble_ensemble_eval(&prep, job, n_train, n_test, outcomes?, ens_cfg.consensus)
                .map_err(attach)
        }
    }
}

/// One (graph kind, model kind) cell with folds and members in parallel.
pub fn run_experiment(
    features: &FeatureMatrix,
    phenotypes: &[PhenotypeRecord],
    graph_kind: GraphKind,
    model_kind: ModelKind,
    cfg: &ExperimentConfig,
    synthetic: Option<&SyntheticSpec>,
    pool: &rayon::ThreadPool,
) -> Result<RunReport> {
    cfg.validate().map_err(Error::Core)?;
    let start = Instant::now();
    let jobs = plan_folds(phenotypes, cfg).map_err(Error::Core)?;
    let evals: Result<Vec<FoldEval>> = pool.install(|| {
        jobs.par_iter()
            .map(|job| evaluate_fold_parallel(features, phenotypes, job, graph_kind, model_kind, cfg))
            .collect()
    });
    let mut report = assemble_run_report(
        graph_kind,
        model_kind,
        cfg,
        features.dim(),
        synthetic,
        evals?,
    );
    report.wall_clock_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Full sweep grid with members trained in parallel (shared across cells
/// within each dropout probability).
pub fn run_sweep(
    features: &FeatureMatrix,
    phenotypes: &[PhenotypeRecord],
    graph_kind: GraphKind,
    ensemble_sizes: &[usize],
    drop_ps: &[f64],
    cfg: &ExperimentConfig,
    pool: &rayon::ThreadPool,
) -> Result<SweepReport> {
    let start = Instant::now();
    let plan = plan_sweep(features, phenotypes, graph_kind, ensemble_sizes, drop_ps, cfg)
        .map_err(Error::Core)?;
    let outcomes: Result<Vec<MemberOutcome>> = pool.install(|| {
        plan.jobs
            .par_iter()
            .map(|job| run_sweep_member(&plan, cfg, job).map_err(Error::Core))
            .collect()
    });
    let mut report = assemble_sweep(&plan, cfg, graph_kind, ensemble_sizes, drop_ps, &outcomes?)
        .map_err(Error::Core)?;
    report.wall_clock_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

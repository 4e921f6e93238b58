//! Single model vs bootstrapped ensemble on synthetic cohorts.
//!
//! For each master seed: generate a cohort, hold out half the subjects by
//! stratified split, then compare a single network against the consensus of
//! an edge-dropout ensemble on the population, naive, and noisy graphs.
//!
//!     cargo run --release --example ensemble_lift [num_seeds]

use popgcn_core::harness::{
    connectivity_matrix, generate_synthetic_cohort, plan_folds, ExperimentConfig, GraphKind,
    ModelKind, SyntheticSpec,
};
use popgcn::runner::{evaluate_fold_parallel, thread_pool};

fn main() -> anyhow::Result<()> {
    let num_seeds: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(10);

    let pool = thread_pool(None)?;
    let mut wins = [0usize; 3];
    let mut rows = Vec::new();
    for seed in 0..num_seeds {
        let spec = SyntheticSpec {
            seed,
            ..Default::default()
        };
        let (cohort, phenotypes) = generate_synthetic_cohort(&spec)?;
        let features = connectivity_matrix(&cohort)?;
        let cfg = ExperimentConfig {
            k_folds: 2,
            seed,
            ..Default::default()
        };
        let job = &plan_folds(&phenotypes, &cfg)?[0];

        let mut row = Vec::new();
        for (col, graph_kind) in [GraphKind::Population, GraphKind::Naive, GraphKind::Noisy]
            .into_iter()
            .enumerate()
        {
            let (single, ensemble) = pool.install(|| -> popgcn::Result<(f64, f64)> {
                let s = evaluate_fold_parallel(
                    &features,
                    &phenotypes,
                    job,
                    graph_kind,
                    ModelKind::Single,
                    &cfg,
                )?;
                let e = evaluate_fold_parallel(
                    &features,
                    &phenotypes,
                    job,
                    graph_kind,
                    ModelKind::Ensemble,
                    &cfg,
                )?;
                Ok((s.accuracy, e.accuracy))
            })?;
            if ensemble > single {
                wins[col] += 1;
            }
            row.push((graph_kind, single, ensemble));
        }
        println!(
            "seed {seed}: population {:.3} -> {:.3} | naive {:.3} -> {:.3} | noisy {:.3} -> {:.3}",
            row[0].1, row[0].2, row[1].1, row[1].2, row[2].1, row[2].2
        );
        rows.push(row);
    }

    for (col, name) in ["population", "naive", "noisy"].iter().enumerate() {
        let mean_single: f64 =
            rows.iter().map(|r| r[col].1).sum::<f64>() / rows.len() as f64;
        let mean_ens: f64 = rows.iter().map(|r| r[col].2).sum::<f64>() / rows.len() as f64;
        println!(
            "{name}: single {mean_single:.4}, ensemble {mean_ens:.4}, ensemble wins {}/{}",
            wins[col],
            rows.len()
        );
    }
    Ok(())
}

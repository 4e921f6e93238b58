//! End-to-end properties of the training pipeline: determinism, seed
//! isolation, mask locality, and the degenerate-ensemble equivalence.

use popgcn_core::ensemble::{
    self, build_ensemble, consensus, edge_dropout, member_param_seed, Consensus, EnsembleConfig,
};
use popgcn_core::gcnn::{self, row_argmax, GcnnConfig, TrainMask};
use popgcn_core::harness::{
    self, evaluate_fold, plan_folds, ExperimentConfig, FoldJob, GraphKind, ModelKind, ModelSet,
    SyntheticSpec,
};
use popgcn_core::{DenseMatrix, WeightedGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_graph(n: usize, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < 0.4 {
                edges.push((i, j, 0.1 + rng.gen::<f64>()));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Edge dropout never adds edges, never changes surviving weights,
    /// never alters the node set.
    #[test]
    fn dropout_yields_subgraphs(n in 2usize..=30, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = random_graph(n, seed);
        let dropped = edge_dropout(&g, p, seed ^ 0x5eed).unwrap();
        prop_assert_eq!(dropped.num_nodes(), g.num_nodes());
        prop_assert!(dropped.num_edges() <= g.num_edges());
        let mut original = g.edges().iter();
        for e in dropped.edges() {
            // Each survivor appears in the original list, in order.
            prop_assert!(original.any(|o| o == e), "edge {:?} not in original", e);
        }
    }
}

fn small_instance(seed: u64) -> (WeightedGraph, DenseMatrix, TrainMask) {
    let n = 12;
    let g = random_graph(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xF00D);
    let mut x = DenseMatrix::zeros(n, 5);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 2;
        labels.push(class);
        let shift = if class == 1 { 0.8 } else { -0.8 };
        for v in x.row_mut(i).iter_mut() {
            *v = shift + rng.gen::<f64>() - 0.5;
        }
    }
    let mask = TrainMask {
        mask: (0..n).map(|i| i < 9).collect(),
        labels,
    };
    (g, x, mask)
}

fn small_cfg() -> GcnnConfig {
    GcnnConfig {
        layer_widths: vec![8, 6],
        chebyshev_order: 2,
        epochs: 40,
        seed: 5,
        ..Default::default()
    }
}

#[test]
fn degenerate_ensemble_reproduces_single_model_bitwise() {
    let (g, x, mask) = small_instance(41);
    let gcnn_cfg = small_cfg();
    let ens_cfg = EnsembleConfig {
        ensemble_size: 1,
        edge_drop_p: 0.0,
        master_seed: 99,
        consensus: Consensus::Mean,
    };

    let members = ensemble::train_ensemble(&g, &x, &mask, &gcnn_cfg, &ens_cfg).unwrap();
    assert_eq!(members.len(), 1);

    // The matched single model uses member 0's derived parameter seed.
    let mut single_cfg = gcnn_cfg.clone();
    single_cfg.seed = member_param_seed(ens_cfg.master_seed, 0);
    let (single_params, _) = gcnn::train(&g, &x, &mask, &single_cfg).unwrap();
    assert!(members[0].bits_eq(&single_params));

    let member_probs =
        ensemble::predict_members(std::slice::from_ref(&g), &members, &x, &gcnn_cfg).unwrap();
    let fused = consensus(&member_probs, Consensus::Mean).unwrap();
    let single_probs = gcnn::predict_proba(&single_params, &g, &x, &gcnn_cfg).unwrap();
    let single_labels: Vec<usize> = (0..x.rows())
        .map(|i| row_argmax(single_probs.row(i)))
        .collect();
    assert_eq!(fused.predicted_labels, single_labels);
}

#[test]
fn master_seed_isolates_and_reproduces_prediction_sets() {
    let (g, x, mask) = small_instance(7);
    let gcnn_cfg = small_cfg();
    let run = |master: u64| {
        let ens_cfg = EnsembleConfig {
            ensemble_size: 3,
            edge_drop_p: 0.4,
            master_seed: master,
            consensus: Consensus::Mean,
        };
        let graphs = build_ensemble(&g, &ens_cfg).unwrap();
        let params = ensemble::train_ensemble(&g, &x, &mask, &gcnn_cfg, &ens_cfg).unwrap();
        let probs = ensemble::predict_members(&graphs, &params, &x, &gcnn_cfg).unwrap();
        (graphs, consensus(&probs, ens_cfg.consensus).unwrap())
    };

    let (graphs_a, set_a) = run(1);
    let (graphs_b, set_b) = run(1);
    assert_eq!(graphs_a, graphs_b);
    assert!(set_a
        .fused_probabilities
        .bits_eq(&set_b.fused_probabilities));
    assert_eq!(set_a.predicted_labels, set_b.predicted_labels);
    for (ma, mb) in set_a
        .member_probabilities
        .iter()
        .zip(set_b.member_probabilities.iter())
    {
        assert!(ma.bits_eq(mb));
    }

    let (graphs_c, _) = run(2);
    assert_ne!(graphs_a, graphs_c, "different master seed, same members");
}

fn tiny_cohort(seed: u64) -> (popgcn_core::FeatureMatrix, Vec<popgcn_core::population::PhenotypeRecord>) {
    let spec = SyntheticSpec {
        num_subjects: 36,
        num_sites: 3,
        num_rois: 8,
        time_len: 40,
        seed,
        ..Default::default()
    };
    let (ts, phen) = harness::generate_synthetic_cohort(&spec).unwrap();
    (harness::connectivity_matrix(&ts).unwrap(), phen)
}

fn tiny_experiment_cfg() -> ExperimentConfig {
    ExperimentConfig {
        gcnn: GcnnConfig {
            layer_widths: vec![8],
            chebyshev_order: 2,
            epochs: 30,
            ..Default::default()
        },
        ensemble: EnsembleConfig {
            ensemble_size: 3,
            edge_drop_p: 0.3,
            ..Default::default()
        },
        k_folds: 3,
        seed: 11,
        ..Default::default()
    }
}

/// Altering held-out labels changes neither the feature selection nor the
/// trained parameters, bit for bit.
#[test]
fn held_out_labels_cannot_leak_into_training() {
    let (features, phenotypes) = tiny_cohort(13);
    let cfg = tiny_experiment_cfg();
    let jobs = plan_folds(&phenotypes, &cfg).unwrap();
    let job: &FoldJob = &jobs[0];

    let run = |phen: &[popgcn_core::population::PhenotypeRecord]| {
        evaluate_fold(&features, phen, job, GraphKind::Population, ModelKind::Ensemble, &cfg)
            .unwrap()
    };
    let base = run(&phenotypes);

    let mut flipped = phenotypes.clone();
    for (i, p) in flipped.iter_mut().enumerate() {
        if job.test_mask[i] {
            p.label = p.label.map(|l| 1 - l);
        }
    }
    let perturbed = run(&flipped);

    assert_eq!(base.selected_features, perturbed.selected_features);
    match (&base.models, &perturbed.models) {
        (ModelSet::Ensemble(a), ModelSet::Ensemble(b)) => {
            assert_eq!(a.len(), b.len());
            for (pa, pb) in a.iter().zip(b.iter()) {
                assert!(pa.bits_eq(pb), "trained parameters changed");
            }
        }
        _ => panic!("expected ensemble models"),
    }
    // Accuracy on the flipped fold is the complement; parameters identical.
    assert!((base.accuracy + perturbed.accuracy - 1.0).abs() < 1e-12);
}

/// The degenerate ensemble matches the single-model cell through the full
/// experiment runner as well.
#[test]
fn experiment_degenerate_ensemble_equals_single_cell() {
    let (features, phenotypes) = tiny_cohort(29);
    let mut cfg = tiny_experiment_cfg();
    cfg.ensemble.ensemble_size = 1;
    cfg.ensemble.edge_drop_p = 0.0;

    let single = harness::run_experiment(
        &features,
        &phenotypes,
        GraphKind::Population,
        ModelKind::Single,
        &cfg,
        None,
    )
    .unwrap();
    let degenerate = harness::run_experiment(
        &features,
        &phenotypes,
        GraphKind::Population,
        ModelKind::Ensemble,
        &cfg,
        None,
    )
    .unwrap();

    assert_eq!(single.mean_accuracy, degenerate.mean_accuracy);
    for (a, b) in single.folds.iter().zip(degenerate.folds.iter()) {
        assert_eq!(a.accuracy, b.accuracy);
    }
}

/// Reports are bit-reproducible across reruns (wall clock aside, which the
/// core runner leaves at zero).
#[test]
fn experiment_reports_are_reproducible() {
    let (features, phenotypes) = tiny_cohort(3);
    let cfg = tiny_experiment_cfg();
    let a = harness::run_experiment(
        &features,
        &phenotypes,
        GraphKind::Noisy,
        ModelKind::Single,
        &cfg,
        None,
    )
    .unwrap();
    let b = harness::run_experiment(
        &features,
        &phenotypes,
        GraphKind::Noisy,
        ModelKind::Single,
        &cfg,
        None,
    )
    .unwrap();
    assert_eq!(a, b);
    // Mean accuracy is the arithmetic mean of fold accuracies.
    let mean = a.folds.iter().map(|f| f.accuracy).sum::<f64>() / a.folds.len() as f64;
    assert!((a.mean_accuracy - mean).abs() < 1e-12);
}

/// The sweep's 1 x {0} grid reproduces the baseline cell exactly, and the
/// report covers the full grid.
#[test]
fn sweep_shapes_and_baseline_identity() {
    let (features, phenotypes) = tiny_cohort(17);
    let mut cfg = tiny_experiment_cfg();
    cfg.k_folds = 2;
    let report = harness::sweep(
        &features,
        &phenotypes,
        GraphKind::Population,
        &[1, 2],
        &[0.0, 0.25],
        &cfg,
    )
    .unwrap();
    assert_eq!(report.cells.len(), 4);
    let baseline_cell = report
        .cells
        .iter()
        .find(|c| c.ensemble_size == 1 && c.edge_drop_p == 0.0)
        .unwrap();
    assert_eq!(baseline_cell.accuracy, report.baseline.accuracy);
    assert_eq!(
        baseline_cell.member_accuracies,
        report.baseline.member_accuracies
    );
}

//! Command-line interface. Flags mirror the config fields one for one, and
//! every run echoes its full resolved configuration into the written
//! artifact (report or checkpoint).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use popgcn_core::ensemble::{
    build_ensemble, consensus, member_graph_seed, member_param_seed, Consensus, EnsembleConfig,
};
use popgcn_core::features::{rfe_select, standardize, RfeConfig};
use popgcn_core::gcnn::{self, GcnnConfig, LambdaMaxPolicy, TrainMask};
use popgcn_core::harness::{self, ExperimentConfig, GraphKind, ModelKind, SyntheticSpec};
use popgcn_core::population::{build_population_graph, naive_graph, PhenotypeRecord, SimilarityConfig};
use popgcn_core::{FeatureMatrix, WeightedGraph};

use crate::checkpoint::save_checkpoint;
use crate::error::{Error, Result};
use crate::formats::{
    read_features_csv, read_graph_csv, read_phenotypes_csv, write_cohort, write_features_csv,
    write_graph_csv, write_phenotypes_csv,
};
use crate::manifest::{save_manifest, EnsembleManifest, MemberEntry, MANIFEST_VERSION};
use crate::report::{
    read_report, write_report, ExperimentReport, ReportDoc, ReportFormat,
};
use crate::runner;

#[derive(Parser)]
#[command(name = "popgcn", version, about = "Population-graph spectral GCN ensembles")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic cohort: time series, manifest, phenotypes.
    Gen(GenArgs),
    /// Connectivity features from time series, standardized and reduced.
    Features(FeaturesArgs),
    /// Build the population graph from phenotypes and features.
    Graph(GraphArgs),
    /// Train a single model and write a checkpoint.
    Train(TrainArgs),
    /// Train a bootstrapped ensemble and write checkpoints plus manifest.
    Ensemble(EnsembleArgs),
    /// Run the cross-validated graph x model experiment matrix.
    Experiment(ExperimentArgs),
    /// Sweep ensemble size and edge-dropout probability on a fixed split.
    Sweep(SweepArgs),
    /// Convert a report file between formats.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 200)]
    subjects: usize,
    #[arg(long, default_value_t = 5)]
    sites: usize,
    #[arg(long, default_value_t = 20)]
    rois: usize,
    #[arg(long, default_value_t = 150)]
    time_len: usize,
    #[arg(long, default_value_t = SyntheticSpec::default().class_effect)]
    class_effect: f64,
    #[arg(long, default_value_t = SyntheticSpec::default().site_effect)]
    site_effect: f64,
    #[arg(long, default_value_t = SyntheticSpec::default().sex_effect)]
    sex_effect: f64,
    #[arg(long, default_value_t = 1.0)]
    noise_sd: f64,
    #[arg(long, default_value_t = 0.5)]
    class_balance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RfeArgs {
    #[arg(long, default_value_t = 2000)]
    target_dim: usize,
    #[arg(long, default_value_t = 0.1)]
    eliminate_fraction: f64,
    #[arg(long, default_value_t = 1e-2)]
    regularization: f64,
    #[arg(long, default_value_t = 200)]
    max_rounds: usize,
}

impl RfeArgs {
    fn to_config(&self) -> RfeConfig {
        RfeConfig {
            target_dim: self.target_dim,
            eliminate_fraction: self.eliminate_fraction,
            regularization: self.regularization,
            max_rounds: self.max_rounds,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    phenotypes: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    rfe: RfeArgs,
}

#[derive(Args)]
struct SimilarityArgs {
    #[arg(long, default_value_t = 2.0)]
    lambda1: f64,
    #[arg(long, default_value_t = 2.0)]
    lambda2: f64,
    #[arg(long, default_value_t = 0.0)]
    edge_threshold: f64,
}

impl SimilarityArgs {
    fn to_config(&self) -> SimilarityConfig {
        SimilarityConfig {
            lambda1: self.lambda1,
            lambda2: self.lambda2,
            edge_threshold: self.edge_threshold,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    phenotypes: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    similarity: SimilarityArgs,
}

#[derive(Args)]
struct GcnnArgs {
    /// Hidden layer widths, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![16, 16, 16])]
    layer_widths: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    chebyshev_order: usize,
    #[arg(long, default_value_t = 0.005)]
    learning_rate: f64,
    #[arg(long, default_value_t = 0.3)]
    unit_dropout: f64,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, default_value_t = 5e-4)]
    weight_decay: f64,
    #[arg(long, default_value_t = 2)]
    num_classes: usize,
    /// Spectral bound: a number, or `auto` for power iteration.
    #[arg(long, default_value = "2")]
    lambda_max: String,
}

impl GcnnArgs {
    fn to_config(&self, seed: u64) -> Result<GcnnConfig> {
        let lambda_max = match self.lambda_max.as_str() {
            "auto" => LambdaMaxPolicy::PowerIteration {
                iters: 10_000,
                tol: 1e-9,
            },
            value => LambdaMaxPolicy::Bound(value.parse::<f64>().map_err(|_| {
                Error::Usage(format!("--lambda-max must be a number or `auto`, got `{value}`"))
            })?),
        };
        Ok(GcnnConfig {
            layer_widths: self.layer_widths.clone(),
            chebyshev_order: self.chebyshev_order,
            learning_rate: self.learning_rate,
            unit_dropout: self.unit_dropout,
            epochs: self.epochs,
            weight_decay: self.weight_decay,
            seed,
            num_classes: self.num_classes,
            lambda_max,
        })
    }
}

#[derive(Args)]
struct GraphSource {
    /// Graph CSV produced by `popgcn graph`.
    #[arg(long, conflicts_with = "naive")]
    graph: Option<PathBuf>,
    /// Use the edgeless naive graph instead of a graph file.
    #[arg(long)]
    naive: bool,
}

impl GraphSource {
    fn load(&self, num_nodes: usize) -> Result<WeightedGraph> {
        match (&self.graph, self.naive) {
            (Some(path), false) => read_graph_csv(path, num_nodes),
            (None, true) => naive_graph(num_nodes).map_err(Error::Core),
            _ => Err(Error::Usage(
                "exactly one of --graph <path> or --naive is required".into(),
            )),
        }
    }
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    phenotypes: PathBuf,
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    gcnn: GcnnArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Checkpoint output path (JSON).
    #[arg(long)]
    checkpoint: PathBuf,
    /// Optional per-epoch curve CSV.
    #[arg(long)]
    curve_out: Option<PathBuf>,
}

#[derive(Args)]
struct EnsembleCliArgs {
    #[arg(long, default_value_t = 20)]
    ensemble_size: usize,
    #[arg(long, default_value_t = 0.3)]
    edge_drop_p: f64,
    #[arg(long, value_enum, default_value_t = ConsensusArg::Mean)]
    consensus: ConsensusArg,
}

impl EnsembleCliArgs {
    fn to_config(&self, master_seed: u64) -> EnsembleConfig {
        EnsembleConfig {
            ensemble_size: self.ensemble_size,
            edge_drop_p: self.edge_drop_p,
            master_seed,
            consensus: self.consensus.into(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConsensusArg {
    Mean,
    Max,
}

impl From<ConsensusArg> for Consensus {
    fn from(value: ConsensusArg) -> Self {
        match value {
            ConsensusArg::Mean => Consensus::Mean,
            ConsensusArg::Max => Consensus::Max,
        }
    }
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    phenotypes: PathBuf,
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    gcnn: GcnnArgs,
    #[command(flatten)]
    ensemble: EnsembleCliArgs,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKindArg {
    All,
    Population,
    Naive,
    Noisy,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKindArg {
    Both,
    Single,
    Ensemble,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for ReportFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    phenotypes: PathBuf,
    #[arg(long, value_enum, default_value_t = GraphKindArg::All)]
    graph_kind: GraphKindArg,
    #[arg(long, value_enum, default_value_t = ModelKindArg::Both)]
    model_kind: ModelKindArg,
    #[command(flatten)]
    similarity: SimilarityArgs,
    #[command(flatten)]
    rfe: RfeArgs,
    #[command(flatten)]
    gcnn: GcnnArgs,
    #[command(flatten)]
    ensemble: EnsembleCliArgs,
    #[arg(long, default_value_t = 0.3)]
    noisy_drop: f64,
    #[arg(long, default_value_t = 10)]
    k_folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    phenotypes: PathBuf,
    #[arg(long, value_enum, default_value_t = GraphKindArg::Population)]
    graph_kind: GraphKindArg,
    /// Ensemble sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![5, 10, 20])]
    ensemble_sizes: Vec<usize>,
    /// Edge-dropout probabilities, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.2, 0.3])]
    edge_drop_ps: Vec<f64>,
    #[command(flatten)]
    similarity: SimilarityArgs,
    #[command(flatten)]
    rfe: RfeArgs,
    #[command(flatten)]
    gcnn: GcnnArgs,
    #[arg(long, value_enum, default_value_t = ConsensusArg::Mean)]
    consensus: ConsensusArg,
    #[arg(long, default_value_t = 10)]
    k_folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct ReportArgs {
    /// Input report (JSON).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: FormatArg,
    #[arg(long)]
    out: PathBuf,
}

pub fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Gen(args) => cmd_gen(args),
        Command::Features(args) => cmd_features(args),
        Command::Graph(args) => cmd_graph(args),
        Command::Train(args) => cmd_train(args),
        Command::Ensemble(args) => cmd_ensemble(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let spec = SyntheticSpec {
        num_subjects: args.subjects,
        num_sites: args.sites,
        num_rois: args.rois,
        time_len: args.time_len,
        class_effect: args.class_effect,
        site_effect: args.site_effect,
        sex_effect: args.sex_effect,
        noise_sd: args.noise_sd,
        class_balance: args.class_balance,
        seed: args.seed,
    };
    let (cohort, phenotypes) = harness::generate_synthetic_cohort(&spec)?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;
    let ts_dir = args.out_dir.join("timeseries");
    let manifest = write_cohort(&ts_dir, "manifest.csv", &cohort)?;
    write_phenotypes_csv(&args.out_dir.join("phenotypes.csv"), &phenotypes)?;
    let spec_path = args.out_dir.join("synthetic_spec.json");
    let file = std::fs::File::create(&spec_path).map_err(|e| Error::io(&spec_path, e))?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &spec).map_err(|e| Error::Json {
        path: spec_path.clone(),
        source: e,
    })?;
    println!(
        "generated {} subjects ({} sites, {} ROIs, T={}) under {}",
        spec.num_subjects,
        spec.num_sites,
        spec.num_rois,
        spec.time_len,
        args.out_dir.display()
    );
    println!("manifest: {}", manifest.display());
    Ok(())
}

/// Subjects in the manifest and the phenotype file must agree in order.
fn check_alignment(ids: &[String], phenotypes: &[PhenotypeRecord]) -> Result<()> {
    if ids.len() != phenotypes.len() {
        return Err(Error::Usage(format!(
            "{} subjects in features/manifest but {} phenotype rows",
            ids.len(),
            phenotypes.len()
        )));
    }
    for (i, (id, p)) in ids.iter().zip(phenotypes.iter()).enumerate() {
        if *id != p.subject_id {
            return Err(Error::Usage(format!(
                "row {i}: subject `{id}` in features/manifest but `{}` in phenotypes",
                p.subject_id
            )));
        }
    }
    Ok(())
}

fn load_connectivity(manifest: &Path, phenotypes: &[PhenotypeRecord]) -> Result<FeatureMatrix> {
    let cohort = crate::formats::load_cohort(manifest)?;
    let ids: Vec<String> = cohort.iter().map(|ts| ts.subject_id.clone()).collect();
    check_alignment(&ids, phenotypes)?;
    harness::connectivity_matrix(&cohort).map_err(Error::Core)
}

fn cmd_features(args: FeaturesArgs) -> Result<()> {
    let phenotypes = read_phenotypes_csv(&args.phenotypes)?;
    let raw = load_connectivity(&args.manifest, &phenotypes)?;
    let labeled: Vec<bool> = phenotypes.iter().map(|p| p.label.is_some()).collect();
    let (standardized, _) = standardize(&raw, &labeled)?;

    let cfg = args.rfe.to_config();
    let (selected, reduced) = if cfg.target_dim >= standardized.dim() {
        ((0..standardized.dim()).collect::<Vec<_>>(), standardized)
    } else {
        let labels: Vec<Option<usize>> = phenotypes.iter().map(|p| p.label).collect();
        rfe_select(&standardized, &labels, &cfg)?
    };

    let ids: Vec<String> = phenotypes.iter().map(|p| p.subject_id.clone()).collect();
    write_features_csv(&args.out, &ids, &reduced)?;
    println!(
        "{} subjects, {} -> {} features ({} selected), wrote {}",
        reduced.num_subjects(),
        raw.dim(),
        reduced.dim(),
        selected.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_graph(args: GraphArgs) -> Result<()> {
    let phenotypes = read_phenotypes_csv(&args.phenotypes)?;
    let (ids, features) = read_features_csv(&args.features)?;
    check_alignment(&ids, &phenotypes)?;
    let graph = build_population_graph(&features, &phenotypes, &args.similarity.to_config())?;
    write_graph_csv(&args.out, &graph)?;
    println!(
        "population graph: {} nodes, {} edges, wrote {}",
        graph.num_nodes(),
        graph.num_edges(),
        args.out.display()
    );
    Ok(())
}

fn labeled_mask(phenotypes: &[PhenotypeRecord]) -> TrainMask {
    TrainMask {
        mask: phenotypes.iter().map(|p| p.label.is_some()).collect(),
        labels: phenotypes.iter().map(|p| p.label.unwrap_or(0)).collect(),
    }
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let phenotypes = read_phenotypes_csv(&args.phenotypes)?;
    let (ids, features) = read_features_csv(&args.features)?;
    check_alignment(&ids, &phenotypes)?;
    let graph = args.source.load(features.num_subjects())?;
    let cfg = args.gcnn.to_config(args.seed)?;
    let mask = labeled_mask(&phenotypes);

    let (params, curve) = gcnn::train(&graph, &features.values, &mask, &cfg)?;
    save_checkpoint(&args.checkpoint, &cfg, &params)?;
    if let Some(curve_path) = &args.curve_out {
        let mut body = String::from("epoch,loss,train_accuracy\n");
        for stat in &curve {
            body.push_str(&format!("{},{},{}\n", stat.epoch, stat.loss, stat.train_accuracy));
        }
        std::fs::write(curve_path, body).map_err(|e| Error::io(curve_path, e))?;
    }
    let last = curve.last().expect("epochs >= 1");
    println!(
        "trained {} epochs: loss {:.6}, train accuracy {:.4}, checkpoint {}",
        last.epoch,
        last.loss,
        last.train_accuracy,
        args.checkpoint.display()
    );
    Ok(())
}

fn cmd_ensemble(args: EnsembleArgs) -> Result<()> {
    let phenotypes = read_phenotypes_csv(&args.phenotypes)?;
    let (ids, features) = read_features_csv(&args.features)?;
    check_alignment(&ids, &phenotypes)?;
    let graph = args.source.load(features.num_subjects())?;
    let gcnn_cfg = args.gcnn.to_config(args.master_seed)?;
    let ens_cfg = args.ensemble.to_config(args.master_seed);
    let mask = labeled_mask(&phenotypes);

    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;
    let pool = runner::thread_pool(args.workers)?;
    let graphs = build_ensemble(&graph, &ens_cfg)?;
    let params: Result<Vec<_>> = pool.install(|| {
        use rayon::prelude::*;
        graphs
            .par_iter()
            .enumerate()
            .map(|(index, g)| {
                popgcn_core::ensemble::train_member(
                    g,
                    &features.values,
                    &mask,
                    &gcnn_cfg,
                    ens_cfg.master_seed,
                    index,
                )
                .map(|(p, _)| p)
                .map_err(Error::Core)
            })
            .collect()
    });
    let params = params?;

    let mut members = Vec::with_capacity(params.len());
    for (index, p) in params.iter().enumerate() {
        let file = format!("member_{index:03}.json");
        let mut member_cfg = gcnn_cfg.clone();
        member_cfg.seed = member_param_seed(ens_cfg.master_seed, index);
        save_checkpoint(&args.out_dir.join(&file), &member_cfg, p)?;
        members.push(MemberEntry {
            index,
            graph_seed: member_graph_seed(ens_cfg.master_seed, index),
            param_seed: member_param_seed(ens_cfg.master_seed, index),
            checkpoint: file,
        });
    }
    save_manifest(
        &args.out_dir.join("manifest.json"),
        &EnsembleManifest {
            format_version: MANIFEST_VERSION,
            master_seed: ens_cfg.master_seed,
            ensemble_size: ens_cfg.ensemble_size,
            edge_drop_p: ens_cfg.edge_drop_p,
            consensus: ens_cfg.consensus,
            members,
        },
    )?;

    let member_probs =
        popgcn_core::ensemble::predict_members(&graphs, &params, &features.values, &gcnn_cfg)?;
    let fused = consensus(&member_probs, ens_cfg.consensus)?;
    let pred_path = args.out_dir.join("predictions.csv");
    let mut body = String::from("subject_id");
    for c in 0..gcnn_cfg.num_classes {
        body.push_str(&format!(",prob_{c}"));
    }
    body.push_str(",predicted\n");
    for (i, id) in ids.iter().enumerate() {
        body.push_str(id);
        for v in fused.fused_probabilities.row(i) {
            body.push_str(&format!(",{v}"));
        }
        body.push_str(&format!(",{}\n", fused.predicted_labels[i]));
    }
    std::fs::write(&pred_path, body).map_err(|e| Error::io(&pred_path, e))?;

    println!(
        "trained {} members (p = {}), outputs under {}",
        ens_cfg.ensemble_size,
        ens_cfg.edge_drop_p,
        args.out_dir.display()
    );
    Ok(())
}

fn experiment_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        similarity: args.similarity.to_config(),
        rfe: args.rfe.to_config(),
        gcnn: args.gcnn.to_config(args.seed)?,
        ensemble: args.ensemble.to_config(args.seed),
        noisy_drop: args.noisy_drop,
        k_folds: args.k_folds,
        seed: args.seed,
    })
}

fn cmd_experiment(args: ExperimentArgs) -> Result<()> {
    let phenotypes = read_phenotypes_csv(&args.phenotypes)?;
    let features = load_connectivity(&args.manifest, &phenotypes)?;
    let cfg = experiment_config(&args)?;

    let graph_kinds: Vec<GraphKind> = match args.graph_kind {
        GraphKindArg::All => vec![GraphKind::Population, GraphKind::Naive, GraphKind::Noisy],
        GraphKindArg::Population => vec![GraphKind::Population],
        GraphKindArg::Naive => vec![GraphKind::Naive],
        GraphKindArg::Noisy => vec![GraphKind::Noisy],
    };
    let model_kinds: Vec<ModelKind> = match args.model_kind {
        ModelKindArg::Both => vec![ModelKind::Single, ModelKind::Ensemble],
        ModelKindArg::Single => vec![ModelKind::Single],
        ModelKindArg::Ensemble => vec![ModelKind::Ensemble],
    };

    let pool = runner::thread_pool(args.workers)?;
    let start = std::time::Instant::now();
    let mut cells = Vec::new();
    for &graph_kind in &graph_kinds {
        for &model_kind in &model_kinds {
            let report = runner::run_experiment(
                &features,
                &phenotypes,
                graph_kind,
                model_kind,
                &cfg,
                None,
                &pool,
            )?;
            println!(
                "graph={graph_kind} model={model_kind}: mean accuracy {:.4} over {} folds",
                report.mean_accuracy, cfg.k_folds
            );
            cells.push(report);
        }
    }
    let doc = ReportDoc::Experiment(ExperimentReport {
        cells,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    });
    write_report(&doc, &args.out, args.format.into())?;
    println!("report: {}", args.out.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let phenotypes = read_phenotypes_csv(&args.phenotypes)?;
    let features = load_connectivity(&args.manifest, &phenotypes)?;
    let cfg = ExperimentConfig {
        similarity: args.similarity.to_config(),
        rfe: args.rfe.to_config(),
        gcnn: args.gcnn.to_config(args.seed)?,
        ensemble: EnsembleConfig {
            consensus: args.consensus.into(),
            master_seed: args.seed,
            ..Default::default()
        },
        noisy_drop: 0.3,
        k_folds: args.k_folds,
        seed: args.seed,
    };
    let graph_kind = match args.graph_kind {
        GraphKindArg::All => {
            return Err(Error::Usage("sweep needs a single --graph-kind".into()))
        }
        GraphKindArg::Population => GraphKind::Population,
        GraphKindArg::Naive => GraphKind::Naive,
        GraphKindArg::Noisy => GraphKind::Noisy,
    };

    let pool = runner::thread_pool(args.workers)?;
    let report = runner::run_sweep(
        &features,
        &phenotypes,
        graph_kind,
        &args.ensemble_sizes,
        &args.edge_drop_ps,
        &cfg,
        &pool,
    )?;
    println!(
        "baseline (P=1, p=0): {:.4}; best cell: {:.4}",
        report.baseline.accuracy,
        report
            .cells
            .iter()
            .map(|c| c.accuracy)
            .fold(f64::NEG_INFINITY, f64::max)
    );
    write_report(&ReportDoc::Sweep(report), &args.out, args.format.into())?;
    println!("report: {}", args.out.display());
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let report = read_report(&args.input)?;
    write_report(&report.doc, &args.out, args.format.into())?;
    println!("wrote {}", args.out.display());
    Ok(())
}

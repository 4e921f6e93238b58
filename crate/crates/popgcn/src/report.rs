//! Report files. JSON carries the full nested report behind a schema
//! version; CSV flattens to one row per (graph kind, model kind, fold) for
//! run/experiment reports and one row per cell for sweep reports. JSON
//! round-trips to an equal report (floats are written shortest-exact).

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use popgcn_core::harness::{RunReport, SweepReport};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// The Table-style 3 x 2 matrix (or any subset of it).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub cells: Vec<RunReport>,
    pub wall_clock_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "report", rename_all = "snake_case")]
pub enum ReportDoc {
    Run(RunReport),
    Experiment(ExperimentReport),
    Sweep(SweepReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub doc: ReportDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

pub fn write_report(doc: &ReportDoc, path: &Path, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Json => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let wrapped = ReportFile {
                schema_version: REPORT_SCHEMA_VERSION,
                doc: doc.clone(),
            };
            serde_json::to_writer_pretty(BufWriter::new(file), &wrapped).map_err(|e| {
                Error::Json {
                    path: path.to_path_buf(),
                    source: e,
                }
            })
        }
        ReportFormat::Csv => write_csv(doc, path),
    }
}

pub fn read_report(path: &Path) -> Result<ReportFile> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let report: ReportFile =
        serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })?;
    if report.schema_version != REPORT_SCHEMA_VERSION {
        return Err(Error::format(
            path,
            0,
            format!(
                "unsupported report schema {} (expected {REPORT_SCHEMA_VERSION})",
                report.schema_version
            ),
        ));
    }
    Ok(report)
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

fn write_csv(doc: &ReportDoc, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut emit = |line: String| {
        out.write_all(line.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))
    };

    match doc {
        ReportDoc::Run(run) => {
            emit(run_csv_header().to_string())?;
            for line in run_csv_rows(run) {
                emit(line)?;
            }
        }
        ReportDoc::Experiment(exp) => {
            emit(run_csv_header().to_string())?;
            for run in &exp.cells {
                for line in run_csv_rows(run) {
                    emit(line)?;
                }
            }
        }
        ReportDoc::Sweep(sweep) => {
            emit("graph_kind,ensemble_size,edge_drop_p,accuracy,mean_member_accuracy,seed".into())?;
            let mut rows = vec![&sweep.baseline];
            rows.extend(sweep.cells.iter());
            for cell in rows {
                let mm = mean(&cell.member_accuracies)
                    .map(|m| m.to_string())
                    .unwrap_or_default();
                emit(format!(
                    "{},{},{},{},{mm},{}",
                    sweep.graph_kind, cell.ensemble_size, cell.edge_drop_p, cell.accuracy, sweep.seed
                ))?;
            }
        }
    }
    out.flush().map_err(|e| Error::io(path, e))
}

fn run_csv_header() -> &'static str {
    "graph_kind,model_kind,fold,n_train,n_test,accuracy,mean_member_accuracy,seed"
}

fn run_csv_rows(run: &RunReport) -> Vec<String> {
    run.folds
        .iter()
        .map(|f| {
            let mm = mean(&f.member_accuracies)
                .map(|m| m.to_string())
                .unwrap_or_default();
            format!(
                "{},{},{},{},{},{},{mm},{}",
                run.config.graph_kind,
                run.config.model_kind,
                f.fold,
                f.n_train,
                f.n_test,
                f.accuracy,
                run.config.seed
            )
        })
        .collect()
}

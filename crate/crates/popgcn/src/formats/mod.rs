//! File formats: graph CSV, phenotype CSV, ROI time-series CSV with its
//! manifest, and the feature-matrix CSV.
//!
//! All CSV is UTF-8 with LF line endings and a header row (time-series
//! files excepted, which are bare `R x T` number grids).

mod features_csv;
mod graph_csv;
mod phenotypes;
mod timeseries;

pub use features_csv::{read_features_csv, write_features_csv};
pub use graph_csv::{read_graph_csv, write_graph_csv};
pub use phenotypes::{read_phenotypes_csv, write_phenotypes_csv};
pub use timeseries::{
    load_cohort, read_manifest_csv, read_timeseries_csv, write_cohort, write_manifest_csv,
    write_timeseries_csv,
};

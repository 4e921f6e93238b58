//! Ensemble manifest: master seed, grid parameters, consensus rule, and the
//! per-member derived seeds with their checkpoint paths.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use popgcn_core::ensemble::Consensus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub format_version: u32,
    pub master_seed: u64,
    pub ensemble_size: usize,
    pub edge_drop_p: f64,
    pub consensus: Consensus,
    pub members: Vec<MemberEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberEntry {
    pub index: usize,
    pub graph_seed: u64,
    pub param_seed: u64,
    /// Checkpoint path relative to the manifest's directory.
    pub checkpoint: String,
}

pub fn save_manifest(path: &Path, manifest: &EnsembleManifest) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer_pretty(BufWriter::new(file), manifest).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn load_manifest(path: &Path) -> Result<EnsembleManifest> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let manifest: EnsembleManifest =
        serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })?;
    if manifest.format_version != MANIFEST_VERSION {
        return Err(Error::format(
            path,
            0,
            format!(
                "unsupported manifest version {} (expected {MANIFEST_VERSION})",
                manifest.format_version
            ),
        ));
    }
    Ok(manifest)
}

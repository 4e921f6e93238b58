//! Parameter checkpoints: a single self-describing JSON file with a format
//! version, the full config echo, layer shapes, and row-major parameter
//! arrays.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use popgcn_core::gcnn::{GcnnConfig, GcnnParams, LayerParams};
use popgcn_core::DenseMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct CheckpointFile {
    pub format_version: u32,
    pub config: GcnnConfig,
    pub input_dim: usize,
    pub layers: Vec<LayerCheckpoint>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LayerCheckpoint {
    pub in_dim: usize,
    pub out_dim: usize,
    /// K+1 slices, each `in_dim * out_dim` values in row-major order.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

pub fn save_checkpoint(path: &Path, config: &GcnnConfig, params: &GcnnParams) -> Result<()> {
    let layers = params
        .layers
        .iter()
        .map(|l| LayerCheckpoint {
            in_dim: l.in_dim(),
            out_dim: l.out_dim(),
            weights: l.weights.iter().map(|w| w.data().to_vec()).collect(),
            bias: l.bias.clone(),
        })
        .collect();
    let doc = CheckpointFile {
        format_version: CHECKPOINT_VERSION,
        config: config.clone(),
        input_dim: params.input_dim(),
        layers,
    };
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &doc).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn load_checkpoint(path: &Path) -> Result<(GcnnConfig, GcnnParams)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let doc: CheckpointFile =
        serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Json {
            path: path.to_path_buf(),
            source: e,
        })?;
    if doc.format_version != CHECKPOINT_VERSION {
        return Err(Error::format(
            path,
            0,
            format!(
                "unsupported checkpoint version {} (expected {CHECKPOINT_VERSION})",
                doc.format_version
            ),
        ));
    }
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (idx, l) in doc.layers.into_iter().enumerate() {
        let mut weights = Vec::with_capacity(l.weights.len());
        for slice in l.weights {
            if slice.len() != l.in_dim * l.out_dim {
                return Err(Error::format(
                    path,
                    0,
                    format!(
                        "layer {idx}: weight slice has {} values, expected {}",
                        slice.len(),
                        l.in_dim * l.out_dim
                    ),
                ));
            }
            weights.push(DenseMatrix::from_vec(l.in_dim, l.out_dim, slice));
        }
        if l.bias.len() != l.out_dim {
            return Err(Error::format(
                path,
                0,
                format!("layer {idx}: bias mismatch"),
            ));
        }
        layers.push(LayerParams {
            weights,
            bias: l.bias,
        });
    }
    Ok((doc.config, GcnnParams { layers }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use tempfile::tempdir;

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let cfg = GcnnConfig {
            layer_widths: vec![5, 4],
            chebyshev_order: 2,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let params = GcnnParams::glorot_init(&cfg, 7, &mut rng);
        let dir = tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_checkpoint(&path, &cfg, &params).unwrap();
        let (cfg_back, params_back) = load_checkpoint(&path).unwrap();
        assert_eq!(cfg_back, cfg);
        assert!(params_back.bits_eq(&params));
    }
}

//! Run records written by `--record`.

use serde::Serialize;
use sha2::{Digest, Sha256};

use qplane_core::ToleranceConfig;

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: Vec<String>,
    /// SHA-256 over the input files in argument order, each prefixed by its
    /// length so that concatenations cannot collide.
    pub inputs_digest: String,
    pub outputs: serde_json::Value,
    pub tolerances: ToleranceConfig,
    pub timings: Timings,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

pub fn digest(inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

//! Run manifest: every resolved setting plus provenance, so a run is
//! reproducible from the manifest alone. The timestamp is informational
//! and excluded from determinism comparisons.

use serde::{Deserialize, Serialize};

use crate::sweep::PointFailure;

/// Manifest written next to every output family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    /// Manifest schema version.
    pub schema_version: u32,
    /// Unix timestamp of creation (informational only).
    pub created_unix: u64,
    /// Version of the binary that produced the outputs.
    pub code_version: String,
    /// What produced this: `run:<model>` or `preset:<name>`.
    pub kind: String,
    /// SHA-256 over the canonical resolved configuration.
    pub config_hash: String,
    /// The fully resolved configuration or preset parameters.
    pub config: serde_json::Value,
    /// Output files, in creation order.
    pub outputs: Vec<String>,
    /// Total parameter points.
    pub points_total: usize,
    /// Failed points with causes.
    pub failures: Vec<PointFailure>,
    /// Free-form notes (unit conventions, normalizations).
    pub notes: Vec<String>,
}

impl Manifest {
    /// Assemble a manifest with the current timestamp.
    pub fn new(
        kind: String,
        config_hash: String,
        config: serde_json::Value,
        outputs: Vec<String>,
        points_total: usize,
        failures: Vec<PointFailure>,
    ) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            schema_version: 1,
            created_unix,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            kind,
            config_hash,
            config,
            outputs,
            points_total,
            failures,
            notes: Vec::new(),
        }
    }

    /// Attach a note.
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Write pretty JSON.
    pub fn write_to(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self).expect("manifest serializes"))
    }
}

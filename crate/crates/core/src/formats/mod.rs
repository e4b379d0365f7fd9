//! Deterministic on-disk formats: run configuration, CSV tables, and their
//! JSON mirrors.
//!
//! Every data file starts with an echo of the fully resolved configuration
//! plus a content hash of that echo, so results are traceable to their inputs
//! without embedding wall-clock noise. Floats are printed with 17 significant
//! digits, which round-trips `f64` exactly; the bundled readers reparse every
//! file this module writes back to identical in-memory values.

pub mod config;
pub mod csv;
pub mod json;

pub use config::{parse_config, CommandKind, Family, OutputFormat, RunConfig};
pub use csv::{BoundRow, FieldRow, StripRow, SweepRow, SweepStatus, TableDoc, TrajectoryRow};

use sha2::{Digest, Sha256};

/// Formats a float with 17 significant digits (`5.0000000000000000e-1`),
/// enough for exact `f64` round-tripping; non-finite values print as
/// `inf`/`-inf`/`nan`, which `f64::from_str` accepts back.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Header of every output document: the resolved configuration plus
/// run-specific metadata (outcome, summary figures).
///
/// The echo order is fixed and the hash covers only the command and
/// configuration — not the metadata — so reruns of one configuration carry
/// one hash regardless of outcome.
#[derive(Debug, Clone)]
pub struct DocHeader {
    pub config: RunConfig,
    extra: Vec<(String, String)>,
}

impl DocHeader {
    pub fn new(config: RunConfig) -> Self {
        DocHeader {
            config,
            extra: Vec::new(),
        }
    }

    /// Attaches a metadata entry; entries are emitted sorted by key after the
    /// configuration echo.
    pub fn push_extra(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.extra.push((key.into(), value.into()));
    }

    /// All header entries in emission order: `command`, the configuration
    /// echo, then metadata sorted by key.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut out = vec![(
            "command".to_string(),
            self.config.command.as_str().to_string(),
        )];
        for (k, v) in self.config.echo_entries() {
            out.push((k.to_string(), v));
        }
        let mut extra = self.extra.clone();
        extra.sort();
        out.extend(extra);
        out
    }

    /// Hex SHA-256 of the `key = value` lines for the command and
    /// configuration echo.
    pub fn config_sha256(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("command = {}\n", self.config.command.as_str()));
        for (k, v) in self.config.echo_entries() {
            hasher.update(format!("{k} = {v}\n"));
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

//! Event log of a clustering run.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::DualState;
use crate::graph::EdgeId;
use crate::rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Grow,
    Merge,
    Death,
    Prune,
}

/// One event. `clusters` lists the grown clusters for `grow` and
/// `[left, right, new]` for `merge`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step: usize,
    pub kind: TraceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clusters: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<EdgeId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub demands: Vec<usize>,
    /// SHA-256 of the dual after the event.
    pub y_hash: String,
}

/// Hex SHA-256 over the canonical text of every nonzero dual entry.
pub fn y_hash(dual: &DualState) -> String {
    let mut hasher = Sha256::new();
    for ((c, d), v) in &dual.entries {
        hasher.update(format!("{c}:{d}={};", rational::format_fraction(v)).as_bytes());
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

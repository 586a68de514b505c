//! Machine-readable run report: every command that scores something writes
//! the same envelope so downstream tooling can consume one schema.

use std::fs;
use std::path::Path;

use anyhow::Context as _;
use serde::Serialize;

use crate::commands::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Wall-clock compute time (I/O excluded), milliseconds.
#[derive(Debug, Serialize)]
pub struct Timing {
    pub per_item_ms: Vec<f64>,
    pub total_ms: f64,
}

impl Timing {
    pub fn from_items(per_item_ms: Vec<f64>) -> Self {
        let total_ms = per_item_ms.iter().sum();
        Timing {
            per_item_ms,
            total_ms,
        }
    }
}

/// Report envelope: the params echo makes every run reproducible from the
/// report alone, and `aggregate` holds recomputed means over `per_item`.
#[derive(Debug, Serialize)]
pub struct EvalRunReport<P, I, A> {
    pub tool_version: &'static str,
    pub params: P,
    pub per_item: Vec<I>,
    pub aggregate: A,
    pub timing: Timing,
}

pub fn write_report<P: Serialize, I: Serialize, A: Serialize>(
    report: &EvalRunReport<P, I, A>,
    path: &Path,
) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report)
        .context("serializing report")
        .map_err(CliError::Runtime)?;
    text.push('\n');
    fs::write(path, text)
        .with_context(|| format!("writing report {}", path.display()))
        .map_err(CliError::Runtime)
}

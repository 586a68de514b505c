use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, Context as _};
use crackeval_core::{
    class_weights, confusion, metrics, ClassWeights, ClsMetrics, ConfusionMatrix, Label, Manifest,
    Split,
};
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::report::{write_report, EvalRunReport, Timing, TOOL_VERSION};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Split manifest JSON (as written by `crackeval split`).
    #[arg(long)]
    manifest: PathBuf,
    /// Prediction CSV with columns `path,pred`; pred is crack or uncrack.
    #[arg(long)]
    preds: PathBuf,
    /// Write the full EvalRunReport JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Params {
    manifest: String,
    preds: String,
}

#[derive(Debug, Serialize)]
struct Item {
    path: String,
    label: Label,
    pred: Label,
    correct: bool,
}

#[derive(Debug, Serialize)]
struct Aggregate {
    confusion: ConfusionMatrix,
    #[serde(flatten)]
    metrics: ClsMetrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    class_weights: Option<ClassWeights>,
}

#[derive(Debug, Deserialize)]
struct PredRow {
    path: String,
    pred: Label,
}

fn read_preds(path: &PathBuf) -> Result<BTreeMap<String, Label>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("reading predictions {}", path.display()))
        .map_err(CliError::Runtime)?;
    let mut preds = BTreeMap::new();
    for row in reader.deserialize::<PredRow>() {
        let row = row
            .with_context(|| format!("parsing predictions {}", path.display()))
            .map_err(CliError::Runtime)?;
        if row.pred == Label::Unknown {
            return Err(CliError::Runtime(anyhow!(
                "prediction for {} must be crack or uncrack",
                row.path
            )));
        }
        if preds.insert(row.path.clone(), row.pred).is_some() {
            return Err(CliError::Runtime(anyhow!(
                "duplicate prediction for {}",
                row.path
            )));
        }
    }
    Ok(preds)
}

pub fn run(args: Args) -> Result<(), CliError> {
    let manifest = Manifest::read_json(&args.manifest)?;
    let preds = read_preds(&args.preds)?;

    // only held-out records are scored; labeled/unlabeled are training pools
    let scored: Vec<_> = manifest
        .records
        .iter()
        .filter(|r| matches!(r.split, Split::Val | Split::Test))
        .collect();
    if scored.is_empty() {
        return Err(CliError::Runtime(anyhow!(
            "manifest {} has no val or test records to score",
            args.manifest.display()
        )));
    }

    let mut items = Vec::with_capacity(scored.len());
    let mut per_item_ms = Vec::with_capacity(scored.len());
    let mut truths = Vec::with_capacity(scored.len());
    let mut guesses = Vec::with_capacity(scored.len());
    for record in &scored {
        let start = Instant::now();
        let Some(&pred) = preds.get(&record.path) else {
            return Err(CliError::Runtime(anyhow!(
                "missing prediction for {}",
                record.path
            )));
        };
        let truth = match record.label {
            Label::Crack => true,
            Label::Uncrack => false,
            Label::Unknown => {
                return Err(CliError::Runtime(anyhow!(
                    "{} is in the {} split but has no class label",
                    record.path,
                    record.split
                )))
            }
        };
        truths.push(truth);
        guesses.push(pred == Label::Crack);
        per_item_ms.push(start.elapsed().as_secs_f64() * 1e3);
        items.push(Item {
            path: record.path.clone(),
            label: record.label,
            pred,
            correct: (pred == Label::Crack) == truth,
        });
    }

    let start = Instant::now();
    let cm = confusion(&truths, &guesses)?;
    let cls = metrics(&cm)?;
    let n_pos = truths.iter().filter(|&&t| t).count() as u64;
    let n_neg = truths.len() as u64 - n_pos;
    let weights = (n_pos > 0 && n_neg > 0)
        .then(|| class_weights(n_pos, n_neg))
        .transpose()?;
    let summary_ms = start.elapsed().as_secs_f64() * 1e3;

    println!(
        "accuracy={:.4} precision={:.4} recall={:.4} f1={:.4}",
        cls.accuracy, cls.precision, cls.recall, cls.f1
    );

    if let Some(out) = &args.out {
        let mut timing = Timing::from_items(per_item_ms);
        timing.total_ms += summary_ms;
        let report = EvalRunReport {
            tool_version: TOOL_VERSION,
            params: Params {
                manifest: args.manifest.display().to_string(),
                preds: args.preds.display().to_string(),
            },
            per_item: items,
            aggregate: Aggregate {
                confusion: cm,
                metrics: cls,
                class_weights: weights,
            },
            timing,
        };
        write_report(&report, out)?;
    }
    Ok(())
}

use std::path::PathBuf;
use std::time::Instant;

use crackeval_core::{evaluate_pair, Extraction, HdParams, SegReport};
use serde::Serialize;

use super::{load_input, pair_inputs, CliError};
use crate::report::{write_report, EvalRunReport, Timing, TOOL_VERSION};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Prediction mask file, or a directory of them.
    #[arg(long)]
    pred: PathBuf,
    /// Ground-truth mask file, or a directory of them.
    #[arg(long)]
    gt: PathBuf,
    /// Saturation cap: penalty distances clip at u pixels.
    #[arg(long, default_value_t = 50.0)]
    u: f64,
    /// Pixel-metric tolerance in pixels.
    #[arg(long, default_value_t = 2)]
    tolerance: u32,
    /// Point extraction for predictions: boundary or foreground.
    #[arg(long, default_value_t = Extraction::Boundary)]
    extraction_pred: Extraction,
    /// Point extraction for ground truth: boundary or foreground.
    #[arg(long, default_value_t = Extraction::Foreground)]
    extraction_gt: Extraction,
    /// Foreground threshold: pixel values >= threshold are crack.
    #[arg(long, default_value_t = 128)]
    threshold: u8,
    /// Flip the foreground convention (dark cracks on light pavement).
    #[arg(long)]
    invert: bool,
    /// Write the full EvalRunReport JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Params {
    pred: String,
    gt: String,
    u: f64,
    tolerance: u32,
    extraction_pred: Extraction,
    extraction_gt: Extraction,
    threshold: u8,
    invert: bool,
}

#[derive(Debug, Serialize)]
struct Item {
    path: String,
    #[serde(flatten)]
    report: SegReport,
}

#[derive(Debug, Serialize)]
struct Aggregate {
    hd_score: f64,
    h_penalty_forward: f64,
    h_penalty_backward: f64,
    h_crack: f64,
    pixel_precision: f64,
    pixel_recall: f64,
    pixel_f1: f64,
}

impl Aggregate {
    fn means(items: &[Item]) -> Aggregate {
        let n = items.len() as f64;
        let mean = |f: fn(&SegReport) -> f64| items.iter().map(|i| f(&i.report)).sum::<f64>() / n;
        Aggregate {
            hd_score: mean(|r| r.hd_score),
            h_penalty_forward: mean(|r| r.h_penalty_forward),
            h_penalty_backward: mean(|r| r.h_penalty_backward),
            h_crack: mean(|r| r.h_crack),
            pixel_precision: mean(|r| r.pixel_precision),
            pixel_recall: mean(|r| r.pixel_recall),
            pixel_f1: mean(|r| r.pixel_f1),
        }
    }
}

pub fn run(args: Args) -> Result<(), CliError> {
    let params = HdParams {
        u: args.u,
        extraction_pred: args.extraction_pred,
        extraction_gt: args.extraction_gt,
    };
    params.validate()?;

    let pairs = pair_inputs(&args.pred, &args.gt)?;
    let mut items = Vec::with_capacity(pairs.len());
    let mut per_item_ms = Vec::with_capacity(pairs.len());
    for (_, pred_path, gt_path) in &pairs {
        let pred = load_input(pred_path, args.threshold, args.invert)?;
        let gt = load_input(gt_path, args.threshold, args.invert)?;
        let start = Instant::now();
        let report = evaluate_pair(&pred, &gt, &params, args.tolerance)?;
        per_item_ms.push(start.elapsed().as_secs_f64() * 1e3);
        items.push(Item {
            path: pred_path.display().to_string(),
            report,
        });
    }

    let aggregate = Aggregate::means(&items);
    println!(
        "hd_score={:.4} f1={:.4}",
        aggregate.hd_score, aggregate.pixel_f1
    );

    if let Some(out) = &args.out {
        let report = EvalRunReport {
            tool_version: TOOL_VERSION,
            params: Params {
                pred: args.pred.display().to_string(),
                gt: args.gt.display().to_string(),
                u: args.u,
                tolerance: args.tolerance,
                extraction_pred: args.extraction_pred,
                extraction_gt: args.extraction_gt,
                threshold: args.threshold,
                invert: args.invert,
            },
            per_item: items,
            aggregate,
            timing: Timing::from_items(per_item_ms),
        };
        write_report(&report, out)?;
    }
    Ok(())
}

//! `crackeval` — evaluation toolkit for crack-like segmentation and patch
//! classification: boundary-sensitive HD-score, tolerance pixel metrics,
//! class-weighted classification scores, GT dilation, split manifests,
//! perturbation sweeps and a performance bench.

mod commands;
mod report;

use clap::{Parser, Subcommand};

use crate::commands::{bench, dilate_gt, eval_cls, eval_seg, split, sweep, CliError};

#[derive(Debug, Parser)]
#[command(name = "crackeval", version, about = "Crack identification evaluation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score prediction masks against ground truth (HD-score + pixel F1).
    EvalSeg(eval_seg::Args),
    /// Score patch classification predictions against a split manifest.
    EvalCls(eval_cls::Args),
    /// Thicken ground-truth masks by morphological dilation.
    DilateGt(dilate_gt::Args),
    /// Build a deterministic labeled/unlabeled/val/test split manifest.
    Split(split::Args),
    /// Sweep synthetic perturbations of a GT mask through the metrics.
    Sweep(sweep::Args),
    /// Time the distance transform and HD-score on seeded random masks.
    Bench(bench::Args),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::EvalSeg(args) => eval_seg::run(args),
        Command::EvalCls(args) => eval_cls::run(args),
        Command::DilateGt(args) => dilate_gt::run(args),
        Command::Split(args) => split::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Bench(args) => bench::run(args),
    };
    match result {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Runtime(err)) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}

use std::path::PathBuf;

use crackeval_core::{
    add_unlabeled, ingest_patch_dataset, ingest_pixel_dataset, split_manifest, LabeledRate,
};

use super::CliError;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Class-folder corpus root (C*/U* subdirectories of patches).
    #[arg(long, conflicts_with_all = ["images", "gts"], required_unless_present = "images")]
    root: Option<PathBuf>,
    /// Image directory of a pixel-annotated corpus; pairs with --gts.
    #[arg(long, requires = "gts", required_unless_present = "root")]
    images: Option<PathBuf>,
    /// GT mask directory matched to --images by filename stem.
    #[arg(long, requires = "images")]
    gts: Option<PathBuf>,
    /// Labeled rate 1:k — one labeled record per k pool records.
    #[arg(long)]
    labeled_rate: LabeledRate,
    /// Validation fraction, carved before labeling.
    #[arg(long, default_value_t = 0.1)]
    val: f64,
    /// Test fraction, carved before labeling.
    #[arg(long, default_value_t = 0.1)]
    test: f64,
    /// Seed for the split shuffle.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra unlabeled image pool, appended after splitting (repeatable).
    #[arg(long = "extra-unlabeled")]
    extra_unlabeled: Vec<PathBuf>,
    /// Manifest JSON output path; a CSV twin is written alongside.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<(), CliError> {
    let base = match (&args.root, &args.images, &args.gts) {
        (Some(root), None, None) => ingest_patch_dataset(root)?,
        (None, Some(images), Some(gts)) => ingest_pixel_dataset(images, gts)?,
        _ => unreachable!("clap enforces --root xor --images/--gts"),
    };
    let mut manifest = split_manifest(&base, args.labeled_rate, args.val, args.test, args.seed)?;
    for extra in &args.extra_unlabeled {
        manifest = add_unlabeled(&manifest, extra)?;
    }
    manifest.write_json(&args.out)?;
    manifest.write_csv(&args.out.with_extension("csv"))?;
    let counts = &manifest.header.counts;
    println!("labeled={} unlabeled={}", counts.labeled, counts.unlabeled);
    Ok(())
}

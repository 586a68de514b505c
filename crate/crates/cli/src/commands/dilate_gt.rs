use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};
use crackeval_core::{collect_images, dilate, load_mask, save_mask, StructuringElement};

use super::CliError;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Input GT mask file, or a directory of masks.
    #[arg(long = "in")]
    input: PathBuf,
    /// Dilation rounds.
    #[arg(long, default_value_t = 3)]
    iterations: usize,
    /// Structuring element: cross4 or square8.
    #[arg(long, default_value_t = StructuringElement::Cross4)]
    element: StructuringElement,
    /// Output mask file, or directory for directory input.
    #[arg(long)]
    out: PathBuf,
}

fn process(args: &Args, input: &Path, out: &Path) -> Result<(), CliError> {
    if args.iterations == 0 {
        // identity: copy the bytes so the output is exactly the input
        fs::copy(input, out)
            .with_context(|| format!("copying {} to {}", input.display(), out.display()))
            .map_err(CliError::Runtime)?;
        return Ok(());
    }
    let mask = load_mask(input, 128)?;
    save_mask(&dilate(&mask, args.element, args.iterations), out)?;
    Ok(())
}

pub fn run(args: Args) -> Result<(), CliError> {
    if !args.input.is_dir() {
        return process(&args, &args.input, &args.out);
    }
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))
        .map_err(CliError::Runtime)?;
    let images = collect_images(&args.input)?;
    if images.is_empty() {
        return Err(CliError::Runtime(anyhow!(
            "no image files under {}",
            args.input.display()
        )));
    }
    for image in images {
        let input = PathBuf::from(&image);
        let rel = input
            .strip_prefix(&args.input)
            .map_err(|_| CliError::Runtime(anyhow!("{} escapes the input directory", image)))?;
        let out = args.out.join(rel);
        if let Some(parent) = out.parent() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))
                .map_err(CliError::Runtime)?;
        }
        process(&args, &input, &out)?;
    }
    Ok(())
}

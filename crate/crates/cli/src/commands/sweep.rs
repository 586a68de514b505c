use std::fs;
use std::path::PathBuf;

use anyhow::Context as _;
use crackeval_core::{
    load_mask, sensitivity_sweep, sweep_to_csv, HdParams, PerturbKind, PerturbSpec,
};

use super::CliError;

/// Blob radius used by fp_blob sweeps; the swept magnitude is the count.
const FP_BLOB_RADIUS: u32 = 2;

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
enum Kind {
    Translate,
    Dilate,
    Erode,
    FpBlob,
    DropComponents,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Ground-truth mask to perturb.
    #[arg(long)]
    gt: PathBuf,
    /// Perturbation kind.
    #[arg(long, value_enum)]
    kind: Kind,
    /// Comma-separated magnitudes: pixels, blob count, or dropped fraction.
    #[arg(long, value_delimiter = ',')]
    magnitudes: Vec<f64>,
    /// Saturation cap: penalty distances clip at u pixels.
    #[arg(long, default_value_t = 50.0)]
    u: f64,
    /// Seed fixing all perturbation randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

fn integer_magnitude(magnitude: f64, kind: &str) -> Result<u32, CliError> {
    if !magnitude.is_finite() || magnitude < 0.0 || magnitude.fract() != 0.0 {
        return Err(CliError::Usage(format!(
            "{kind} magnitude must be a non-negative integer, got {magnitude}"
        )));
    }
    if magnitude > u32::MAX as f64 {
        return Err(CliError::Usage(format!("{kind} magnitude {magnitude} is too large")));
    }
    Ok(magnitude as u32)
}

fn to_kind(kind: Kind, magnitude: f64, u: f64) -> Result<PerturbKind, CliError> {
    Ok(match kind {
        Kind::Translate => PerturbKind::Translate {
            pixels: integer_magnitude(magnitude, "translate")?,
        },
        Kind::Dilate => PerturbKind::Dilate {
            pixels: integer_magnitude(magnitude, "dilate")?,
        },
        Kind::Erode => PerturbKind::Erode {
            pixels: integer_magnitude(magnitude, "erode")?,
        },
        // blobs are placed at least u away so each one saturates fully
        Kind::FpBlob => PerturbKind::FpBlob {
            count: integer_magnitude(magnitude, "fp_blob")?,
            radius: FP_BLOB_RADIUS,
            min_dist: u.ceil() as u32,
        },
        Kind::DropComponents => PerturbKind::DropComponents {
            fraction: magnitude,
        },
    })
}

pub fn run(args: Args) -> Result<(), CliError> {
    if args.magnitudes.is_empty() {
        return Err(CliError::Usage("at least one magnitude is required".into()));
    }
    let params = HdParams::with_u(args.u);
    params.validate()?;
    let specs = args
        .magnitudes
        .iter()
        .map(|&m| Ok(PerturbSpec::new(to_kind(args.kind, m, args.u)?, args.seed)))
        .collect::<Result<Vec<_>, CliError>>()?;

    let gt = load_mask(&args.gt, 128)?;
    let rows = sensitivity_sweep(&gt, &specs, &params)?;
    fs::write(&args.out, sweep_to_csv(&rows))
        .with_context(|| format!("writing {}", args.out.display()))
        .map_err(CliError::Runtime)?;
    Ok(())
}

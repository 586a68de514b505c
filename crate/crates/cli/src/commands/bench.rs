use std::hint::black_box;
use std::time::Instant;

use crackeval_core::{distance_transform, hd_score, BinaryMask, HdParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::CliError;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Mask size as HxW, e.g. 2048x4096.
    #[arg(long)]
    size: String,
    /// Foreground density of the random masks.
    #[arg(long, default_value_t = 0.01)]
    density: f64,
    /// Seed for mask generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Timed iterations.
    #[arg(long, default_value_t = 5)]
    iters: usize,
}

fn parse_size(size: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("size must look like HxW with both positive, got {size:?}"));
    let (h, w) = size.split_once('x').ok_or_else(bad)?;
    let height: usize = h.trim().parse().map_err(|_| bad())?;
    let width: usize = w.trim().parse().map_err(|_| bad())?;
    if height == 0 || width == 0 {
        return Err(bad());
    }
    Ok((height, width))
}

fn min_median(samples: &[f64]) -> (f64, f64) {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    (sorted[0], median)
}

pub fn run(args: Args) -> Result<(), CliError> {
    let (height, width) = parse_size(&args.size)?;
    if !args.density.is_finite() || !(0.0..=1.0).contains(&args.density) {
        return Err(CliError::Usage(format!(
            "density must be in [0, 1], got {}",
            args.density
        )));
    }
    if args.iters == 0 {
        return Err(CliError::Usage("iters must be positive".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let gt = BinaryMask::random(width, height, args.density, &mut rng)?;
    let pred = BinaryMask::random(width, height, args.density, &mut rng)?;
    let params = HdParams::default();

    let mut transform_ms = Vec::with_capacity(args.iters);
    let mut score_ms = Vec::with_capacity(args.iters);
    for iter in 0..args.iters {
        let start = Instant::now();
        black_box(distance_transform(black_box(&gt)));
        let dt = start.elapsed().as_secs_f64() * 1e3;

        let start = Instant::now();
        black_box(hd_score(black_box(&pred), black_box(&gt), &params)?);
        let hd = start.elapsed().as_secs_f64() * 1e3;

        println!("iter={iter} distance_transform_ms={dt:.4} hd_score_ms={hd:.4}");
        transform_ms.push(dt);
        score_ms.push(hd);
    }

    let (dt_min, dt_median) = min_median(&transform_ms);
    let (hd_min, hd_median) = min_median(&score_ms);
    println!("distance_transform min_ms={dt_min:.4} median_ms={dt_median:.4}");
    println!("hd_score min_ms={hd_min:.4} median_ms={hd_median:.4}");
    Ok(())
}

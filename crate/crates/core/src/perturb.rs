//! Controlled mask degradations and metric sensitivity sweeps.
//!
//! Each perturbation models a named segmentation failure mode: `translate`
//! (localization error), `dilate` (over-thick prediction), `erode` (missed
//! thin cracks, collapsing to All-Black for 1-px structures), `fp_blob`
//! (distant false positives), and `drop_components` (missed crack
//! instances). Sweeping a magnitude range through the metric engine shows
//! where overlap-based pixel F1 goes blind while the boundary-aware
//! HD-score still discriminates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distance::distance_transform;
use crate::error::{Error, Result};
use crate::hausdorff::{hd_score, pixel_prf, HdParams};
use crate::mask::{
    connected_components, dilate, erode, translate_mask, BinaryMask, StructuringElement,
};

/// A perturbation kind with its magnitude parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerturbKind {
    /// Shift the whole mask by `pixels` rows toward higher indices,
    /// clipping at the border (interior masks are unaffected by clipping).
    Translate { pixels: u32 },
    /// Cross-element dilation, `pixels` iterations.
    Dilate { pixels: u32 },
    /// Cross-element erosion, `pixels` iterations.
    Erode { pixels: u32 },
    /// Union `count` filled discs of `radius` at seeded positions, every
    /// disc pixel at Euclidean distance >= `min_dist` from every mask pixel.
    FpBlob {
        count: u32,
        radius: u32,
        min_dist: u32,
    },
    /// Remove a seeded `ceil(fraction * count)` subset of the 8-connected
    /// components.
    DropComponents { fraction: f64 },
}

impl PerturbKind {
    pub fn name(&self) -> &'static str {
        match self {
            PerturbKind::Translate { .. } => "translate",
            PerturbKind::Dilate { .. } => "dilate",
            PerturbKind::Erode { .. } => "erode",
            PerturbKind::FpBlob { .. } => "fp_blob",
            PerturbKind::DropComponents { .. } => "drop_components",
        }
    }

    /// The swept scalar: pixels, blob count, or dropped fraction.
    pub fn magnitude(&self) -> f64 {
        match *self {
            PerturbKind::Translate { pixels }
            | PerturbKind::Dilate { pixels }
            | PerturbKind::Erode { pixels } => pixels as f64,
            PerturbKind::FpBlob { count, .. } => count as f64,
            PerturbKind::DropComponents { fraction } => fraction,
        }
    }

    fn validate(&self) -> Result<()> {
        if let PerturbKind::DropComponents { fraction } = self {
            if !fraction.is_finite() || !(0.0..=1.0).contains(fraction) {
                return Err(Error::invalid(format!(
                    "drop_components fraction must be in [0, 1], got {fraction}"
                )));
            }
        }
        Ok(())
    }
}

/// A perturbation plus the seed that fixes all of its randomness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbSpec {
    #[serde(flatten)]
    pub kind: PerturbKind,
    pub seed: u64,
}

impl PerturbSpec {
    pub fn new(kind: PerturbKind, seed: u64) -> Self {
        PerturbSpec { kind, seed }
    }
}

/// Applies one perturbation; the input mask is never modified.
pub fn apply_perturbation(gt: &BinaryMask, spec: &PerturbSpec) -> Result<BinaryMask> {
    spec.kind.validate()?;
    match spec.kind {
        PerturbKind::Translate { pixels } => Ok(translate_mask(gt, pixels as i64, 0)),
        PerturbKind::Dilate { pixels } => {
            Ok(dilate(gt, StructuringElement::Cross4, pixels as usize))
        }
        PerturbKind::Erode { pixels } => Ok(erode(gt, StructuringElement::Cross4, pixels as usize)),
        PerturbKind::FpBlob {
            count,
            radius,
            min_dist,
        } => add_fp_blobs(gt, count, radius, min_dist, spec.seed),
        PerturbKind::DropComponents { fraction } => Ok(drop_components(gt, fraction, spec.seed)),
    }
}

/// Rejection-samples `count` disc centers so that every disc pixel is at
/// least `min_dist` from the mask (center distance >= min_dist + radius)
/// and discs are pairwise disjoint, then stamps them in.
fn add_fp_blobs(
    gt: &BinaryMask,
    count: u32,
    radius: u32,
    min_dist: u32,
    seed: u64,
) -> Result<BinaryMask> {
    let mut out = gt.clone();
    if count == 0 {
        return Ok(out);
    }
    let (h, w) = gt.dims();
    let r = radius as usize;
    let max_attempts = 1000 * count as usize;
    if h < 2 * r + 1 || w < 2 * r + 1 {
        return Err(Error::Placement {
            attempts: 0,
            reason: format!("mask {h}x{w} cannot contain a disc of radius {radius}"),
        });
    }

    let field = distance_transform(gt);
    let clearance = min_dist as i64 + radius as i64;
    let clearance_sq = clearance * clearance;
    let sep = 2 * radius as i64 + 1; // strictly more than touching
    let sep_sq = sep * sep;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<(i64, i64)> = Vec::with_capacity(count as usize);
    let mut attempts = 0usize;
    while centers.len() < count as usize {
        if attempts >= max_attempts {
            return Err(Error::Placement {
                attempts,
                reason: format!(
                    "placed {} of {count} discs (radius {radius}, min_dist {min_dist}) in {h}x{w}",
                    centers.len()
                ),
            });
        }
        attempts += 1;
        let row = rng.gen_range(r..h - r) as i64;
        let col = rng.gen_range(r..w - r) as i64;
        let clear_of_mask = match field.squared(row as usize, col as usize) {
            Some(sq) => sq >= clearance_sq,
            None => true, // empty mask: everywhere is clear
        };
        if !clear_of_mask {
            continue;
        }
        if centers
            .iter()
            .any(|&(cr, cc)| (cr - row).pow(2) + (cc - col).pow(2) < sep_sq)
        {
            continue;
        }
        centers.push((row, col));
    }

    let rr = radius as i64;
    for (cr, cc) in centers {
        for dr in -rr..=rr {
            for dc in -rr..=rr {
                if dr * dr + dc * dc <= rr * rr {
                    out.set((cr + dr) as usize, (cc + dc) as usize, true);
                }
            }
        }
    }
    Ok(out)
}

/// Removes a seeded `ceil(fraction * count)` subset of 8-connected
/// components; fraction 1 empties the mask, fraction 0 is the identity.
fn drop_components(gt: &BinaryMask, fraction: f64, seed: u64) -> BinaryMask {
    let labels = connected_components(gt);
    if labels.count == 0 {
        return gt.clone();
    }
    let n_drop = ((fraction * labels.count as f64).ceil() as usize).min(labels.count);
    if n_drop == 0 {
        return gt.clone();
    }
    let mut ids: Vec<usize> = (0..labels.count).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..ids.len()).rev() {
        let j = rng.gen_range(0..=i);
        ids.swap(i, j);
    }
    let dropped: Vec<bool> = {
        let mut d = vec![false; labels.count];
        for &id in &ids[..n_drop] {
            d[id] = true;
        }
        d
    };
    let (h, w) = gt.dims();
    let mut out = gt.clone();
    for row in 0..h {
        for col in 0..w {
            let id = labels.label(row, col); // 0 is background, ids 1-based
            if id != 0 && dropped[id as usize - 1] {
                out.set(row, col, false);
            }
        }
    }
    out
}

/// One sweep result: the spec, the HD-score family, and pixel F1 at
/// tolerances 0 and 2 — every value recomputed from the perturbed mask.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(flatten)]
    pub spec: PerturbSpec,
    pub hd_score: f64,
    pub pixel_f1_at_t0: f64,
    pub pixel_f1_at_t2: f64,
    pub h_crack: f64,
}

/// Perturbs `gt` by each spec in order and scores the result against the
/// unperturbed mask.
pub fn sensitivity_sweep(
    gt: &BinaryMask,
    specs: &[PerturbSpec],
    params: &HdParams,
) -> Result<Vec<SweepRow>> {
    if gt.is_all_background() {
        return Err(Error::EmptyPointSet("ground truth in sensitivity_sweep"));
    }
    params.validate()?;
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        let pred = apply_perturbation(gt, spec)?;
        let hd = hd_score(&pred, gt, params)?;
        let t0 = pixel_prf(&pred, gt, 0)?;
        let t2 = pixel_prf(&pred, gt, 2)?;
        rows.push(SweepRow {
            spec: *spec,
            hd_score: hd.hd_score,
            pixel_f1_at_t0: t0.f1,
            pixel_f1_at_t2: t2.f1,
            h_crack: hd.h_crack,
        });
    }
    Ok(rows)
}

/// CSV rendering with columns
/// `kind,magnitude,seed,hd_score,h_crack,f1_t0,f1_t2`.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "magnitude", "seed", "hd_score", "h_crack", "f1_t0", "f1_t2"])
        .expect("csv header");
    for row in rows {
        w.write_record([
            row.spec.kind.name(),
            &row.spec.kind.magnitude().to_string(),
            &row.spec.seed.to_string(),
            &row.hd_score.to_string(),
            &row.h_crack.to_string(),
            &row.pixel_f1_at_t0.to_string(),
            &row.pixel_f1_at_t2.to_string(),
        ])
        .expect("csv record");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
}

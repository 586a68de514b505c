//! Evaluation toolkit for pavement crack identification.
//!
//! Cracks are thin curvilinear structures, so overlap-based pixel metrics
//! punish small localization offsets as total failure while barely noticing
//! distant false positives. This crate scores segmentations with a
//! saturated, penalized Hausdorff distance instead: `HD-score =
//! 100·(1 − H_crack/u)`, where `H_crack` averages nearest-neighbor
//! distances clipped at `u`. The score degrades smoothly with boundary
//! error, caps the influence of outliers, and treats the degenerate
//! all-background prediction explicitly.
//!
//! Everything nearest-neighbor runs through an exact integer Euclidean
//! distance transform, so megapixel masks evaluate in linear time and the
//! results are bit-equal to brute-force computation.
//!
//! The crate also ships the supporting cast for benchmark work: tolerance
//! pixel precision/recall/F1, patch classification metrics with
//! class-imbalance weights, mask morphology and PNG I/O, dataset manifests
//! with deterministic labeled/unlabeled/val/test splits, and a perturbation
//! lab that demonstrates where overlap metrics and boundary metrics
//! disagree.

pub mod classification;
pub mod dataset;
pub mod distance;
pub mod error;
pub mod hausdorff;
pub mod mask;
pub mod perturb;
pub mod points;

pub use classification::{
    class_weights, confusion, metrics, ClassWeights, ClsFlag, ClsMetrics, ConfusionMatrix,
};
pub use dataset::{
    add_unlabeled, collect_images, crop_patches, ingest_patch_dataset, ingest_pixel_dataset,
    split_manifest, Label, LabeledRate, Manifest, ManifestCounts, ManifestHeader, ManifestRecord,
    Patch, Split,
};
pub use distance::{distance_transform, distance_transform_points, DistanceField};
pub use error::{Error, Result};
pub use hausdorff::{
    directed_hausdorff, evaluate_pair, h_crack, hausdorff, hd_score, penalized_directed,
    pixel_prf, Extraction, HdParams, HdScore, NearestField, PixelPrf, SegFlag, SegReport,
};
pub use mask::{
    boundary_points, connected_components, dilate, erode, foreground_points, load_mask,
    save_mask, translate_mask, BinaryMask, ComponentLabels, StructuringElement,
};
pub use perturb::{
    apply_perturbation, sensitivity_sweep, sweep_to_csv, PerturbKind, PerturbSpec, SweepRow,
};
pub use points::{Point, PointSet};

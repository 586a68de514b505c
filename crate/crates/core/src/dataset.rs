//! Dataset ingestion, patch cropping, and deterministic split manifests.
//!
//! Two corpus shapes are understood: class-folder trees (images sorted into
//! `C*` cracked / `U*` uncracked subdirectories) and pixel-annotated pairs
//! (an image directory plus a ground-truth mask directory, paired by file
//! stem). Manifests record every file with a label and a split, and the
//! labeled/unlabeled/val/test assignment is a pure function of the sorted
//! record paths and one seed, so manifest files are byte-identical across
//! re-runs.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::mask::{load_mask, BinaryMask};

/// Patch-level class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Crack,
    Uncrack,
    /// No annotation (extra unlabeled pools).
    Unknown,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Crack => write!(f, "crack"),
            Label::Uncrack => write!(f, "uncrack"),
            Label::Unknown => write!(f, "unknown"),
        }
    }
}

/// Split assignment of one record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Labeled,
    Unlabeled,
    Val,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Split::Labeled => write!(f, "labeled"),
            Split::Unlabeled => write!(f, "unlabeled"),
            Split::Val => write!(f, "val"),
            Split::Test => write!(f, "test"),
        }
    }
}

/// One file in a manifest. `pair_gt` is set for pixel-annotated records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub path: String,
    pub label: Label,
    pub split: Split,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair_gt: Option<String>,
}

/// Per-label and per-split tallies; always recomputable from the records.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestCounts {
    pub crack: usize,
    pub uncrack: usize,
    pub unknown: usize,
    pub labeled: usize,
    pub unlabeled: usize,
    pub val: usize,
    pub test: usize,
}

impl ManifestCounts {
    pub fn from_records(records: &[ManifestRecord]) -> Self {
        let mut c = ManifestCounts::default();
        for r in records {
            match r.label {
                Label::Crack => c.crack += 1,
                Label::Uncrack => c.uncrack += 1,
                Label::Unknown => c.unknown += 1,
            }
            match r.split {
                Split::Labeled => c.labeled += 1,
                Split::Unlabeled => c.unlabeled += 1,
                Split::Val => c.val += 1,
                Split::Test => c.test += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.labeled + self.unlabeled + self.val + self.test
    }
}

/// Provenance block of a manifest: everything needed to regenerate it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub tool_version: String,
    pub seed: Option<u64>,
    /// Free-form parameter echo (labeled rate, fractions, shuffle note).
    pub params: BTreeMap<String, serde_json::Value>,
    pub counts: ManifestCounts,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub header: ManifestHeader,
    pub records: Vec<ManifestRecord>,
}

impl Manifest {
    /// Builds a manifest over `records`, sorted by path, with fresh counts.
    pub fn new(mut records: Vec<ManifestRecord>) -> Self {
        records.sort_by(|a, b| a.path.cmp(&b.path));
        let counts = ManifestCounts::from_records(&records);
        Manifest {
            header: ManifestHeader {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                seed: None,
                params: BTreeMap::new(),
                counts,
            },
            records,
        }
    }

    pub fn recount(&self) -> ManifestCounts {
        ManifestCounts::from_records(&self.records)
    }

    /// JSON rendering used for files; stable field order, trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let m: Manifest =
            serde_json::from_str(s).map_err(|e| Error::Format(format!("manifest JSON: {e}")))?;
        if m.header.counts != m.recount() {
            return Err(Error::Format(
                "manifest counts do not match its records".into(),
            ));
        }
        Ok(m)
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }

    /// CSV rendering with columns `path,label,split,pair_gt`.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["path", "label", "split", "pair_gt"])
            .expect("csv header");
        for r in &self.records {
            w.write_record([
                r.path.as_str(),
                &r.label.to_string(),
                &r.split.to_string(),
                r.pair_gt.as_deref().unwrap_or(""),
            ])
            .expect("csv record");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

fn is_image_file(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref(),
        Some("png" | "jpg" | "jpeg" | "bmp" | "tif" | "tiff")
    )
}

/// Recursively collects image files under `dir`, sorted by path.
pub fn collect_images(dir: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).follow_links(false) {
        let entry =
            entry.map_err(|e| Error::Ingest(format!("scanning {}: {e}", dir.display())))?;
        if entry.file_type().is_file() && is_image_file(entry.path()) {
            out.push(entry.path().to_string_lossy().into_owned());
        }
    }
    out.sort();
    Ok(out)
}

/// Ingests a class-folder tree: immediate subdirectories of `root` whose
/// names begin with `C`/`c` hold cracked patches, `U`/`u` uncracked. Every
/// image file below a class folder becomes one labeled record.
pub fn ingest_patch_dataset(root: &Path) -> Result<Manifest> {
    let mut class_dirs: Vec<(std::path::PathBuf, Label)> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    for entry in fs::read_dir(root).map_err(|e| Error::io(root, e))? {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        if !entry.file_type().map_err(|e| Error::io(root, e))?.is_dir() {
            continue;
        }
        let name = entry.file_name().to_string_lossy().into_owned();
        match name.chars().next().map(|c| c.to_ascii_uppercase()) {
            Some('C') => class_dirs.push((entry.path(), Label::Crack)),
            Some('U') => class_dirs.push((entry.path(), Label::Uncrack)),
            _ => skipped.push(name),
        }
    }
    if class_dirs.is_empty() {
        skipped.sort();
        return Err(Error::Ingest(format!(
            "no class folders (names starting with C or U) under {}; found: {skipped:?}",
            root.display()
        )));
    }

    let mut records = Vec::new();
    for (dir, label) in &class_dirs {
        for path in collect_images(dir)? {
            records.push(ManifestRecord {
                path,
                label: *label,
                split: Split::Labeled,
                pair_gt: None,
            });
        }
    }
    if records.is_empty() {
        return Err(Error::Ingest(format!(
            "class folders under {} contain no image files",
            root.display()
        )));
    }
    Ok(Manifest::new(records))
}

fn stem_of(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn stem_map(dir: &Path, side: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for path in collect_images(dir)? {
        let stem = stem_of(&path);
        if let Some(prev) = map.insert(stem.clone(), path.clone()) {
            return Err(Error::Pairing(format!(
                "ambiguous {side} stem {stem:?}: both {prev} and {path}"
            )));
        }
    }
    Ok(map)
}

/// Ingests a pixel-annotated corpus: each image in `images` pairs with the
/// ground-truth mask in `gts` sharing its filename stem. A record is labeled
/// crack iff its ground truth has any foreground at threshold 128.
pub fn ingest_pixel_dataset(images: &Path, gts: &Path) -> Result<Manifest> {
    let image_map = stem_map(images, "image")?;
    let gt_map = stem_map(gts, "ground-truth")?;
    if image_map.is_empty() {
        return Err(Error::Ingest(format!(
            "no image files under {}",
            images.display()
        )));
    }
    for stem in gt_map.keys() {
        if !image_map.contains_key(stem) {
            return Err(Error::Pairing(format!(
                "ground truth {stem:?} has no matching image"
            )));
        }
    }
    let mut records = Vec::new();
    for (stem, path) in &image_map {
        let gt_path = gt_map.get(stem).ok_or_else(|| {
            Error::Pairing(format!("image {stem:?} has no matching ground truth"))
        })?;
        let gt = load_mask(Path::new(gt_path), 128)?;
        records.push(ManifestRecord {
            path: path.clone(),
            label: if gt.is_all_background() {
                Label::Uncrack
            } else {
                Label::Crack
            },
            split: Split::Labeled,
            pair_gt: Some(gt_path.clone()),
        });
    }
    Ok(Manifest::new(records))
}

/// One cropped window and its top-left grid position.
#[derive(Clone, Debug, PartialEq)]
pub struct Patch {
    pub row: usize,
    pub col: usize,
    pub mask: BinaryMask,
}

/// Crops a top-left-anchored grid of `size`×`size` windows at the given
/// stride. Windows that would overrun the right/bottom edge are dropped,
/// never padded. Yields exactly
/// `(⌊(H−size)/stride⌋+1) · (⌊(W−size)/stride⌋+1)` patches.
pub fn crop_patches(mask: &BinaryMask, size: usize, stride: usize) -> Result<Vec<Patch>> {
    if size == 0 || stride == 0 {
        return Err(Error::invalid("patch size and stride must be positive"));
    }
    let (h, w) = mask.dims();
    if h < size || w < size {
        return Err(Error::invalid(format!(
            "image {h}x{w} is smaller than patch size {size}"
        )));
    }
    let mut patches = Vec::new();
    let pixels = mask.pixels();
    for row in (0..=h - size).step_by(stride) {
        for col in (0..=w - size).step_by(stride) {
            let mut buf = Vec::with_capacity(size * size);
            for r in row..row + size {
                let start = r * w + col;
                buf.extend_from_slice(&pixels[start..start + size]);
            }
            patches.push(Patch {
                row,
                col,
                mask: BinaryMask::from_pixels(size, size, buf)?,
            });
        }
    }
    Ok(patches)
}

/// A labeled rate expressed as `1:k` (one labeled record per `k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabeledRate(pub u32);

impl FromStr for LabeledRate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || {
            Error::invalid(format!(
                "labeled rate must look like 1:k with k >= 1, got {s:?}"
            ))
        };
        let (num, den) = s.split_once(':').ok_or_else(err)?;
        if num.trim() != "1" {
            return Err(err());
        }
        let k: u32 = den.trim().parse().map_err(|_| err())?;
        if k == 0 {
            return Err(err());
        }
        Ok(LabeledRate(k))
    }
}

impl fmt::Display for LabeledRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1:{}", self.0)
    }
}

/// In-place Fisher-Yates driven by the given generator. Kept explicit (not
/// the rand helper) because the manifest header documents this exact
/// algorithm as part of the reproducibility contract.
fn fisher_yates<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

const SHUFFLE_NOTE: &str = "fisher-yates over path-sorted records, chacha8 keyed by seed";

/// Largest-remainder quotas: `total` split across `counts` proportionally.
fn stratified_quotas(counts: &[usize], total: usize, pool: usize) -> Vec<usize> {
    let mut quotas: Vec<usize> = Vec::with_capacity(counts.len());
    let mut remainders: Vec<(u64, usize)> = Vec::with_capacity(counts.len());
    let mut assigned = 0usize;
    for (idx, &c) in counts.iter().enumerate() {
        let num = c as u64 * total as u64;
        let q = (num / pool as u64) as usize;
        quotas.push(q);
        assigned += q;
        remainders.push((num % pool as u64, idx));
    }
    // distribute the leftover to the largest fractional remainders;
    // ties break on class order so the result is deterministic
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, idx) in remainders.iter().take(total - assigned) {
        quotas[idx] += 1;
    }
    quotas
}

/// Assigns splits: after a seeded shuffle of the path-sorted records, the
/// first `⌊val_frac·n⌋` become val and the next `⌊test_frac·n⌋` test; of the
/// remaining `r` records, `⌊r/k⌋` become labeled — sampled per class so the
/// labeled subset's class proportions match the pool within one record —
/// and the rest unlabeled (their labels are retained, only the split
/// changes). Output records are re-sorted by path, so equal inputs and seed
/// give byte-identical manifests.
pub fn split_manifest(
    m: &Manifest,
    rate: LabeledRate,
    val_frac: f64,
    test_frac: f64,
    seed: u64,
) -> Result<Manifest> {
    let k = rate.0 as usize;
    for (name, frac) in [("val", val_frac), ("test", test_frac)] {
        if !frac.is_finite() || frac < 0.0 {
            return Err(Error::invalid(format!(
                "{name} fraction must be finite and >= 0, got {frac}"
            )));
        }
    }
    if val_frac + test_frac >= 1.0 {
        return Err(Error::invalid(format!(
            "val + test fractions must be < 1, got {}",
            val_frac + test_frac
        )));
    }

    let mut records = m.records.clone();
    records.sort_by(|a, b| a.path.cmp(&b.path));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fisher_yates(&mut records, &mut rng);

    let n = records.len();
    let val_n = (val_frac * n as f64).floor() as usize;
    let test_n = (test_frac * n as f64).floor() as usize;
    for r in &mut records[..val_n] {
        r.split = Split::Val;
    }
    for r in &mut records[val_n..val_n + test_n] {
        r.split = Split::Test;
    }

    let pool = &mut records[val_n + test_n..];
    let labeled_n = pool.len() / k;
    let classes = [Label::Crack, Label::Uncrack, Label::Unknown];
    let quotas = if pool.is_empty() || labeled_n == 0 {
        vec![0; classes.len()]
    } else {
        let counts: Vec<usize> = classes
            .iter()
            .map(|c| pool.iter().filter(|r| r.label == *c).count())
            .collect();
        stratified_quotas(&counts, labeled_n, pool.len())
    };
    let mut taken = [0usize; 3];
    for rec in pool.iter_mut() {
        let ci = classes.iter().position(|c| *c == rec.label).unwrap();
        if taken[ci] < quotas[ci] {
            rec.split = Split::Labeled;
            taken[ci] += 1;
        } else {
            rec.split = Split::Unlabeled;
        }
    }

    let mut out = Manifest::new(records);
    out.header.seed = Some(seed);
    out.header.params = BTreeMap::from([
        ("labeled_rate".into(), serde_json::json!(rate.to_string())),
        ("val_frac".into(), serde_json::json!(val_frac)),
        ("test_frac".into(), serde_json::json!(test_frac)),
        ("shuffle".into(), serde_json::json!(SHUFFLE_NOTE)),
        ("stratified".into(), serde_json::json!(true)),
    ]);
    Ok(out)
}

/// Appends an extra pool of unlabeled images (label unknown) to a manifest.
pub fn add_unlabeled(m: &Manifest, extra_root: &Path) -> Result<Manifest> {
    let images = collect_images(extra_root)?;
    if images.is_empty() {
        return Err(Error::Ingest(format!(
            "no image files under {}",
            extra_root.display()
        )));
    }
    let mut records = m.records.clone();
    records.extend(images.into_iter().map(|path| ManifestRecord {
        path,
        label: Label::Unknown,
        split: Split::Unlabeled,
        pair_gt: None,
    }));
    let mut out = Manifest::new(records);
    out.header.seed = m.header.seed;
    out.header.params = m.header.params.clone();
    Ok(out)
}

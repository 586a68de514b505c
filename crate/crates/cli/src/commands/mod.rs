//! Subcommand implementations and the shared error-to-exit-code mapping.

pub mod bench;
pub mod dilate_gt;
pub mod eval_cls;
pub mod eval_seg;
pub mod split;
pub mod sweep;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use crackeval_core::{collect_images, load_mask, BinaryMask};

/// Exit-code contract: usage errors exit 2, runtime/data errors exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<crackeval_core::Error> for CliError {
    fn from(e: crackeval_core::Error) -> Self {
        match e {
            // bad parameter values are usage errors, same as bad flags
            crackeval_core::Error::InvalidArgument(msg) => CliError::Usage(msg),
            // core messages already embed their cause; flatten so the
            // anyhow chain does not print it twice
            other => CliError::Runtime(anyhow::Error::msg(other.to_string())),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

/// Loads a mask, optionally flipping the foreground convention for corpora
/// with dark cracks on light pavement.
pub fn load_input(path: &Path, threshold: u8, invert: bool) -> Result<BinaryMask, CliError> {
    let mask = load_mask(path, threshold)?;
    Ok(if invert { mask.complement() } else { mask })
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn stem_index(dir: &Path, side: &str) -> Result<BTreeMap<String, PathBuf>, CliError> {
    let mut map = BTreeMap::new();
    for path in collect_images(dir)? {
        let path = PathBuf::from(path);
        let stem = stem_of(&path);
        if map.insert(stem.clone(), path).is_some() {
            return Err(CliError::Runtime(anyhow!(
                "ambiguous {side} stem {stem:?} under {}",
                dir.display()
            )));
        }
    }
    if map.is_empty() {
        return Err(CliError::Runtime(anyhow!(
            "no image files under {}",
            dir.display()
        )));
    }
    Ok(map)
}

/// Pairs prediction and GT inputs: two files, or two directories matched by
/// filename stem. Returns (stem, pred, gt) in sorted-stem order.
pub fn pair_inputs(
    pred: &Path,
    gt: &Path,
) -> Result<Vec<(String, PathBuf, PathBuf)>, CliError> {
    match (pred.is_dir(), gt.is_dir()) {
        (false, false) => {
            for (side, path) in [("prediction", pred), ("ground truth", gt)] {
                if !path.is_file() {
                    return Err(CliError::Runtime(anyhow!(
                        "{side} {} is not a file or directory",
                        path.display()
                    )));
                }
            }
            Ok(vec![(stem_of(pred), pred.to_path_buf(), gt.to_path_buf())])
        }
        (true, true) => {
            let preds = stem_index(pred, "prediction")?;
            let gts = stem_index(gt, "ground-truth")?;
            for stem in gts.keys() {
                if !preds.contains_key(stem) {
                    return Err(CliError::Runtime(anyhow!(
                        "no prediction for stem {stem:?}"
                    )));
                }
            }
            for stem in preds.keys() {
                if !gts.contains_key(stem) {
                    return Err(CliError::Runtime(anyhow!(
                        "no ground truth for stem {stem:?}"
                    )));
                }
            }
            Ok(preds
                .into_iter()
                .map(|(stem, p)| {
                    let g = gts[&stem].clone();
                    (stem, p, g)
                })
                .collect())
        }
        _ => Err(CliError::Runtime(anyhow!(
            "--pred and --gt must both be files or both be directories"
        ))),
    }
}

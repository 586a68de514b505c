//! Patch-level classification metrics.
//!
//! Confusion-matrix accounting, accuracy/precision/recall/F1 with explicit
//! zero-denominator flags, and inverse-frequency class weights for
//! imbalance-aware training (cracked surface patches are typically rare).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary confusion matrix; "positive" is the crack class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        ConfusionMatrix { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Records one (truth, prediction) observation.
    pub fn record(&mut self, truth: bool, prediction: bool) {
        match (truth, prediction) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (false, false) => self.tn += 1,
            (true, false) => self.fn_ += 1,
        }
    }

    pub fn metrics(&self) -> Result<ClsMetrics> {
        metrics(self)
    }
}

/// Tallies a confusion matrix from parallel truth/prediction slices.
pub fn confusion(truths: &[bool], predictions: &[bool]) -> Result<ConfusionMatrix> {
    if truths.len() != predictions.len() {
        return Err(Error::invalid(format!(
            "label/prediction length mismatch: {} vs {}",
            truths.len(),
            predictions.len()
        )));
    }
    if truths.is_empty() {
        return Err(Error::invalid("nothing to score: no labeled samples"));
    }
    let mut cm = ConfusionMatrix::default();
    for (&truth, &prediction) in truths.iter().zip(predictions) {
        cm.record(truth, prediction);
    }
    Ok(cm)
}

/// Undefined-metric markers: which denominators were zero. The affected
/// metric is reported as 0.0 rather than NaN so aggregates stay finite, and
/// the flag keeps that substitution visible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClsFlag {
    /// tp + fp == 0: nothing was predicted positive.
    NoPredictedPositives,
    /// tp + fn == 0: no positives in the ground truth.
    NoActualPositives,
    /// precision + recall == 0; F1 is undefined.
    F1Undefined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClsMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub flags: Vec<ClsFlag>,
}

/// Accuracy, precision, recall and F1 of a confusion matrix. Zero
/// denominators inside a nonempty matrix yield 0.0 plus a flag; an entirely
/// empty matrix is an argument error.
pub fn metrics(cm: &ConfusionMatrix) -> Result<ClsMetrics> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::invalid("confusion matrix has no observations"));
    }
    let mut flags = Vec::new();
    let accuracy = (cm.tp + cm.tn) as f64 / total as f64;
    let predicted_pos = cm.tp + cm.fp;
    let precision = if predicted_pos == 0 {
        flags.push(ClsFlag::NoPredictedPositives);
        0.0
    } else {
        cm.tp as f64 / predicted_pos as f64
    };
    let actual_pos = cm.tp + cm.fn_;
    let recall = if actual_pos == 0 {
        flags.push(ClsFlag::NoActualPositives);
        0.0
    } else {
        cm.tp as f64 / actual_pos as f64
    };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        flags.push(ClsFlag::F1Undefined);
        0.0
    };
    Ok(ClsMetrics {
        accuracy,
        precision,
        recall,
        f1,
        flags,
    })
}

/// Per-class loss weights `w_c = (n_pos + n_neg) / (2 * n_c)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    pub w_pos: f64,
    pub w_neg: f64,
}

/// Inverse-frequency class weights. Balanced counts give (1, 1); the minority
/// class is weighted up so both classes contribute equally in expectation:
/// `w_pos * n_pos == w_neg * n_neg`.
pub fn class_weights(n_pos: u64, n_neg: u64) -> Result<ClassWeights> {
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::invalid(format!(
            "class weights need both classes present, got n_pos={n_pos}, n_neg={n_neg}"
        )));
    }
    let total = (n_pos + n_neg) as f64;
    Ok(ClassWeights {
        w_pos: total / (2.0 * n_pos as f64),
        w_neg: total / (2.0 * n_neg as f64),
    })
}

use serde::{Deserialize, Serialize};

use crate::data::Phase;
use crate::error::{Error, Result};

/// Binary classification summary. Index 0 is Z2, index 1 is Z3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    /// `confusion[true][predicted]`
    pub confusion: [[usize; 2]; 2],
    pub precision: [f64; 2],
    pub recall: [f64; 2],
    pub f1: [f64; 2],
    pub support: [usize; 2],
    pub macro_f1: f64,
    pub weighted_f1: f64,
    pub accuracy: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn classification_metrics(preds: &[Phase], labels: &[Phase]) -> Result<ClassificationMetrics> {
    if preds.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} predictions for {} labels",
            preds.len(),
            labels.len()
        )));
    }
    if preds.is_empty() {
        return Err(Error::InvalidInput("no predictions to score".into()));
    }
    let mut confusion = [[0usize; 2]; 2];
    for (p, t) in preds.iter().zip(labels) {
        confusion[t.index()][p.index()] += 1;
    }
    let support = [
        confusion[0][0] + confusion[0][1],
        confusion[1][0] + confusion[1][1],
    ];
    let predicted = [
        confusion[0][0] + confusion[1][0],
        confusion[0][1] + confusion[1][1],
    ];
    let mut precision = [0.0; 2];
    let mut recall = [0.0; 2];
    let mut f1 = [0.0; 2];
    for c in 0..2 {
        precision[c] = ratio(confusion[c][c], predicted[c]);
        recall[c] = ratio(confusion[c][c], support[c]);
        let s = precision[c] + recall[c];
        f1[c] = if s > 0.0 {
            2.0 * precision[c] * recall[c] / s
        } else {
            0.0
        };
    }
    let total = preds.len();
    Ok(ClassificationMetrics {
        confusion,
        precision,
        recall,
        f1,
        support,
        macro_f1: 0.5 * (f1[0] + f1[1]),
        weighted_f1: (f1[0] * support[0] as f64 + f1[1] * support[1] as f64) / total as f64,
        accuracy: ratio(confusion[0][0] + confusion[1][1], total),
    })
}

/// `A - 0.1 P - 0.0002 D - 0.1 W` for accuracy, parameter count, depth and width.
pub fn efficiency_score(accuracy: f64, params: f64, depth: f64, width: f64) -> f64 {
    accuracy - 0.1 * params - 0.0002 * depth - 0.1 * width
}

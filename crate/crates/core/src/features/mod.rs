//! Expectation values to four rotation angles per sample.
//!
//! Steps: clip each `<X>`/`<Z>` to `[-1, 1]` and map it affinely onto
//! `[0, pi]`; lay the `theta_x` block and then the `theta_z` block side by side
//! (width `2N`); project onto the top principal components; rescale each
//! component onto `[0, pi]`.

mod minmax;
mod pca;

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::shadow::ExpectationTable;

pub use minmax::{minmax_apply, minmax_fit, MinMaxModel};
pub use pca::{pca_fit, pca_transform, PcaModel};

pub const DEFAULT_COMPONENTS: usize = 4;
pub const MODEL_VERSION: &str = "fp-v1";

/// `(clip(e, -1, 1) + 1) * pi / 2`
pub fn angle_map(e: f64) -> f64 {
    (e.clamp(-1.0, 1.0) + 1.0) * FRAC_PI_2
}

/// `[theta_x, theta_z]` per (sample, qubit), radians in `[0, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTable {
    n_samples: usize,
    n_qubits: usize,
    values: Vec<[f64; 2]>,
}

impl AngleTable {
    pub fn from_expectations(table: &ExpectationTable) -> Self {
        let values = (0..table.n_samples())
            .flat_map(|s| {
                table
                    .row(s)
                    .iter()
                    .map(|&[ex, ez]| [angle_map(ex), angle_map(ez)])
            })
            .collect();
        Self {
            n_samples: table.n_samples(),
            n_qubits: table.n_qubits(),
            values,
        }
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, sample: usize, qubit: usize) -> [f64; 2] {
        self.values[sample * self.n_qubits + qubit]
    }
}

/// Row `s` is `[theta_x(s, 0..N), theta_z(s, 0..N)]`.
pub fn assemble_features(angles: &AngleTable) -> Matrix {
    let n = angles.n_qubits();
    let mut m = Matrix::zeros(angles.n_samples(), 2 * n);
    for s in 0..angles.n_samples() {
        let row = m.row_mut(s);
        for q in 0..n {
            let [tx, tz] = angles.get(s, q);
            row[q] = tx;
            row[n + q] = tz;
        }
    }
    m
}

/// Fitted PCA + min-max state, persisted as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeaturePipelineModel {
    pub version: String,
    pub n_qubits: usize,
    pub n_components: usize,
    pub pca: PcaModel,
    pub minmax: MinMaxModel,
}

impl FeaturePipelineModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("pipeline model: {e}")))?;
        if model.version != MODEL_VERSION {
            return Err(Error::InvalidInput(format!(
                "pipeline model version {:?}, expected {MODEL_VERSION:?}",
                model.version
            )));
        }
        if model.pca.n_features() != 2 * model.n_qubits
            || model.pca.n_components() != model.n_components
            || model.minmax.min.len() != model.n_components
        {
            return Err(Error::Dimension(
                "pipeline model fields disagree in size".into(),
            ));
        }
        Ok(model)
    }

    pub fn apply(&self, table: &ExpectationTable) -> Result<Matrix> {
        pipeline_apply(self, table)
    }
}

pub fn pipeline_fit(table: &ExpectationTable, k: usize) -> Result<FeaturePipelineModel> {
    let x = assemble_features(&AngleTable::from_expectations(table));
    let pca = pca_fit(&x, k)?;
    let scores = pca_transform(&pca, &x)?;
    let minmax = minmax_fit(&scores)?;
    Ok(FeaturePipelineModel {
        version: MODEL_VERSION.to_string(),
        n_qubits: table.n_qubits(),
        n_components: k,
        pca,
        minmax,
    })
}

pub fn pipeline_apply(model: &FeaturePipelineModel, table: &ExpectationTable) -> Result<Matrix> {
    if table.n_qubits() != model.n_qubits {
        return Err(Error::Dimension(format!(
            "expectations cover {} qubits, pipeline model expects {}",
            table.n_qubits(),
            model.n_qubits
        )));
    }
    let x = assemble_features(&AngleTable::from_expectations(table));
    let scores = pca_transform(&model.pca, &x)?;
    minmax_apply(&model.minmax, &scores)
}

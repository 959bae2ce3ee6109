use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Per-column bounds for scaling onto `[0, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxModel {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

pub fn minmax_fit(x: &Matrix) -> Result<MinMaxModel> {
    if x.nrows() == 0 {
        return Err(Error::InvalidInput(
            "min-max fit needs at least one row".into(),
        ));
    }
    if !x.all_finite() {
        return Err(Error::Numerical("non-finite entry in min-max input".into()));
    }
    let mut min = x.row(0).to_vec();
    let mut max = min.clone();
    for row in x.rows() {
        for (j, &v) in row.iter().enumerate() {
            min[j] = min[j].min(v);
            max[j] = max[j].max(v);
        }
    }
    Ok(MinMaxModel { min, max })
}

/// `(x - min) / (max - min) * pi`; a constant column maps to `pi / 2`.
pub fn minmax_apply(model: &MinMaxModel, x: &Matrix) -> Result<Matrix> {
    if x.ncols() != model.min.len() {
        return Err(Error::Dimension(format!(
            "input has {} columns, min-max model has {}",
            x.ncols(),
            model.min.len()
        )));
    }
    if !x.all_finite() {
        return Err(Error::Numerical("non-finite entry in min-max input".into()));
    }
    let mut out = x.clone();
    for i in 0..out.nrows() {
        for (j, v) in out.row_mut(i).iter_mut().enumerate() {
            let (lo, hi) = (model.min[j], model.max[j]);
            *v = if hi > lo {
                (*v - lo) / (hi - lo) * PI
            } else {
                FRAC_PI_2
            };
        }
    }
    Ok(out)
}

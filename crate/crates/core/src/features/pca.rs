use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix};

/// Principal axes of a fitted data matrix.
///
/// `components` holds `k` orthonormal rows sorted by descending eigenvalue of
/// the sample covariance (divisor `n - 1`). Each component is signed so that
/// its entry of largest magnitude is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    pub components: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub explained_ratio: Vec<f64>,
}

impl PcaModel {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        pca_transform(self, x)
    }

    /// `scores * components + mean`
    pub fn inverse_transform(&self, scores: &Matrix) -> Result<Matrix> {
        if scores.ncols() != self.n_components() {
            return Err(Error::Dimension(format!(
                "scores have {} columns, model has {} components",
                scores.ncols(),
                self.n_components()
            )));
        }
        let mut out = Matrix::zeros(scores.nrows(), self.n_features());
        for i in 0..scores.nrows() {
            let row = out.row_mut(i);
            row.copy_from_slice(&self.mean);
            for (score, comp) in scores.row(i).iter().zip(&self.components) {
                for (o, c) in row.iter_mut().zip(comp) {
                    *o += score * c;
                }
            }
        }
        Ok(out)
    }
}

pub fn pca_fit(x: &Matrix, k: usize) -> Result<PcaModel> {
    let (n, d) = (x.nrows(), x.ncols());
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "PCA needs at least 2 rows, got {n}"
        )));
    }
    if k == 0 || k > n.min(d) {
        return Err(Error::InvalidInput(format!(
            "cannot extract {k} components from a {n}x{d} matrix"
        )));
    }
    if !x.all_finite() {
        return Err(Error::Numerical("non-finite entry in PCA input".into()));
    }

    let mean = x.column_means();
    let mut cov = Matrix::zeros(d, d);
    for row in x.rows() {
        let centered: Vec<f64> = row.iter().zip(&mean).map(|(v, m)| v - m).collect();
        for i in 0..d {
            let ci = centered[i];
            if ci == 0.0 {
                continue;
            }
            for j in i..d {
                cov[(i, j)] += ci * centered[j];
            }
        }
    }
    let denom = (n - 1) as f64;
    for i in 0..d {
        for j in i..d {
            let v = cov[(i, j)] / denom;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    let total: f64 = (0..d).map(|i| cov[(i, i)]).sum();

    let eig = symmetric_eigen(&cov)?;
    let mut order: Vec<usize> = (0..d).collect();
    // Stable sort: equal eigenvalues keep column order.
    order.sort_by(|&a, &b| eig.values[b].total_cmp(&eig.values[a]));

    let mut components = Vec::with_capacity(k);
    let mut eigenvalues = Vec::with_capacity(k);
    for &j in order.iter().take(k) {
        let mut v = eig.vectors.column(j);
        let pivot = v.iter().enumerate().fold(
            0,
            |best, (i, x)| if x.abs() > v[best].abs() { i } else { best },
        );
        if v[pivot] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        components.push(v);
        eigenvalues.push(eig.values[j]);
    }
    let explained_ratio = eigenvalues
        .iter()
        .map(|&e| if total > 0.0 { e / total } else { 0.0 })
        .collect();

    Ok(PcaModel {
        mean,
        components,
        eigenvalues,
        explained_ratio,
    })
}

/// `(X - mean) * components^T`
pub fn pca_transform(model: &PcaModel, x: &Matrix) -> Result<Matrix> {
    if x.ncols() != model.n_features() {
        return Err(Error::Dimension(format!(
            "input has {} features, PCA model was fitted on {}",
            x.ncols(),
            model.n_features()
        )));
    }
    let k = model.n_components();
    let mut out = Matrix::zeros(x.nrows(), k);
    for (i, row) in x.rows().enumerate() {
        for (j, comp) in model.components.iter().enumerate() {
            out[(i, j)] = row
                .iter()
                .zip(&model.mean)
                .zip(comp)
                .map(|((v, m), c)| (v - m) * c)
                .sum();
        }
    }
    Ok(out)
}

//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;
use shadowclass_core::Mat2;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniformly random point of the Bloch ball as a density matrix.
pub fn random_density<R: Rng>(rng: &mut R) -> Mat2 {
    let r = loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            break v;
        }
    };
    Mat2::new(
        c(0.5 * (1.0 + r[2]), 0.0),
        c(0.5 * r[0], -0.5 * r[1]),
        c(0.5 * r[0], 0.5 * r[1]),
        c(0.5 * (1.0 - r[2]), 0.0),
    )
}

/// `<v| m |v>`, real part.
pub fn expectation(m: &Mat2, v: [Complex64; 2]) -> f64 {
    let mv = m.apply(v);
    (v[0].conj() * mv[0] + v[1].conj() * mv[1]).re
}

// Dense Kronecker-product circuit oracle. Gate matrices are written out
// independently of the crate's gate constructors.

fn ry(t: f64) -> Matrix2<Complex64> {
    let (s, co) = (t / 2.0).sin_cos();
    Matrix2::new(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
}

fn rz(t: f64) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::from_polar(1.0, -t / 2.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        Complex64::from_polar(1.0, t / 2.0),
    )
}

fn rx(t: f64) -> Matrix2<Complex64> {
    let (s, co) = (t / 2.0).sin_cos();
    Matrix2::new(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
}

fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let k = a.kronecker(b);
    Matrix4::from_fn(|i, j| k[(i, j)])
}

pub fn oracle_unitary(f: [f64; 4], w: [f64; 2]) -> Matrix4<Complex64> {
    let id = Matrix2::identity();
    let cz = Matrix4::from_diagonal(&Vector4::new(
        c(1.0, 0.0),
        c(1.0, 0.0),
        c(1.0, 0.0),
        c(-1.0, 0.0),
    ));
    let encode = kron(&(rz(f[1]) * ry(f[0])), &id) * kron(&id, &(rz(f[3]) * ry(f[2])));
    let layer_rx = kron(&rx(w[0]), &rx(w[0]));
    let layer_rz = kron(&rz(w[1]), &rz(w[1]));
    layer_rz * cz * layer_rx * cz * encode
}

pub fn oracle_state(f: [f64; 4], w: [f64; 2]) -> [Complex64; 4] {
    let u = oracle_unitary(f, w);
    let col = u.column(0);
    [col[0], col[1], col[2], col[3]]
}

/// Sample covariance (divisor n - 1) and its eigenpairs, descending.
pub fn oracle_pca(x: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>, f64) {
    let n = x.nrows() as f64;
    let mean = x.row_mean();
    let centered = DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)] - mean[j]);
    let cov = centered.transpose() * &centered / (n - 1.0);
    let total = cov.trace();
    let eig = nalgebra::SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, k| {
        eig.eigenvectors[(r, order[k])]
    });
    (values, vectors, total)
}

/// Sine of the largest principal angle between the column spans of two
/// orthonormal bases.
pub fn max_principal_sine(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let residual = b - a * (a.transpose() * b);
    residual.singular_values().max()
}

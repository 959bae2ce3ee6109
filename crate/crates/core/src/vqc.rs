//! Exact statevector simulation of the two-qubit classifier circuit.
//!
//! Basis order is `|00>, |01>, |10>, |11>` with qubit 0 as the most
//! significant bit. The circuit applied to `|00>` is
//!
//! ```text
//! q0: RY(f0) RZ(f1) ─●─ RX(w0) ─●─ RZ(w1)
//! q1: RY(f2) RZ(f3) ─●─ RX(w0) ─●─ RZ(w1)
//! ```
//!
//! where each `●─●` is a CZ.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::mat2::Mat2;

pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn gate_ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    Mat2::real(c, -s, s, c)
}

pub fn gate_rz(theta: f64) -> Mat2 {
    let half = theta / 2.0;
    Mat2::new(
        Complex64::from_polar(1.0, -half),
        ZERO,
        ZERO,
        Complex64::from_polar(1.0, half),
    )
}

pub fn gate_rx(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let c = Complex64::new(c, 0.0);
    let mis = Complex64::new(0.0, -s);
    Mat2::new(c, mis, mis, c)
}

pub fn gate_cz() -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[1][1] = ONE;
    m[2][2] = ONE;
    m[3][3] = -ONE;
    m
}

pub fn is_unitary4(m: &Mat4, tol: f64) -> bool {
    (0..4).all(|i| {
        (0..4).all(|j| {
            let dot: Complex64 = (0..4).map(|k| m[k][i].conj() * m[k][j]).sum();
            let want = if i == j { ONE } else { ZERO };
            (dot - want).norm() <= tol
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVec2Q(pub [Complex64; 4]);

impl StateVec2Q {
    /// `|00>`
    pub fn zero() -> Self {
        Self([ONE, ZERO, ZERO, ZERO])
    }

    pub fn basis(index: usize) -> Self {
        let mut a = [ZERO; 4];
        a[index] = ONE;
        Self(a)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.0.map(|a| a.norm_sqr())
    }

    pub fn max_abs_diff(&self, other: &StateVec2Q) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Debug dump: `basis,re,im`, one row per basis state.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "basis,re,im")?;
        for (i, a) in self.0.iter().enumerate() {
            writeln!(w, "{:02b},{},{}", i, a.re, a.im)?;
        }
        Ok(())
    }
}

#[inline]
fn bit(index: usize, qubit: usize) -> usize {
    (index >> (1 - qubit)) & 1
}

/// Apply a single-qubit gate to qubit 0 or 1.
pub fn apply_1q(state: &StateVec2Q, gate: &Mat2, qubit: usize) -> StateVec2Q {
    assert!(qubit < 2, "qubit index {qubit} out of range");
    debug_assert!(gate.is_unitary(1e-10), "non-unitary single-qubit gate");
    let g = gate.0;
    let stride = 1 << (1 - qubit);
    let mut out = state.0;
    for i in (0..4).filter(|&i| bit(i, qubit) == 0) {
        let (a0, a1) = (state.0[i], state.0[i + stride]);
        out[i] = g[0][0] * a0 + g[0][1] * a1;
        out[i + stride] = g[1][0] * a0 + g[1][1] * a1;
    }
    StateVec2Q(out)
}

/// Apply a two-qubit gate whose local basis is `|x_first x_second>`.
pub fn apply_2q(state: &StateVec2Q, gate: &Mat4, pair: (usize, usize)) -> StateVec2Q {
    let (a, b) = pair;
    assert!(a < 2 && b < 2 && a != b, "invalid qubit pair {pair:?}");
    debug_assert!(is_unitary4(gate, 1e-10), "non-unitary two-qubit gate");
    let local = |i: usize| 2 * bit(i, a) + bit(i, b);
    let mut out = [ZERO; 4];
    for (i, o) in out.iter_mut().enumerate() {
        let li = local(i);
        *o = (0..4).map(|j| gate[li][local(j)] * state.0[j]).sum();
    }
    StateVec2Q(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    /// Encoded angles `f0..f3`, radians.
    pub features: [f64; 4],
    /// Trainable `w0` (RX) and `w1` (RZ), radians.
    pub weights: [f64; 2],
}

impl CircuitParams {
    pub fn new(features: [f64; 4], weights: [f64; 2]) -> Self {
        Self { features, weights }
    }

    pub fn from_slices(features: &[f64], weights: &[f64]) -> Option<Self> {
        Some(Self {
            features: features.try_into().ok()?,
            weights: weights.try_into().ok()?,
        })
    }
}

pub fn run_circuit(params: &CircuitParams) -> StateVec2Q {
    let [f0, f1, f2, f3] = params.features;
    let [w0, w1] = params.weights;
    let cz = gate_cz();

    let mut s = StateVec2Q::zero();
    s = apply_1q(&s, &gate_ry(f0), 0);
    s = apply_1q(&s, &gate_rz(f1), 0);
    s = apply_1q(&s, &gate_ry(f2), 1);
    s = apply_1q(&s, &gate_rz(f3), 1);
    s = apply_2q(&s, &cz, (0, 1));
    let rx = gate_rx(w0);
    s = apply_1q(&s, &rx, 0);
    s = apply_1q(&s, &rx, 1);
    s = apply_2q(&s, &cz, (0, 1));
    let rz = gate_rz(w1);
    s = apply_1q(&s, &rz, 0);
    apply_1q(&s, &rz, 1)
}

/// `(<Z0> + <Z1>) / 2`
pub fn z_mean_exact(state: &StateVec2Q) -> f64 {
    let p = state.probabilities();
    let z0 = p[0] + p[1] - p[2] - p[3];
    let z1 = p[0] - p[1] + p[2] - p[3];
    0.5 * (z0 + z1)
}

/// Shot-sampled estimate of [`z_mean_exact`].
pub fn z_mean_sampled<R: Rng + ?Sized>(state: &StateVec2Q, shots: u32, rng: &mut R) -> f64 {
    assert!(shots >= 1, "at least one shot is required");
    let p = state.probabilities();
    let total: f64 = p.iter().sum();
    let c0 = p[0] / total;
    let c1 = c0 + (p[1] + p[2]) / total;
    // z0 + z1 per outcome: |00> 2, |01> 0, |10> 0, |11> -2.
    let mut acc: i64 = 0;
    for _ in 0..shots {
        let u: f64 = rng.random();
        acc += if u < c0 {
            2
        } else if u < c1 {
            0
        } else {
            -2
        };
    }
    acc as f64 / (2.0 * shots as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    pub depth: u32,
    pub width: u32,
    pub n_params: u32,
}

/// Resource figures for the fixed architecture.
///
/// Depth is the conventional count of 4 encoding + 1 entangling + 2 ansatz
/// rotation layers. It does not count the second CZ inside the ansatz; see
/// [`gate_count`] for the raw number of gate applications.
pub fn circuit_metrics() -> CircuitMetrics {
    CircuitMetrics {
        depth: 7,
        width: 2,
        n_params: 2,
    }
}

/// Number of gate applications in [`run_circuit`] (single-qubit and CZ).
pub fn gate_count() -> u32 {
    4 + 1 + 2 + 1 + 2
}

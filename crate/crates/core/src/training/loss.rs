use serde::{Deserialize, Serialize};

use crate::data::Phase;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::seeding::Substream;
use crate::vqc::{run_circuit, z_mean_exact, z_mean_sampled, CircuitParams};

/// `sign(<Z>)` with ties going to Z3 (+1).
pub fn decision(z_mean: f64) -> Phase {
    if z_mean >= 0.0 {
        Phase::Z3
    } else {
        Phase::Z2
    }
}

/// Mean of `max(0, 1 - m_i)` over the margins `m_i = y_i <Z>_i`.
pub fn hinge_loss(margins: &[f64]) -> Result<f64> {
    if margins.is_empty() {
        return Err(Error::InvalidInput("hinge loss over zero samples".into()));
    }
    if margins.iter().any(|m| !m.is_finite()) {
        return Err(Error::Numerical("non-finite margin".into()));
    }
    Ok(margins.iter().map(|m| (1.0 - m).max(0.0)).sum::<f64>() / margins.len() as f64)
}

/// How `<Z>` is obtained from a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shots {
    Exact,
    Finite(u32),
}

fn check_features(features: &Matrix, n_labels: Option<usize>) -> Result<()> {
    if features.ncols() != 4 {
        return Err(Error::Dimension(format!(
            "circuit takes 4 features per sample, got {}",
            features.ncols()
        )));
    }
    if let Some(n) = n_labels {
        if n != features.nrows() {
            return Err(Error::Dimension(format!(
                "{} feature rows but {n} labels",
                features.nrows()
            )));
        }
    }
    Ok(())
}

/// `<Z>` per feature row. Sample `i` draws from `stream.child(i)` when sampled.
pub fn circuit_outputs(
    weights: &[f64],
    features: &Matrix,
    shots: Shots,
    stream: Substream,
) -> Result<Vec<f64>> {
    check_features(features, None)?;
    let weights: [f64; 2] = weights
        .try_into()
        .map_err(|_| Error::Dimension(format!("expected 2 weights, got {}", weights.len())))?;
    Ok(features
        .rows()
        .enumerate()
        .map(|(i, row)| {
            let params = CircuitParams::from_slices(row, &weights).expect("checked widths");
            let state = run_circuit(&params);
            match shots {
                Shots::Exact => z_mean_exact(&state),
                Shots::Finite(n) => z_mean_sampled(&state, n, &mut stream.child(i as u64).rng()),
            }
        })
        .collect())
}

pub fn predict(weights: &[f64], features: &Matrix) -> Result<Vec<Phase>> {
    Ok(
        circuit_outputs(weights, features, Shots::Exact, Substream::root(0))?
            .into_iter()
            .map(decision)
            .collect(),
    )
}

/// Hinge loss of the circuit classifier over a labelled feature matrix.
pub fn dataset_loss(
    weights: &[f64],
    features: &Matrix,
    labels: &[Phase],
    shots: Shots,
    stream: Substream,
) -> Result<f64> {
    check_features(features, Some(labels.len()))?;
    let z = circuit_outputs(weights, features, shots, stream)?;
    let margins: Vec<f64> = z.iter().zip(labels).map(|(z, y)| y.code() * z).collect();
    hinge_loss(&margins)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decisions() {
        assert_eq!(decision(0.73), Phase::Z3);
        assert_eq!(decision(-0.02), Phase::Z2);
        assert_eq!(decision(0.0), Phase::Z3);
        for z in [-0.9, -1e-9, 1e-9, 0.4] {
            assert_eq!(decision(z), decision(z * 37.0));
        }
    }

    #[test]
    fn hinge_values() {
        assert_eq!(hinge_loss(&[1.5, 2.0]).unwrap(), 0.0);
        assert_eq!(hinge_loss(&[0.5]).unwrap(), 0.5);
        assert_eq!(hinge_loss(&[-1.0]).unwrap(), 2.0);
        assert!(hinge_loss(&[]).is_err());
        assert!(hinge_loss(&[f64::NAN]).is_err());
    }

    fn single(features: [f64; 4]) -> Matrix {
        Matrix::from_vec(1, 4, features.to_vec()).unwrap()
    }

    #[test]
    fn single_sample_exact_loss() {
        // All-zero features and weights leave |00>, so <Z> = 1.
        let x = single([0.0; 4]);
        let s = Substream::root(0);
        assert_eq!(
            dataset_loss(&[0.0, 0.0], &x, &[Phase::Z3], Shots::Exact, s).unwrap(),
            0.0
        );
        assert_eq!(
            dataset_loss(&[0.0, 0.0], &x, &[Phase::Z2], Shots::Exact, s).unwrap(),
            2.0
        );
    }

    #[test]
    fn label_negation_flips_margins() {
        let x = Matrix::from_rows(&[
            vec![0.3, 1.0, 2.0, 0.1],
            vec![2.9, 0.2, 1.1, 3.0],
            vec![1.4, 1.4, 0.5, 2.2],
        ])
        .unwrap();
        let w = [0.4, -0.9];
        let labels = [Phase::Z2, Phase::Z3, Phase::Z3];
        let flipped: Vec<Phase> = labels
            .iter()
            .map(|p| {
                if *p == Phase::Z2 {
                    Phase::Z3
                } else {
                    Phase::Z2
                }
            })
            .collect();
        let s = Substream::root(0);
        let z = circuit_outputs(&w, &x, Shots::Exact, s).unwrap();
        let direct = |ys: &[Phase], sign: f64| {
            z.iter()
                .zip(ys)
                .map(|(z, y)| (1.0 - sign * y.code() * z).max(0.0))
                .sum::<f64>()
                / 3.0
        };
        let l = dataset_loss(&w, &x, &labels, Shots::Exact, s).unwrap();
        let lf = dataset_loss(&w, &x, &flipped, Shots::Exact, s).unwrap();
        assert!((l - direct(&labels, 1.0)).abs() < 1e-15);
        assert!((lf - direct(&labels, -1.0)).abs() < 1e-15);
        // Margins inside (-1, 1) make the two losses sum to exactly 2.
        assert!(z.iter().all(|z| z.abs() < 1.0));
        assert!((l + lf - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_loss_is_seeded() {
        let x = single([1.0, 0.5, 2.0, 0.3]);
        let s = Substream::root(42);
        let a = dataset_loss(&[0.2, 0.1], &x, &[Phase::Z2], Shots::Finite(256), s).unwrap();
        let b = dataset_loss(&[0.2, 0.1], &x, &[Phase::Z2], Shots::Finite(256), s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dimension_checks() {
        let s = Substream::root(0);
        let bad = Matrix::zeros(1, 3);
        assert!(dataset_loss(&[0.0, 0.0], &bad, &[Phase::Z2], Shots::Exact, s).is_err());
        let x = single([0.0; 4]);
        assert!(dataset_loss(&[0.0, 0.0], &x, &[], Shots::Exact, s).is_err());
        assert!(dataset_loss(&[0.0], &x, &[Phase::Z2], Shots::Exact, s).is_err());
    }
}

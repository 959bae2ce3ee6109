//! Single-qubit classical shadows.
//!
//! Each outcome `|psi>` contributes the snapshot `3|psi><psi| - I`. Averaging
//! snapshots over all shots of a qubit gives `S`, from which a density matrix
//! is reconstructed either as `(S + I) / 3` ([`ShadowMode::Paper`], always a
//! valid state but with its Bloch vector shrunk by 3 in expectation) or as
//! `S` itself ([`ShadowMode::Unbiased`]).

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, OutcomeSymbol, Sample};
use crate::error::{Error, Result};
use crate::mat2::Mat2;

/// Absolute tolerance for trace and Hermiticity checks.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShadowMode {
    /// `rho = (S + I) / 3`
    #[default]
    Paper,
    /// `rho = S`
    Unbiased,
}

impl fmt::Display for ShadowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShadowMode::Paper => "paper",
            ShadowMode::Unbiased => "unbiased",
        })
    }
}

impl FromStr for ShadowMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(ShadowMode::Paper),
            "unbiased" => Ok(ShadowMode::Unbiased),
            other => Err(Error::Config(format!(
                "unknown shadow mode {other:?} (expected paper or unbiased)"
            ))),
        }
    }
}

pub fn outcome_state(symbol: OutcomeSymbol) -> [Complex64; 2] {
    symbol.state()
}

/// `3|psi><psi| - I` for the outcome eigenstate.
pub fn shadow_operator(symbol: OutcomeSymbol) -> Mat2 {
    Mat2::outer(symbol.state()).scale(3.0) - Mat2::IDENTITY
}

/// Mean snapshot of one qubit over all shots of a sample.
pub fn average_shadow(sample: &Sample, qubit: usize) -> Result<Mat2> {
    let grid = &sample.shots;
    if qubit >= grid.n_qubits() {
        return Err(Error::InvalidInput(format!(
            "qubit {qubit} out of range for {} qubits",
            grid.n_qubits()
        )));
    }
    // Tally per symbol, then combine in the fixed order of OutcomeSymbol::ALL.
    let mut counts = [0usize; 6];
    for o in grid.column(qubit) {
        counts[symbol_slot(o)] += 1;
    }
    let t = grid.n_shots() as f64;
    Ok(OutcomeSymbol::ALL
        .iter()
        .zip(counts)
        .filter(|(_, n)| *n > 0)
        .fold(Mat2::ZERO, |acc, (&o, n)| {
            acc + shadow_operator(o).scale(n as f64 / t)
        }))
}

fn symbol_slot(o: OutcomeSymbol) -> usize {
    match o {
        OutcomeSymbol::G => 0,
        OutcomeSymbol::R => 1,
        OutcomeSymbol::Plus => 2,
        OutcomeSymbol::Minus => 3,
        OutcomeSymbol::PlusI => 4,
        OutcomeSymbol::MinusI => 5,
    }
}

pub fn reconstruct_density(shadow: &Mat2, mode: ShadowMode) -> Result<Mat2> {
    if !shadow.is_hermitian(CHECK_TOL) {
        return Err(Error::InvalidInput("shadow matrix is not Hermitian".into()));
    }
    let tr = shadow.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > CHECK_TOL {
        return Err(Error::InvalidInput(format!("shadow matrix has trace {tr}")));
    }
    Ok(match mode {
        ShadowMode::Paper => (*shadow + Mat2::IDENTITY).scale(1.0 / 3.0),
        ShadowMode::Unbiased => *shadow,
    })
}

/// `(Re Tr(rho X), Re Tr(rho Z))`
pub fn pauli_expectations(rho: &Mat2) -> (f64, f64) {
    let ex = (*rho * Mat2::PAULI_X).trace().re;
    let ez = (*rho * Mat2::PAULI_Z).trace().re;
    (ex, ez)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowEstimate {
    pub shadow: Mat2,
    pub rho: Mat2,
    pub mode: ShadowMode,
}

impl ShadowEstimate {
    pub fn for_qubit(sample: &Sample, qubit: usize, mode: ShadowMode) -> Result<Self> {
        let shadow = average_shadow(sample, qubit)?;
        let rho = reconstruct_density(&shadow, mode)?;
        Ok(Self { shadow, rho, mode })
    }
}

/// Per-(sample, qubit) `(<X>, <Z>)` values, unclipped.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationTable {
    sample_ids: Vec<String>,
    n_qubits: usize,
    values: Vec<[f64; 2]>,
}

impl ExpectationTable {
    pub fn new(sample_ids: Vec<String>, n_qubits: usize, values: Vec<[f64; 2]>) -> Result<Self> {
        if values.len() != sample_ids.len() * n_qubits {
            return Err(Error::Dimension(format!(
                "{} values for {} samples x {n_qubits} qubits",
                values.len(),
                sample_ids.len()
            )));
        }
        Ok(Self {
            sample_ids,
            n_qubits,
            values,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.sample_ids.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    /// `[<X>, <Z>]` for one cell.
    pub fn get(&self, sample: usize, qubit: usize) -> [f64; 2] {
        self.values[sample * self.n_qubits + qubit]
    }

    pub fn row(&self, sample: usize) -> &[[f64; 2]] {
        &self.values[sample * self.n_qubits..(sample + 1) * self.n_qubits]
    }

    pub fn len(&self) -> usize {
        self.values.len() * 2
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Debug dump: `sample_id,qubit,ex,ez`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "sample_id,qubit,ex,ez")?;
        for (s, id) in self.sample_ids.iter().enumerate() {
            for q in 0..self.n_qubits {
                let [ex, ez] = self.get(s, q);
                writeln!(w, "{id},{q},{ex},{ez}")?;
            }
        }
        Ok(())
    }
}

pub fn shadow_features(dataset: &Dataset, mode: ShadowMode) -> Result<ExpectationTable> {
    let n = dataset.n_qubits();
    let rows = dataset
        .samples()
        .par_iter()
        .map(|sample| {
            (0..n)
                .map(|q| {
                    let est = ShadowEstimate::for_qubit(sample, q, mode)?;
                    let (ex, ez) = pauli_expectations(&est.rho);
                    Ok([ex, ez])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ExpectationTable::new(dataset.ids(), n, rows.concat())
}

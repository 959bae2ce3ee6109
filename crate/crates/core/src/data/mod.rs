//! Measurement records: outcome symbols, samples, datasets.

mod generate;
mod io;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseErrorKind, Result};

pub use generate::{
    generate_synthetic, generate_synthetic_with, ideal_pattern, sample_pauli_measurement,
    BasisChoice, GenConfig, SiteState,
};
pub use io::{parse_dataset, parse_dataset_str, write_dataset, write_dataset_string};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliBasis {
    X,
    Y,
    Z,
}

impl PauliBasis {
    pub const ALL: [PauliBasis; 3] = [PauliBasis::X, PauliBasis::Y, PauliBasis::Z];

    /// The (+1, -1) eigenstate symbols of this basis.
    pub fn eigen_symbols(self) -> [OutcomeSymbol; 2] {
        match self {
            PauliBasis::X => [OutcomeSymbol::Plus, OutcomeSymbol::Minus],
            PauliBasis::Y => [OutcomeSymbol::PlusI, OutcomeSymbol::MinusI],
            PauliBasis::Z => [OutcomeSymbol::G, OutcomeSymbol::R],
        }
    }
}

/// One single-qubit measurement outcome, named by the eigenstate it projected onto.
///
/// `g`/`r` are the Z eigenstates |0>, |1>; `plus`/`minus` the X eigenstates;
/// `plus_i`/`minus_i` the Y eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeSymbol {
    G,
    R,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl OutcomeSymbol {
    pub const ALL: [OutcomeSymbol; 6] = [
        OutcomeSymbol::G,
        OutcomeSymbol::R,
        OutcomeSymbol::Plus,
        OutcomeSymbol::Minus,
        OutcomeSymbol::PlusI,
        OutcomeSymbol::MinusI,
    ];

    pub fn basis(self) -> PauliBasis {
        match self {
            OutcomeSymbol::G | OutcomeSymbol::R => PauliBasis::Z,
            OutcomeSymbol::Plus | OutcomeSymbol::Minus => PauliBasis::X,
            OutcomeSymbol::PlusI | OutcomeSymbol::MinusI => PauliBasis::Y,
        }
    }

    /// The eigenstate as a unit 2-vector in the (|g>, |r>) basis.
    pub fn state(self) -> [Complex64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let re = |x: f64| Complex64::new(x, 0.0);
        match self {
            OutcomeSymbol::G => [re(1.0), re(0.0)],
            OutcomeSymbol::R => [re(0.0), re(1.0)],
            OutcomeSymbol::Plus => [re(h), re(h)],
            OutcomeSymbol::Minus => [re(h), re(-h)],
            OutcomeSymbol::PlusI => [re(h), Complex64::new(0.0, h)],
            OutcomeSymbol::MinusI => [re(h), Complex64::new(0.0, -h)],
        }
    }

    /// File-format character: `g r + - i j` (`i` = +i, `j` = -i).
    pub fn to_char(self) -> char {
        match self {
            OutcomeSymbol::G => 'g',
            OutcomeSymbol::R => 'r',
            OutcomeSymbol::Plus => '+',
            OutcomeSymbol::Minus => '-',
            OutcomeSymbol::PlusI => 'i',
            OutcomeSymbol::MinusI => 'j',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        Some(match c {
            'g' => OutcomeSymbol::G,
            'r' => OutcomeSymbol::R,
            '+' => OutcomeSymbol::Plus,
            '-' => OutcomeSymbol::Minus,
            'i' => OutcomeSymbol::PlusI,
            'j' => OutcomeSymbol::MinusI,
            _ => return None,
        })
    }
}

/// Ordered-phase label. The classifier codes Z2 as -1 and Z3 as +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    Z2,
    Z3,
}

impl Phase {
    pub const ALL: [Phase; 2] = [Phase::Z2, Phase::Z3];

    pub fn code(self) -> f64 {
        match self {
            Phase::Z2 => -1.0,
            Phase::Z3 => 1.0,
        }
    }

    pub fn from_code(code: f64) -> Option<Self> {
        if code == -1.0 {
            Some(Phase::Z2)
        } else if code == 1.0 {
            Some(Phase::Z3)
        } else {
            None
        }
    }

    /// Row/column index in confusion matrices.
    pub fn index(self) -> usize {
        match self {
            Phase::Z2 => 0,
            Phase::Z3 => 1,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Z2 => "Z2",
            Phase::Z3 => "Z3",
        })
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z2" => Ok(Phase::Z2),
            "Z3" => Ok(Phase::Z3),
            other => Err(Error::InvalidInput(format!("unknown phase tag {other:?}"))),
        }
    }
}

/// `T x N` measurement grid: one row per shot, one column per qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotGrid {
    n_shots: usize,
    n_qubits: usize,
    cells: Vec<OutcomeSymbol>,
}

impl ShotGrid {
    pub fn from_rows(rows: Vec<Vec<OutcomeSymbol>>) -> Result<Self> {
        let n_shots = rows.len();
        let n_qubits = rows.first().map_or(0, Vec::len);
        if n_shots == 0 || n_qubits == 0 {
            return Err(Error::InvalidInput("shot grid must be at least 1x1".into()));
        }
        let mut cells = Vec::with_capacity(n_shots * n_qubits);
        for (t, row) in rows.into_iter().enumerate() {
            if row.len() != n_qubits {
                return Err(Error::InvalidInput(format!(
                    "shot {t} has {} qubits, expected {n_qubits}",
                    row.len()
                )));
            }
            cells.extend(row);
        }
        Ok(Self {
            n_shots,
            n_qubits,
            cells,
        })
    }

    pub(crate) fn from_cells(n_shots: usize, n_qubits: usize, cells: Vec<OutcomeSymbol>) -> Self {
        debug_assert_eq!(cells.len(), n_shots * n_qubits);
        Self {
            n_shots,
            n_qubits,
            cells,
        }
    }

    pub fn n_shots(&self) -> usize {
        self.n_shots
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, shot: usize, qubit: usize) -> OutcomeSymbol {
        self.cells[shot * self.n_qubits + qubit]
    }

    pub fn row(&self, shot: usize) -> &[OutcomeSymbol] {
        &self.cells[shot * self.n_qubits..(shot + 1) * self.n_qubits]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[OutcomeSymbol]> {
        self.cells.chunks_exact(self.n_qubits)
    }

    /// Outcomes of one qubit across all shots, in shot order.
    pub fn column(&self, qubit: usize) -> impl Iterator<Item = OutcomeSymbol> + '_ {
        self.cells[qubit..].iter().step_by(self.n_qubits).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: String,
    pub label: Phase,
    pub shots: ShotGrid,
    /// Detuning, dimensionless.
    pub detuning: Option<f64>,
    /// Blockade radius in lattice spacings.
    pub blockade_radius: Option<f64>,
}

impl Sample {
    pub fn new(id: impl Into<String>, label: Phase, shots: ShotGrid) -> Self {
        Self {
            id: id.into(),
            label,
            shots,
            detuning: None,
            blockade_radius: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<Sample>,
    n_qubits: usize,
    n_shots: usize,
}

impl Dataset {
    /// Validates that every sample shares one `(T, N)` shape and that ids are unique.
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        let first = samples.first().ok_or(Error::NoSamples)?;
        let (n_shots, n_qubits) = (first.shots.n_shots(), first.shots.n_qubits());
        let mut seen = HashSet::new();
        for s in &samples {
            if s.shots.n_shots() != n_shots || s.shots.n_qubits() != n_qubits {
                return Err(Error::InvalidInput(format!(
                    "sample {:?} has shape {}x{}, expected {n_shots}x{n_qubits}",
                    s.id,
                    s.shots.n_shots(),
                    s.shots.n_qubits()
                )));
            }
            if !seen.insert(s.id.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate sample id {:?}",
                    s.id
                )));
            }
        }
        Ok(Self {
            samples,
            n_qubits,
            n_shots,
        })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_shots(&self) -> usize {
        self.n_shots
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<Phase> {
        self.samples.iter().map(|s| s.label).collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.samples.iter().map(|s| s.id.clone()).collect()
    }

    pub fn count(&self, phase: Phase) -> usize {
        self.samples.iter().filter(|s| s.label == phase).count()
    }
}

pub(crate) fn check_symbol(line: usize, c: char) -> Result<OutcomeSymbol> {
    OutcomeSymbol::from_char(c).ok_or_else(|| Error::parse(line, ParseErrorKind::UnknownSymbol(c)))
}

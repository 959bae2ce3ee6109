//! JSON Lines dataset files.
//!
//! One sample per line:
//!
//! ```text
//! {"id":"z2-000","label":"Z2","shots":["rgrg","+-ij",...]}
//! ```
//!
//! `detuning` and `blockade_radius` are optional numeric fields placed
//! between `label` and `shots`. Shot strings use the alphabet `g r + - i j`.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{check_symbol, Dataset, Phase, Sample, ShotGrid};
use crate::error::{Error, ParseErrorKind, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    id: String,
    label: Phase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    detuning: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blockade_radius: Option<f64>,
    shots: Vec<String>,
}

pub fn write_dataset_string(dataset: &Dataset) -> String {
    let mut out = String::new();
    for s in dataset.samples() {
        let record = Record {
            id: s.id.clone(),
            label: s.label,
            detuning: s.detuning,
            blockade_radius: s.blockade_radius,
            shots: s
                .shots
                .rows()
                .map(|row| row.iter().map(|o| o.to_char()).collect())
                .collect(),
        };
        out.push_str(&serde_json::to_string(&record).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn write_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_dataset_string(dataset)).map_err(|e| Error::io(path, e))
}

pub fn parse_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dataset_str(&text)
}

/// Parse dataset text. Blank lines are ignored; line numbers are 1-based.
pub fn parse_dataset_str(text: &str) -> Result<Dataset> {
    let mut samples = Vec::new();
    let mut ids = HashSet::new();
    let mut shape: Option<(usize, usize)> = None;

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(line)
            .map_err(|e| Error::parse(lineno, ParseErrorKind::Malformed(e.to_string())))?;
        if record.shots.is_empty() {
            return Err(Error::parse(lineno, ParseErrorKind::EmptySample));
        }

        let n_qubits = record.shots[0].chars().count();
        if n_qubits == 0 {
            return Err(Error::parse(lineno, ParseErrorKind::EmptySample));
        }
        let mut cells = Vec::with_capacity(record.shots.len() * n_qubits);
        for shot in &record.shots {
            let before = cells.len();
            for c in shot.chars() {
                cells.push(check_symbol(lineno, c)?);
            }
            let found = cells.len() - before;
            if found != n_qubits {
                return Err(Error::parse(
                    lineno,
                    ParseErrorKind::Ragged {
                        what: "qubits",
                        expected: n_qubits,
                        found,
                    },
                ));
            }
        }
        let n_shots = record.shots.len();
        match shape {
            None => shape = Some((n_shots, n_qubits)),
            Some((t, n)) => {
                if t != n_shots {
                    return Err(Error::parse(
                        lineno,
                        ParseErrorKind::Ragged {
                            what: "shots",
                            expected: t,
                            found: n_shots,
                        },
                    ));
                }
                if n != n_qubits {
                    return Err(Error::parse(
                        lineno,
                        ParseErrorKind::Ragged {
                            what: "qubits",
                            expected: n,
                            found: n_qubits,
                        },
                    ));
                }
            }
        }
        if !ids.insert(record.id.clone()) {
            return Err(Error::parse(lineno, ParseErrorKind::DuplicateId(record.id)));
        }
        samples.push(Sample {
            id: record.id,
            label: record.label,
            shots: ShotGrid::from_cells(n_shots, n_qubits, cells),
            detuning: record.detuning,
            blockade_radius: record.blockade_radius,
        });
    }
    Dataset::new(samples)
}

//! Classifier training and evaluation.
//!
//! [`train_evaluate`] splits the samples, runs SPSA on the two circuit weights
//! under the hinge loss (sampled `<Z>` following the shot schedule), records a
//! metrics row every `epoch_interval` iterations, and scores the final weights
//! on all three splits.
//!
//! The shot schedule is indexed by SPSA iteration. Loss evaluations at
//! iteration `k` on side `s` for training sample `i` draw from the substream
//! `[LOSS, k, s, i]` of the SPSA seed.

mod loss;
mod metrics;
mod split;
mod spsa;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::data::Phase;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::seeding::{domain, Substream};
use crate::vqc::{circuit_metrics, CircuitMetrics};

pub use loss::{circuit_outputs, dataset_loss, decision, hinge_loss, predict, Shots};
pub use metrics::{classification_metrics, efficiency_score, ClassificationMetrics};
pub use split::{stratified_split, ClassCounts, Split, SplitSpec};
pub use spsa::{
    init_weights, spsa_run, LossQuery, ShotRange, Side, SpsaConfig, SpsaStep, SpsaTrace,
};

/// Header of the per-epoch CSV table.
pub const EPOCH_CSV_HEADER: &str = "epoch,train_loss,val_loss,train_acc,precision,f1";

pub const FIT_SCOPE_NOTE: &str = "PCA and min-max scaling were fitted on all samples before the \
     train/val/test split, so validation and test features are not fully held out.";

pub const SHOT_SCHEDULE_NOTE: &str =
    "Shot-schedule ranges are SPSA iteration indices; epoch rows are taken every epoch_interval iterations.";

/// Encoded features with their sample ids and labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFeatures {
    pub ids: Vec<String>,
    pub labels: Vec<Phase>,
    pub features: Matrix,
}

impl LabeledFeatures {
    pub fn new(ids: Vec<String>, labels: Vec<Phase>, features: Matrix) -> Result<Self> {
        if ids.len() != labels.len() || ids.len() != features.nrows() {
            return Err(Error::Dimension(format!(
                "{} ids, {} labels, {} feature rows",
                ids.len(),
                labels.len(),
                features.nrows()
            )));
        }
        Ok(Self {
            ids,
            labels,
            features,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> LabeledFeatures {
        let rows: Vec<Vec<f64>> = indices
            .iter()
            .map(|&i| self.features.row(i).to_vec())
            .collect();
        let features = if rows.is_empty() {
            Matrix::zeros(0, self.features.ncols())
        } else {
            Matrix::from_rows(&rows).expect("rows share a width")
        };
        LabeledFeatures {
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            features,
        }
    }

    /// `sample_id,label,f0,...` with shortest round-trip float formatting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let cols: Vec<String> = (0..self.features.ncols())
            .map(|j| format!("f{j}"))
            .collect();
        writeln!(w, "sample_id,label,{}", cols.join(","))?;
        for (i, (id, label)) in self.ids.iter().zip(&self.labels).enumerate() {
            let vals: Vec<String> = self.features.row(i).iter().map(f64::to_string).collect();
            writeln!(w, "{id},{label},{}", vals.join(","))?;
        }
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty features file".into()))?;
        let width = header.split(',').count().saturating_sub(2);
        let (mut ids, mut labels, mut rows) = (Vec::new(), Vec::new(), Vec::new());
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |msg: String| Error::InvalidInput(format!("features line {}: {msg}", i + 1));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != width + 2 {
                return Err(bad(format!(
                    "expected {} fields, found {}",
                    width + 2,
                    fields.len()
                )));
            }
            ids.push(fields[0].to_string());
            labels.push(fields[1].parse::<Phase>().map_err(|e| bad(e.to_string()))?);
            let row = fields[2..]
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| bad(format!("{f:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::NoSamples);
        }
        Self::new(ids, labels, Matrix::from_rows(&rows)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub spsa: SpsaConfig,
    pub split: SplitSpec,
    /// Use exact `<Z>` for epoch rows and final scores; otherwise sample with `eval_shots`.
    pub exact_eval: bool,
    pub eval_shots: u32,
    pub epoch_interval: usize,
}

impl TrainConfig {
    pub fn baseline(seed: u64) -> Self {
        Self {
            spsa: SpsaConfig {
                seed,
                ..SpsaConfig::default()
            },
            split: SplitSpec::baseline(seed),
            exact_eval: true,
            eval_shots: 512,
            epoch_interval: 20,
        }
    }

    /// Iterations after which an epoch row is recorded: `0, n, 2n, ...` and `K`.
    pub fn checkpoints(&self) -> Vec<usize> {
        let k = self.spsa.max_iters;
        let mut v: Vec<usize> = (0..k).step_by(self.epoch_interval.max(1)).collect();
        v.push(k);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRow {
    pub epoch: usize,
    /// Number of SPSA updates applied to the weights scored in this row.
    pub iteration: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    pub train_acc: f64,
    /// Training-set precision of the Z3 (+1) class.
    pub precision: f64,
    /// Training-set F1 of the Z3 (+1) class.
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitIds {
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitResult {
    pub loss: f64,
    pub predictions: Vec<Phase>,
    pub metrics: ClassificationMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub config: TrainConfig,
    pub split: SplitIds,
    pub initial_weights: Vec<f64>,
    pub final_weights: Vec<f64>,
    pub trace: Vec<SpsaStep>,
    pub epochs: Vec<EpochRow>,
    pub train: SplitResult,
    pub val: SplitResult,
    pub test: SplitResult,
    pub circuit: CircuitMetrics,
    pub efficiency_score: f64,
    pub notes: Vec<String>,
}

impl TrainReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("train report: {e}")))
    }

    pub fn epochs_csv(&self) -> String {
        let mut out = String::from(EPOCH_CSV_HEADER);
        out.push('\n');
        for r in &self.epochs {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.epoch, r.train_loss, r.val_loss, r.train_acc, r.precision, r.f1
            ));
        }
        out
    }
}

struct Scorer {
    exact: bool,
    shots: u32,
    stream: Substream,
}

impl Scorer {
    fn evaluate(&self, weights: &[f64], data: &LabeledFeatures, tag: u64) -> Result<SplitResult> {
        let shots = if self.exact {
            Shots::Exact
        } else {
            Shots::Finite(self.shots)
        };
        let z = circuit_outputs(weights, &data.features, shots, self.stream.child(tag))?;
        let margins: Vec<f64> = z
            .iter()
            .zip(&data.labels)
            .map(|(z, y)| y.code() * z)
            .collect();
        let predictions: Vec<Phase> = z.into_iter().map(decision).collect();
        Ok(SplitResult {
            loss: hinge_loss(&margins)?,
            metrics: classification_metrics(&predictions, &data.labels)?,
            predictions,
        })
    }
}

pub fn train_evaluate(data: &LabeledFeatures, config: &TrainConfig) -> Result<TrainReport> {
    if data.features.ncols() != 4 {
        return Err(Error::Dimension(format!(
            "classifier takes 4 features per sample, got {}",
            data.features.ncols()
        )));
    }
    config.spsa.validate()?;
    if !config.exact_eval && config.eval_shots == 0 {
        return Err(Error::Config("eval_shots must be at least 1".into()));
    }

    let split = stratified_split(&data.labels, &config.split)?;
    let train = data.subset(&split.train);
    let val = data.subset(&split.val);
    let test = data.subset(&split.test);

    let seed = config.spsa.seed;
    let loss_root = Substream::root(seed).child(domain::LOSS);
    let theta0 = init_weights(seed, 2);
    let trace = spsa_run(
        |q| {
            dataset_loss(
                q.theta,
                &train.features,
                &train.labels,
                Shots::Finite(q.shots),
                loss_root.path(&[q.iteration as u64, q.side.index()]),
            )
        },
        &theta0,
        &config.spsa,
    )?;

    let eval_root = Substream::root(seed).child(domain::EVAL);
    let epochs = config
        .checkpoints()
        .into_iter()
        .enumerate()
        .map(|(e, k)| {
            let scorer = Scorer {
                exact: config.exact_eval,
                shots: config.eval_shots,
                stream: eval_root.child(k as u64),
            };
            let w = trace.theta_at(k);
            let tr = scorer.evaluate(w, &train, 0)?;
            let va = scorer.evaluate(w, &val, 1)?;
            Ok(EpochRow {
                epoch: e + 1,
                iteration: k,
                train_loss: tr.loss,
                val_loss: va.loss,
                train_acc: tr.metrics.accuracy,
                precision: tr.metrics.precision[Phase::Z3.index()],
                f1: tr.metrics.f1[Phase::Z3.index()],
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let final_scorer = Scorer {
        exact: config.exact_eval,
        shots: config.eval_shots,
        stream: eval_root.child(u64::MAX),
    };
    let w = &trace.final_theta;
    let train_res = final_scorer.evaluate(w, &train, 0)?;
    let val_res = final_scorer.evaluate(w, &val, 1)?;
    let test_res = final_scorer.evaluate(w, &test, 2)?;

    let circuit = circuit_metrics();
    let efficiency = efficiency_score(
        test_res.metrics.accuracy,
        circuit.n_params as f64,
        circuit.depth as f64,
        circuit.width as f64,
    );

    Ok(TrainReport {
        config: config.clone(),
        split: SplitIds {
            train: train.ids.clone(),
            val: val.ids.clone(),
            test: test.ids.clone(),
        },
        initial_weights: theta0,
        final_weights: trace.final_theta.clone(),
        trace: trace.steps,
        epochs,
        train: train_res,
        val: val_res,
        test: test_res,
        circuit,
        efficiency_score: efficiency,
        notes: vec![FIT_SCOPE_NOTE.to_string(), SHOT_SCHEDULE_NOTE.to_string()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoints_for_default_run() {
        assert_eq!(
            TrainConfig::baseline(0).checkpoints(),
            vec![0, 20, 40, 60, 80, 100, 120]
        );
    }

    #[test]
    fn features_csv_round_trip() {
        let f = Matrix::from_rows(&[vec![0.1, 0.2, 1.0 / 3.0, 3.0], vec![0.0, 1e-17, 2.5, 1.0]])
            .unwrap();
        let lf = LabeledFeatures::new(vec!["a".into(), "b".into()], vec![Phase::Z2, Phase::Z3], f)
            .unwrap();
        let mut buf = Vec::new();
        lf.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("sample_id,label,f0,f1,f2,f3\n"));
        assert_eq!(LabeledFeatures::from_csv(&text).unwrap(), lf);
        assert!(LabeledFeatures::from_csv("sample_id,label,f0\n").is_err());
        assert!(LabeledFeatures::from_csv("sample_id,label,f0\na,Z5,1\n").is_err());
    }

    #[test]
    fn rejects_wrong_width() {
        let lf =
            LabeledFeatures::new(vec!["a".into()], vec![Phase::Z2], Matrix::zeros(1, 3)).unwrap();
        assert!(matches!(
            train_evaluate(&lf, &TrainConfig::baseline(0)),
            Err(Error::Dimension(_))
        ));
    }
}

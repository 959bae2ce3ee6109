//! Run configuration: a flat TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use shadowclass_core::training::{ClassCounts, ShotRange};
use shadowclass_core::{Error, GenConfig, Result, ShadowMode, SplitSpec, SpsaConfig, TrainConfig};

/// Keys accepted in the config file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub report: Option<PathBuf>,

    pub n_samples_per_class: Option<usize>,
    pub n_qubits: Option<usize>,
    pub n_shots: Option<usize>,
    pub flip_noise: Option<f64>,

    pub mode: Option<String>,
    pub k: Option<usize>,

    pub learning_rate: Option<f64>,
    pub perturbation: Option<f64>,
    pub decay: Option<f64>,
    pub max_iters: Option<usize>,
    pub shots_early: Option<u32>,
    pub shots_late: Option<u32>,
    pub shot_switch: Option<usize>,

    pub train_z2: Option<usize>,
    pub train_z3: Option<usize>,
    pub val_z2: Option<usize>,
    pub val_z3: Option<usize>,
    pub test_z2: Option<usize>,
    pub test_z3: Option<usize>,

    pub exact_eval: Option<bool>,
    pub eval_shots: Option<u32>,
    pub epoch_interval: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Flag values that override the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub mode: Option<String>,
    pub exact_eval: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Paths {
    pub out: PathBuf,
    pub dataset: PathBuf,
    pub model: PathBuf,
    pub report: PathBuf,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub paths: Paths,
    pub gen: GenConfig,
    pub mode: ShadowMode,
    pub k: usize,
    pub train: TrainConfig,
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Self> {
        let seed = flags
            .seed
            .or(file.seed)
            .unwrap_or(GenConfig::default().seed);
        let out = flags
            .out
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from("out"));
        let paths = Paths {
            dataset: flags
                .dataset
                .or(file.dataset)
                .unwrap_or_else(|| out.join("dataset.jsonl")),
            model: flags
                .model
                .or(file.model)
                .unwrap_or_else(|| out.join("pipeline_model.json")),
            report: flags
                .report
                .or(file.report)
                .unwrap_or_else(|| out.join("report.json")),
            out,
        };

        let d = GenConfig::default();
        let gen = GenConfig {
            n_samples_per_class: file.n_samples_per_class.unwrap_or(d.n_samples_per_class),
            n_qubits: file.n_qubits.unwrap_or(d.n_qubits),
            n_shots: file.n_shots.unwrap_or(d.n_shots),
            flip_noise: file.flip_noise.unwrap_or(d.flip_noise),
            seed,
        };
        gen.validate()?;

        let mode = match flags.mode.or(file.mode) {
            Some(m) => m.parse()?,
            None => ShadowMode::default(),
        };
        let k = file
            .k
            .unwrap_or(shadowclass_core::features::DEFAULT_COMPONENTS);

        let base = TrainConfig::baseline(seed);
        let s = &base.spsa;
        let max_iters = file.max_iters.unwrap_or(s.max_iters);
        let switch = file
            .shot_switch
            .unwrap_or(s.shot_schedule[0].end)
            .min(max_iters);
        let early = file.shots_early.unwrap_or(s.shot_schedule[0].shots);
        let late = file.shots_late.unwrap_or(s.shot_schedule[1].shots);
        let mut shot_schedule = Vec::new();
        if switch > 0 {
            shot_schedule.push(ShotRange {
                start: 0,
                end: switch,
                shots: early,
            });
        }
        if switch < max_iters {
            shot_schedule.push(ShotRange {
                start: switch,
                end: max_iters,
                shots: late,
            });
        }
        let spsa = SpsaConfig {
            learning_rate: file.learning_rate.unwrap_or(s.learning_rate),
            perturbation: file.perturbation.unwrap_or(s.perturbation),
            decay: file.decay.unwrap_or(s.decay),
            max_iters,
            shot_schedule,
            seed,
        };
        spsa.validate()?;

        let b = &base.split;
        let split = SplitSpec {
            train: ClassCounts::new(
                file.train_z2.unwrap_or(b.train.z2),
                file.train_z3.unwrap_or(b.train.z3),
            ),
            val: ClassCounts::new(
                file.val_z2.unwrap_or(b.val.z2),
                file.val_z3.unwrap_or(b.val.z3),
            ),
            test: ClassCounts::new(
                file.test_z2.unwrap_or(b.test.z2),
                file.test_z3.unwrap_or(b.test.z3),
            ),
            seed,
        };
        let train = TrainConfig {
            spsa,
            split,
            exact_eval: flags
                .exact_eval
                .or(file.exact_eval)
                .unwrap_or(base.exact_eval),
            eval_shots: file.eval_shots.unwrap_or(base.eval_shots),
            epoch_interval: file.epoch_interval.unwrap_or(base.epoch_interval),
        };

        Ok(Self {
            seed,
            paths,
            gen,
            mode,
            k,
            train,
        })
    }
}

//! Dataset to report in one call.

use crate::data::Dataset;
use crate::error::Result;
use crate::features::{pipeline_apply, pipeline_fit, FeaturePipelineModel};
use crate::shadow::{shadow_features, ExpectationTable, ShadowMode};
use crate::training::{train_evaluate, LabeledFeatures, TrainConfig, TrainReport};

#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub expectations: ExpectationTable,
    pub model: FeaturePipelineModel,
    pub features: LabeledFeatures,
}

/// Shadow features, then a feature pipeline fitted on every sample.
pub fn preprocess(dataset: &Dataset, mode: ShadowMode, k: usize) -> Result<Preprocessed> {
    let expectations = shadow_features(dataset, mode)?;
    let model = pipeline_fit(&expectations, k)?;
    let encoded = pipeline_apply(&model, &expectations)?;
    let features = LabeledFeatures::new(dataset.ids(), dataset.labels(), encoded)?;
    Ok(Preprocessed {
        expectations,
        model,
        features,
    })
}

pub fn run_end_to_end(
    dataset: &Dataset,
    mode: ShadowMode,
    k: usize,
    train: &TrainConfig,
) -> Result<(Preprocessed, TrainReport)> {
    let pre = preprocess(dataset, mode, k)?;
    let report = train_evaluate(&pre.features, train)?;
    Ok((pre, report))
}

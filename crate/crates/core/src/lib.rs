//! Binary Z2/Z3 phase classification from randomized single-qubit Pauli
//! measurements.
//!
//! The pipeline runs: measurement records ([`data`]) to per-qubit classical
//! shadows and `<X>`, `<Z>` estimates ([`shadow`]), to four angle features via
//! PCA and min-max scaling ([`features`]), into a two-qubit variational
//! circuit ([`vqc`]) whose two weights are fitted by SPSA under the hinge
//! loss ([`training`]).

pub mod data;
pub mod error;
pub mod features;
pub mod linalg;
pub mod mat2;
pub mod pipeline;
pub mod seeding;
pub mod shadow;
pub mod training;
pub mod vqc;

pub use data::{Dataset, GenConfig, OutcomeSymbol, PauliBasis, Phase, Sample, ShotGrid};
pub use error::{Error, ParseErrorKind, Result};
pub use features::{FeaturePipelineModel, MinMaxModel, PcaModel};
pub use linalg::Matrix;
pub use mat2::Mat2;
pub use pipeline::{preprocess, run_end_to_end, Preprocessed};
pub use shadow::{ExpectationTable, ShadowEstimate, ShadowMode};
pub use training::{LabeledFeatures, SplitSpec, SpsaConfig, TrainConfig, TrainReport};
pub use vqc::{CircuitMetrics, CircuitParams, StateVec2Q};

//! Desk-scale conditional rectified flow on synthetic 2D data.

mod checkpoint;
pub mod dataset;
pub mod experiment;
pub mod mlp;
pub mod model;

pub use checkpoint::{read_checkpoint, write_checkpoint, Checkpoint};
pub use dataset::{make_dataset, ConditioningCode, Specificity, ToyDatasetSpec, ToySample, ToyTask};
pub use experiment::{diversity_experiment, ExperimentConfig, ExperimentReport, Method, PromptMogParams, SeedSetReport};
pub use model::{euler_integrate, euler_sample, train_velocity_field, FlowModel, TrainConfig, VelocityField};

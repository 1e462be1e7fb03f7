//! Three-layer graph convolutional classifier.
//!
//! Each layer computes `Ŝ H W + b` with `Ŝ = D̂^{-1/2} (A + I) D̂^{-1/2}`;
//! the first two are followed by ReLU. Node outputs of the last layer are
//! mean-pooled per graph into class logits. Gradients are derived by hand
//! and composed explicitly in [`GnnModel::backward`].

mod adjacency;
mod io;
mod layer;
mod model;
mod train;

pub use adjacency::{normalized_adjacency, NormalizedAdjacency};
pub use io::{load_model, read_model, save_model, write_model, MODEL_MAGIC, MODEL_VERSION};
pub use layer::{GcnLayer, GraphConv, LayerGrads};
pub use model::{ForwardCache, GnnModel, Gradients, ModelOptimizer, HIDDEN_CHANNELS};
pub use train::{evaluate, predict, train, train_with, EpochMetrics, Evaluation, TrainConfig};

use thiserror::Error;

use crate::graphdata::GraphError;
use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum GnnError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cache was produced before the latest parameter update")]
    StaleCache,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("graph {0} in batch has no nodes")]
    EmptyGraph(usize),
    #[error("model has {model} classes but dataset has {dataset}")]
    ClassCountMismatch { model: usize, dataset: usize },
    #[error("model expects feature width {model} but data has {data}")]
    FeatureWidthMismatch { model: usize, data: usize },
    #[error("invalid batch: {0}")]
    InvalidBatch(String),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("not a model file (bad magic {0:?})")]
    BadMagic([u8; 4]),
    #[error("unsupported model format version {found} (expected {expected})")]
    FormatVersionMismatch { found: u32, expected: u32 },
    #[error("corrupt model record: {0}")]
    CorruptRecord(String),
}

pub type Result<T> = std::result::Result<T, GnnError>;

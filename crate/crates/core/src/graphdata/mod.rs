//! Trajectory graphs: construction from chain codes, statistics, datasets,
//! stratified splitting, disjoint-union batching and the `TGDS` file format.

mod batch;
mod dataset;
mod graph;
mod io;

pub use batch::{batch_graphs, BatchedGraph};
pub use dataset::{split_shuffle, GraphDataset};
pub use graph::{build_graph, graph_stats, to_dot, GraphStats, TrajectoryGraph, FEATURE_WIDTH};
pub use io::{
    load_dataset, read_dataset, save_dataset, write_dataset, DATASET_MAGIC, DATASET_VERSION,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("{codes} codes need {expected} points, got {points}", expected = codes + 1)]
    LengthMismatch { codes: usize, points: usize },
    #[error("edge ({0}, {1}) out of range for {2} nodes")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("duplicate undirected edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("cannot batch zero graphs")]
    EmptyBatch,
    #[error("feature width mismatch: expected {expected}, found {found}")]
    FeatureWidthMismatch { expected: usize, found: usize },
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("train fraction {0} must lie strictly between 0 and 1")]
    InvalidFraction(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("not a dataset file (bad magic {0:?})")]
    BadMagic([u8; 4]),
    #[error("unsupported dataset format version {found} (expected {expected})")]
    FormatVersionMismatch { found: u32, expected: u32 },
    #[error("corrupt dataset record: {0}")]
    CorruptRecord(String),
}

pub type Result<T> = std::result::Result<T, GraphError>;

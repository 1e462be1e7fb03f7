//! Handwritten trajectory recognition with chain-code graphs and a small
//! graph convolutional network.
//!
//! Offline samples go through [`raster`] (binarize, thin), [`trace`]
//! (drawing-order recovery) and [`chaincode`]; online samples start from
//! [`strokes`]. Both end as [`graphdata::TrajectoryGraph`] values that the
//! [`gnn`] module trains on. [`pipeline`] wires the stages together.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`, with `*F32` variants for `f32`.
//!
//! ```
//! use trajgnn::chaincode::Profile;
//! use trajgnn::gnn::{evaluate, train, TrainConfig, HIDDEN_CHANNELS};
//! use trajgnn::graphdata::{split_shuffle, GraphDataset};
//! use trajgnn::pipeline::strokes_to_graph;
//! use trajgnn::synthetic::{generate, Distortion};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let samples = generate(50, 7, &Distortion::default());
//! let graphs = samples
//!     .iter()
//!     .map(|s| strokes_to_graph::<f64>(s, Profile::Online))
//!     .collect::<Result<Vec<_>, _>>()?;
//! let ds = GraphDataset::new(graphs, 10, Some(Profile::Online))?;
//! let (train_set, test_set) = split_shuffle(&ds, 0.8, 7)?;
//!
//! let mut model = trajgnn::GnnModel::new(10, HIDDEN_CHANNELS, 10, 7);
//! train(&mut model, &train_set, &TrainConfig { epochs: 20, ..TrainConfig::default() })?;
//! assert!(evaluate(&model, &test_set)?.error_rate < 50.0);
//! # Ok(())
//! # }
//! ```

pub mod chaincode;
pub mod gnn;
pub mod graphdata;
pub mod numerics;
pub mod pipeline;
pub mod raster;
pub mod scalar;
pub mod strokes;
pub mod synthetic;
pub mod trace;

pub use scalar::Scalar;

pub type Matrix = numerics::Matrix<f64>;
pub type Point = chaincode::Point<f64>;
pub type Trajectory = chaincode::Trajectory<f64>;
pub type TrajectoryGraph = graphdata::TrajectoryGraph<f64>;
pub type BatchedGraph = graphdata::BatchedGraph<f64>;
pub type GraphDataset = graphdata::GraphDataset<f64>;
pub type GnnModel = gnn::GnnModel<f64>;

pub type MatrixF32 = numerics::Matrix<f32>;
pub type TrajectoryF32 = chaincode::Trajectory<f32>;
pub type TrajectoryGraphF32 = graphdata::TrajectoryGraph<f32>;
pub type GraphDatasetF32 = graphdata::GraphDataset<f32>;
pub type GnnModelF32 = gnn::GnnModel<f32>;

//! Dense linear algebra, activations, softmax cross-entropy and the Adam
//! optimizer, each with a hand-derived gradient.
//!
//! Everything here works on row-major [`Matrix`] values. Products use a fixed
//! summation order so identical inputs give bit-identical outputs.

mod adam;
mod matrix;
mod ops;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use matrix::Matrix;
pub use ops::{relu, relu_backward, softmax_cross_entropy, softmax_rows};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
}

pub type Result<T> = std::result::Result<T, NumericsError>;

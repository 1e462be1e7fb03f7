use rand::Rng;

use super::{NormalizedAdjacency, Result};
use crate::numerics::Matrix;
use crate::Scalar;

/// Gradients of one layer's parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerGrads<T> {
    pub weight: Matrix<T>,
    pub bias: Matrix<T>,
}

/// A graph convolution operator: a forward map over `(Ŝ, H)` and its exact
/// backward pass.
pub trait GraphConv<T: Scalar> {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;

    fn forward(&self, adj: &NormalizedAdjacency<T>, input: &Matrix<T>) -> Result<Matrix<T>>;

    /// Given `upstream = ∂L/∂output`, returns `∂L/∂input` and the parameter
    /// gradients. `input` must be the value passed to the matching forward.
    fn backward(
        &self,
        adj: &NormalizedAdjacency<T>,
        input: &Matrix<T>,
        upstream: &Matrix<T>,
    ) -> Result<(Matrix<T>, LayerGrads<T>)>;
}

/// `Ŝ H W + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct GcnLayer<T> {
    pub weight: Matrix<T>,
    /// 1 × out_dim.
    pub bias: Matrix<T>,
}

impl<T: Scalar> GcnLayer<T> {
    pub fn zeros(in_dim: usize, out_dim: usize) -> Self {
        Self {
            weight: Matrix::zeros(in_dim, out_dim),
            bias: Matrix::zeros(1, out_dim),
        }
    }

    /// Glorot-uniform weights, zero bias.
    pub fn glorot<R: Rng>(in_dim: usize, out_dim: usize, rng: &mut R) -> Self {
        let limit = (6.0 / (in_dim + out_dim) as f64).sqrt();
        let data = (0..in_dim * out_dim)
            .map(|_| T::lit(rng.gen_range(-limit..=limit)))
            .collect();
        Self {
            weight: Matrix::from_vec(in_dim, out_dim, data).expect("sized"),
            bias: Matrix::zeros(1, out_dim),
        }
    }
}

impl<T: Scalar> GraphConv<T> for GcnLayer<T> {
    fn in_dim(&self) -> usize {
        self.weight.rows()
    }

    fn out_dim(&self) -> usize {
        self.weight.cols()
    }

    fn forward(&self, adj: &NormalizedAdjacency<T>, input: &Matrix<T>) -> Result<Matrix<T>> {
        // evaluated as Ŝ (H W)
        let projected = input.matmul(&self.weight)?;
        let mut out = adj.propagate(&projected)?;
        out.add_row_broadcast(&self.bias)?;
        Ok(out)
    }

    fn backward(
        &self,
        adj: &NormalizedAdjacency<T>,
        input: &Matrix<T>,
        upstream: &Matrix<T>,
    ) -> Result<(Matrix<T>, LayerGrads<T>)> {
        // Ŝ is symmetric, so Ŝᵀ · upstream = Ŝ · upstream
        let spread = adj.propagate(upstream)?;
        let weight = input.t_matmul(&spread)?;
        let bias = upstream.column_sums();
        let grad_input = spread.matmul_t(&self.weight)?;
        Ok((grad_input, LayerGrads { weight, bias }))
    }
}

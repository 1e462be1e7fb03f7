use super::{GnnError, Result};
use crate::graphdata::BatchedGraph;
use crate::numerics::Matrix;
use crate::Scalar;

/// `D̂^{-1/2} (A + I) D̂^{-1/2}` of a batch, stored as one dense block per graph.
/// The full matrix is block-diagonal and symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedAdjacency<T> {
    blocks: Vec<Matrix<T>>,
    offsets: Vec<usize>,
}

impl<T: Scalar> NormalizedAdjacency<T> {
    pub fn from_batch(batch: &BatchedGraph<T>) -> Result<Self> {
        let offsets = batch.node_offsets.clone();
        if offsets.len() != batch.num_graphs() + 1
            || offsets.first() != Some(&0)
            || offsets.last() != Some(&batch.num_nodes())
        {
            return Err(GnnError::InvalidBatch(
                "node offsets do not cover the batch".into(),
            ));
        }
        let mut blocks: Vec<Matrix<T>> = offsets
            .windows(2)
            .map(|w| Matrix::identity(w[1] - w[0]))
            .collect();
        for &(a, b) in &batch.edges {
            let g = *batch
                .graph_id
                .get(a)
                .ok_or_else(|| GnnError::InvalidBatch(format!("edge ({a}, {b}) out of range")))?;
            if batch.graph_id.get(b) != Some(&g) {
                return Err(GnnError::InvalidBatch(format!(
                    "edge ({a}, {b}) crosses graph boundary"
                )));
            }
            let (i, j) = (a - offsets[g], b - offsets[g]);
            let block = &mut blocks[g];
            block[(i, j)] += T::one();
            if i != j {
                block[(j, i)] += T::one();
            }
        }
        for block in &mut blocks {
            let inv_sqrt: Vec<T> = (0..block.rows())
                .map(|r| T::one() / block.row(r).iter().copied().sum::<T>().sqrt())
                .collect();
            for r in 0..block.rows() {
                for (c, v) in block.row_mut(r).iter_mut().enumerate() {
                    *v = *v * inv_sqrt[r] * inv_sqrt[c];
                }
            }
        }
        Ok(Self { blocks, offsets })
    }

    pub fn num_nodes(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn blocks(&self) -> &[Matrix<T>] {
        &self.blocks
    }

    /// `Ŝ · h`, block by block.
    pub fn propagate(&self, h: &Matrix<T>) -> Result<Matrix<T>> {
        if h.rows() != self.num_nodes() {
            return Err(crate::numerics::NumericsError::ShapeMismatch {
                op: "propagate",
                left: (self.num_nodes(), self.num_nodes()),
                right: h.shape(),
            }
            .into());
        }
        let cols = h.cols();
        let mut out = Matrix::zeros(h.rows(), cols);
        for (block, &start) in self.blocks.iter().zip(&self.offsets) {
            for i in 0..block.rows() {
                let out_row = &mut out.as_mut_slice()[(start + i) * cols..(start + i + 1) * cols];
                for (j, &s) in block.row(i).iter().enumerate() {
                    if s == T::zero() {
                        continue;
                    }
                    for (o, &x) in out_row.iter_mut().zip(h.row(start + j)) {
                        *o += s * x;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let n = self.num_nodes();
        let mut dense = Matrix::zeros(n, n);
        for (block, &start) in self.blocks.iter().zip(&self.offsets) {
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    dense[(start + i, start + j)] = block[(i, j)];
                }
            }
        }
        dense
    }
}

/// Dense `N × N` normalized adjacency of a batch.
pub fn normalized_adjacency<T: Scalar>(batch: &BatchedGraph<T>) -> Result<Matrix<T>> {
    Ok(NormalizedAdjacency::from_batch(batch)?.to_dense())
}

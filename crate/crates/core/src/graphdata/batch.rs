use std::borrow::Borrow;

use super::{GraphError, Result, TrajectoryGraph};
use crate::numerics::Matrix;
use crate::Scalar;

/// Disjoint union of several graphs. Nodes of graph `g` occupy the
/// contiguous range `node_offsets[g]..node_offsets[g + 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchedGraph<T> {
    pub node_features: Matrix<T>,
    pub edges: Vec<(usize, usize)>,
    pub graph_id: Vec<usize>,
    pub labels: Vec<usize>,
    pub node_offsets: Vec<usize>,
}

impl<T: Scalar> BatchedGraph<T> {
    pub fn num_graphs(&self) -> usize {
        self.labels.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.graph_id.len()
    }

    pub fn feature_width(&self) -> usize {
        self.node_features.cols()
    }

    /// Node count of graph `g`.
    pub fn graph_size(&self, g: usize) -> usize {
        self.node_offsets[g + 1] - self.node_offsets[g]
    }
}

/// Stacks `graphs` into one block-diagonal graph, shifting each graph's edge
/// indices by the number of nodes before it.
pub fn batch_graphs<T: Scalar, G: Borrow<TrajectoryGraph<T>>>(
    graphs: &[G],
) -> Result<BatchedGraph<T>> {
    let first = graphs.first().ok_or(GraphError::EmptyBatch)?.borrow();
    let width = first.feature_width();
    let total: usize = graphs.iter().map(|g| g.borrow().num_nodes()).sum();

    let mut data = Vec::with_capacity(total * width);
    let mut edges = Vec::new();
    let mut graph_id = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(graphs.len());
    let mut node_offsets = Vec::with_capacity(graphs.len() + 1);
    node_offsets.push(0);

    for (id, g) in graphs.iter().enumerate() {
        let g = g.borrow();
        if g.feature_width() != width {
            return Err(GraphError::FeatureWidthMismatch {
                expected: width,
                found: g.feature_width(),
            });
        }
        let offset = graph_id.len();
        data.extend_from_slice(g.node_features().as_slice());
        edges.extend(g.edges().iter().map(|&(a, b)| (a + offset, b + offset)));
        graph_id.extend(std::iter::repeat_n(id, g.num_nodes()));
        labels.push(g.label());
        node_offsets.push(graph_id.len());
    }

    Ok(BatchedGraph {
        node_features: Matrix::from_vec(total, width, data).expect("widths checked"),
        edges,
        graph_id,
        labels,
        node_offsets,
    })
}

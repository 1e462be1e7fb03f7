use std::collections::HashSet;
use std::fmt::Write as _;

use super::{GraphError, Result};
use crate::chaincode::{ChainCode, Trajectory};
use crate::numerics::Matrix;
use crate::Scalar;

/// Node feature width: 8 direction one-hot entries plus normalized (x, y).
pub const FEATURE_WIDTH: usize = 10;

/// Undirected graph with per-node features and one class label.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryGraph<T> {
    node_features: Matrix<T>,
    edges: Vec<(usize, usize)>,
    label: usize,
}

impl<T: Scalar> TrajectoryGraph<T> {
    /// Validates that edges reference existing nodes and that no undirected
    /// edge appears twice. Self-loops are representable.
    pub fn new(node_features: Matrix<T>, edges: Vec<(usize, usize)>, label: usize) -> Result<Self> {
        let n = node_features.rows();
        let mut seen = HashSet::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(GraphError::EdgeOutOfRange(a, b, n));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(Self {
            node_features,
            edges,
            label,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.node_features.rows()
    }

    pub fn feature_width(&self) -> usize {
        self.node_features.cols()
    }

    pub fn node_features(&self) -> &Matrix<T> {
        &self.node_features
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn label(&self) -> usize {
        self.label
    }

    /// Relabels nodes so that old node `i` becomes node `perm[i]`.
    pub fn permute_nodes(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_nodes();
        assert_eq!(perm.len(), n, "permutation length");
        let mut features = Matrix::zeros(n, self.feature_width());
        for (old, &new) in perm.iter().enumerate() {
            features
                .row_mut(new)
                .copy_from_slice(self.node_features.row(old));
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        Self::new(features, edges, self.label)
    }
}

/// Builds the path graph of a chain code: one node per segment endpoint and
/// one edge per segment. Node `i` carries the one-hot code of its outgoing
/// segment (zeros for the last node) and its bounding-box-normalized position.
pub fn build_graph<T: Scalar>(
    code: &ChainCode,
    resampled: &Trajectory<T>,
    label: usize,
) -> Result<TrajectoryGraph<T>> {
    let points = resampled.points();
    if points.len() != code.len() + 1 {
        return Err(GraphError::LengthMismatch {
            codes: code.len(),
            points: points.len(),
        });
    }

    let (mut min_x, mut max_x) = (T::infinity(), T::neg_infinity());
    let (mut min_y, mut max_y) = (T::infinity(), T::neg_infinity());
    for p in points {
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
    }
    let half = T::lit(0.5);
    let normalize = |v: T, lo: T, hi: T| {
        if hi > lo {
            (v - lo) / (hi - lo)
        } else {
            half
        }
    };

    let n = points.len();
    let mut features = Matrix::zeros(n, FEATURE_WIDTH);
    for (i, p) in points.iter().enumerate() {
        let row = features.row_mut(i);
        if let Some(&c) = code.codes().get(i) {
            row[c as usize] = T::one();
        }
        row[8] = normalize(p.x, min_x, max_x);
        row[9] = normalize(p.y, min_y, max_y);
    }
    let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
    TrajectoryGraph::new(features, edges, label)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub degree_sequence: Vec<usize>,
    pub isolated_nodes: usize,
    pub self_loops: usize,
}

/// Degrees count each self-loop twice, so the degree sum is `2 |E|`.
pub fn graph_stats<T: Scalar>(g: &TrajectoryGraph<T>) -> GraphStats {
    let mut degree_sequence = vec![0; g.num_nodes()];
    let mut self_loops = 0;
    for &(a, b) in g.edges() {
        degree_sequence[a] += 1;
        degree_sequence[b] += 1;
        if a == b {
            self_loops += 1;
        }
    }
    let isolated_nodes = degree_sequence.iter().filter(|&&d| d == 0).count();
    GraphStats {
        degree_sequence,
        isolated_nodes,
        self_loops,
    }
}

/// Graphviz rendering with one line per node and one per edge.
pub fn to_dot<T: Scalar>(g: &TrajectoryGraph<T>) -> String {
    let mut out = String::from("graph trajectory {\n");
    for i in 0..g.num_nodes() {
        let row = g.node_features().row(i);
        let code = row
            .iter()
            .take(8)
            .position(|&v| v == T::one())
            .map_or_else(|| "-".to_string(), |c| c.to_string());
        let _ = writeln!(out, "  n{i} [label=\"{i}:{code}\"];");
    }
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "  n{a} -- n{b};");
    }
    out.push_str("}\n");
    out
}

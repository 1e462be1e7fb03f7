use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GraphError, Result, TrajectoryGraph};
use crate::chaincode::Profile;
use crate::Scalar;

/// Labeled graphs sharing one feature width.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphDataset<T> {
    graphs: Vec<TrajectoryGraph<T>>,
    num_classes: usize,
    pub profile: Option<Profile>,
}

impl<T: Scalar> GraphDataset<T> {
    pub fn new(
        graphs: Vec<TrajectoryGraph<T>>,
        num_classes: usize,
        profile: Option<Profile>,
    ) -> Result<Self> {
        if let Some(first) = graphs.first() {
            let width = first.feature_width();
            for g in &graphs {
                if g.feature_width() != width {
                    return Err(GraphError::FeatureWidthMismatch {
                        expected: width,
                        found: g.feature_width(),
                    });
                }
                if g.label() >= num_classes {
                    return Err(GraphError::LabelOutOfRange {
                        label: g.label(),
                        classes: num_classes,
                    });
                }
            }
        }
        Ok(Self {
            graphs,
            num_classes,
            profile,
        })
    }

    pub fn graphs(&self) -> &[TrajectoryGraph<T>] {
        &self.graphs
    }

    pub fn into_graphs(self) -> Vec<TrajectoryGraph<T>> {
        self.graphs
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Feature width of the first graph, if any.
    pub fn feature_width(&self) -> Option<usize> {
        self.graphs.first().map(TrajectoryGraph::feature_width)
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes];
        for g in &self.graphs {
            counts[g.label()] += 1;
        }
        counts
    }

    /// Keeps the graphs at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            graphs: indices.iter().map(|&i| self.graphs[i].clone()).collect(),
            num_classes: self.num_classes,
            profile: self.profile,
        }
    }
}

/// Stratified shuffled split. Each class contributes
/// `round(count * train_fraction)` graphs to the training side; both sides are
/// then shuffled. The result depends only on the dataset and `seed`.
pub fn split_shuffle<T: Scalar>(
    ds: &GraphDataset<T>,
    train_fraction: f64,
    seed: u64,
) -> Result<(GraphDataset<T>, GraphDataset<T>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(GraphError::InvalidFraction(train_fraction));
    }
    if ds.is_empty() {
        return Err(GraphError::EmptyDataset);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_class = vec![Vec::new(); ds.num_classes()];
    for (i, g) in ds.graphs().iter().enumerate() {
        by_class[g.label()].push(i);
    }

    let (mut train, mut test) = (Vec::new(), Vec::new());
    for mut members in by_class {
        members.shuffle(&mut rng);
        let n_train = (members.len() as f64 * train_fraction).round() as usize;
        test.extend_from_slice(&members[n_train..]);
        members.truncate(n_train);
        train.extend(members);
    }
    train.shuffle(&mut rng);
    test.shuffle(&mut rng);
    Ok((ds.subset(&train), ds.subset(&test)))
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GcnLayer, GnnError, GraphConv, LayerGrads, NormalizedAdjacency, Result};
use crate::graphdata::BatchedGraph;
use crate::numerics::{relu, relu_backward, softmax_cross_entropy, AdamConfig, AdamState, Matrix};
use crate::Scalar;

pub const HIDDEN_CHANNELS: usize = 16;

/// Three GCN layers `F → hidden → hidden → C` with global mean pooling.
#[derive(Clone, Debug, PartialEq)]
pub struct GnnModel<T> {
    pub layers: [GcnLayer<T>; 3],
    /// Bumped on every optimizer step; caches remember the value they saw.
    version: u64,
}

/// Intermediate values of one forward pass.
#[derive(Clone, Debug)]
pub struct ForwardCache<T> {
    adjacency: NormalizedAdjacency<T>,
    input: Matrix<T>,
    pre1: Matrix<T>,
    act1: Matrix<T>,
    pre2: Matrix<T>,
    act2: Matrix<T>,
    node_offsets: Vec<usize>,
    version: u64,
}

impl<T> ForwardCache<T> {
    pub fn node_offsets(&self) -> &[usize] {
        &self.node_offsets
    }

    /// Inputs of the two ReLUs.
    pub fn pre_activations(&self) -> [&Matrix<T>; 2] {
        [&self.pre1, &self.pre2]
    }
}

/// Gradients for `[layer1, layer2, layer3]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients<T> {
    pub layers: [LayerGrads<T>; 3],
}

impl<T: Scalar> Gradients<T> {
    /// Parameter gradients in the order W₁, b₁, W₂, b₂, W₃, b₃.
    pub fn params(&self) -> [&Matrix<T>; 6] {
        let [a, b, c] = &self.layers;
        [&a.weight, &a.bias, &b.weight, &b.bias, &c.weight, &c.bias]
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            layers: self.layers.clone().map(|g| LayerGrads {
                weight: g.weight.scale(s),
                bias: g.bias.scale(s),
            }),
        }
    }
}

impl<T: Scalar> GnnModel<T> {
    /// Glorot-uniform initialization from `seed`.
    pub fn new(feature_width: usize, hidden: usize, num_classes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_layers([
            GcnLayer::glorot(feature_width, hidden, &mut rng),
            GcnLayer::glorot(hidden, hidden, &mut rng),
            GcnLayer::glorot(hidden, num_classes, &mut rng),
        ])
    }

    /// Panics unless consecutive layer widths chain.
    pub fn from_layers(layers: [GcnLayer<T>; 3]) -> Self {
        assert_eq!(layers[0].out_dim(), layers[1].in_dim(), "layer 1 → 2 width");
        assert_eq!(layers[1].out_dim(), layers[2].in_dim(), "layer 2 → 3 width");
        for layer in &layers {
            assert_eq!(layer.bias.shape(), (1, layer.out_dim()), "bias shape");
        }
        Self { layers, version: 0 }
    }

    pub fn feature_width(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn hidden(&self) -> usize {
        self.layers[0].out_dim()
    }

    pub fn num_classes(&self) -> usize {
        self.layers[2].out_dim()
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    /// Parameters in the order W₁, b₁, W₂, b₂, W₃, b₃.
    pub fn params(&self) -> [&Matrix<T>; 6] {
        let [a, b, c] = &self.layers;
        [&a.weight, &a.bias, &b.weight, &b.bias, &c.weight, &c.bias]
    }

    /// Mutable parameters; invalidates outstanding forward caches.
    pub fn params_mut(&mut self) -> [&mut Matrix<T>; 6] {
        self.version += 1;
        let [a, b, c] = &mut self.layers;
        [
            &mut a.weight,
            &mut a.bias,
            &mut b.weight,
            &mut b.bias,
            &mut c.weight,
            &mut c.bias,
        ]
    }

    pub fn forward(&self, batch: &BatchedGraph<T>) -> Result<(Matrix<T>, ForwardCache<T>)> {
        if batch.feature_width() != self.feature_width() {
            return Err(GnnError::FeatureWidthMismatch {
                model: self.feature_width(),
                data: batch.feature_width(),
            });
        }
        if let Some(g) = (0..batch.num_graphs()).find(|&g| batch.graph_size(g) == 0) {
            return Err(GnnError::EmptyGraph(g));
        }
        let adjacency = NormalizedAdjacency::from_batch(batch)?;
        let input = batch.node_features.clone();
        let [l1, l2, l3] = &self.layers;
        let pre1 = l1.forward(&adjacency, &input)?;
        let act1 = relu(&pre1);
        let pre2 = l2.forward(&adjacency, &act1)?;
        let act2 = relu(&pre2);
        let out = l3.forward(&adjacency, &act2)?;
        let logits = mean_pool(&out, &batch.node_offsets);
        let cache = ForwardCache {
            adjacency,
            input,
            pre1,
            act1,
            pre2,
            act2,
            node_offsets: batch.node_offsets.clone(),
            version: self.version,
        };
        Ok((logits, cache))
    }

    /// Parameter gradients given `∂L/∂logits` for the cached forward pass.
    pub fn backward(
        &self,
        cache: &ForwardCache<T>,
        grad_logits: &Matrix<T>,
    ) -> Result<Gradients<T>> {
        if cache.version != self.version {
            return Err(GnnError::StaleCache);
        }
        let graphs = cache.node_offsets.len() - 1;
        if grad_logits.shape() != (graphs, self.num_classes()) {
            return Err(crate::numerics::NumericsError::ShapeMismatch {
                op: "backward",
                left: (graphs, self.num_classes()),
                right: grad_logits.shape(),
            }
            .into());
        }
        let [l1, l2, l3] = &self.layers;
        let adj = &cache.adjacency;
        let d_out = mean_unpool(grad_logits, &cache.node_offsets);
        let (d_act2, g3) = l3.backward(adj, &cache.act2, &d_out)?;
        let d_pre2 = relu_backward(&cache.pre2, &d_act2)?;
        let (d_act1, g2) = l2.backward(adj, &cache.act1, &d_pre2)?;
        let d_pre1 = relu_backward(&cache.pre1, &d_act1)?;
        let (_, g1) = l1.backward(adj, &cache.input, &d_pre1)?;
        Ok(Gradients {
            layers: [g1, g2, g3],
        })
    }

    /// Mean cross-entropy of the batch.
    pub fn loss(&self, batch: &BatchedGraph<T>) -> Result<T> {
        let (logits, _) = self.forward(batch)?;
        Ok(softmax_cross_entropy(&logits, &batch.labels)?.0)
    }

    /// Loss, logits and parameter gradients for one batch.
    pub fn loss_and_grads(&self, batch: &BatchedGraph<T>) -> Result<(T, Matrix<T>, Gradients<T>)> {
        let (logits, cache) = self.forward(batch)?;
        let (loss, grad) = softmax_cross_entropy(&logits, &batch.labels)?;
        let grads = self.backward(&cache, &grad)?;
        Ok((loss, logits, grads))
    }
}

/// Row `g` is the mean of rows `offsets[g]..offsets[g + 1]`.
fn mean_pool<T: Scalar>(nodes: &Matrix<T>, offsets: &[usize]) -> Matrix<T> {
    let mut out = Matrix::zeros(offsets.len() - 1, nodes.cols());
    for (g, w) in offsets.windows(2).enumerate() {
        let count = T::from_usize_lossy(w[1] - w[0]);
        let row = out.row_mut(g);
        for r in w[0]..w[1] {
            for (o, &v) in row.iter_mut().zip(nodes.row(r)) {
                *o += v;
            }
        }
        for o in row.iter_mut() {
            *o /= count;
        }
    }
    out
}

fn mean_unpool<T: Scalar>(grad: &Matrix<T>, offsets: &[usize]) -> Matrix<T> {
    let mut out = Matrix::zeros(*offsets.last().unwrap_or(&0), grad.cols());
    for (g, w) in offsets.windows(2).enumerate() {
        let count = T::from_usize_lossy(w[1] - w[0]);
        for r in w[0]..w[1] {
            for (o, &v) in out.row_mut(r).iter_mut().zip(grad.row(g)) {
                *o = v / count;
            }
        }
    }
    out
}

/// Adam state for each of the six parameters.
#[derive(Clone, Debug)]
pub struct ModelOptimizer<T> {
    states: Vec<AdamState<T>>,
}

impl<T: Scalar> ModelOptimizer<T> {
    pub fn new(model: &GnnModel<T>, config: AdamConfig<T>) -> Self {
        Self {
            states: model
                .params()
                .iter()
                .map(|p| AdamState::for_param(p, config))
                .collect(),
        }
    }

    pub fn step(&mut self, model: &mut GnnModel<T>, grads: &Gradients<T>) -> Result<()> {
        for ((param, grad), state) in model
            .params_mut()
            .into_iter()
            .zip(grads.params())
            .zip(&mut self.states)
        {
            state.step(param, grad)?;
        }
        Ok(())
    }

    pub fn steps_taken(&self) -> u64 {
        self.states.first().map_or(0, |s| s.t)
    }
}

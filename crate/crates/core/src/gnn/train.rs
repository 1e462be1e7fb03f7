use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GnnError, GnnModel, ModelOptimizer, Result};
use crate::graphdata::{batch_graphs, GraphDataset, TrajectoryGraph};
use crate::numerics::{softmax_cross_entropy, AdamConfig, Matrix};
use crate::Scalar;

const EVAL_BATCH: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub seed: u64,
    /// When false, the epoch-0 order is reused for every epoch.
    pub shuffle_each_epoch: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 50,
            batch_size: 64,
            lr: 0.01,
            seed: 17,
            shuffle_each_epoch: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(GnnError::InvalidConfig("epochs must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(GnnError::InvalidConfig(
                "batch size must be at least 1".into(),
            ));
        }
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(GnnError::InvalidConfig(format!(
                "learning rate {} is not positive",
                self.lr
            )));
        }
        Ok(())
    }

    /// Sample order for `epoch`; depends only on the seed and the epoch.
    pub fn epoch_order(&self, epoch: usize, len: usize) -> Vec<usize> {
        let stream = if self.shuffle_each_epoch {
            epoch as u64
        } else {
            0
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(&mut rng);
        order
    }
}

/// Metrics of one epoch, accumulated over its batches before each update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochMetrics {
    /// 1-based.
    pub epoch: usize,
    /// Sample-weighted mean cross-entropy.
    pub loss: f64,
    /// Fraction in `[0, 1]`.
    pub train_accuracy: f64,
}

pub fn train<T: Scalar>(
    model: &mut GnnModel<T>,
    train_set: &GraphDataset<T>,
    config: &TrainConfig,
) -> Result<Vec<EpochMetrics>> {
    train_with(model, train_set, config, |_, _| {})
}

/// Like [`train`], calling `observe` after every epoch with the updated model.
pub fn train_with<T: Scalar, F>(
    model: &mut GnnModel<T>,
    train_set: &GraphDataset<T>,
    config: &TrainConfig,
    mut observe: F,
) -> Result<Vec<EpochMetrics>>
where
    F: FnMut(&EpochMetrics, &GnnModel<T>),
{
    config.validate()?;
    check_compatible(model, train_set)?;
    let graphs = train_set.graphs();
    let mut optimizer =
        ModelOptimizer::new(model, AdamConfig::default().with_lr(T::lit(config.lr)));
    let mut history = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let order = config.epoch_order(epoch, graphs.len());
        let mut loss_sum = 0.0;
        let mut correct = 0usize;
        for chunk in order.chunks(config.batch_size) {
            let members: Vec<&TrajectoryGraph<T>> = chunk.iter().map(|&i| &graphs[i]).collect();
            let batch = batch_graphs(&members)?;
            let (logits, cache) = model.forward(&batch)?;
            let (loss, grad) = softmax_cross_entropy(&logits, &batch.labels)?;
            let grads = model.backward(&cache, &grad)?;
            optimizer.step(model, &grads)?;

            loss_sum += loss.to_f64_lossy() * chunk.len() as f64;
            correct += argmax_rows(&logits)
                .iter()
                .zip(&batch.labels)
                .filter(|(p, l)| p == l)
                .count();
        }
        let metrics = EpochMetrics {
            epoch: epoch + 1,
            loss: loss_sum / graphs.len() as f64,
            train_accuracy: correct as f64 / graphs.len() as f64,
        };
        observe(&metrics, model);
        history.push(metrics);
    }
    Ok(history)
}

fn check_compatible<T: Scalar>(model: &GnnModel<T>, ds: &GraphDataset<T>) -> Result<()> {
    if ds.is_empty() {
        return Err(GnnError::EmptyDataset);
    }
    if ds.num_classes() != model.num_classes() {
        return Err(GnnError::ClassCountMismatch {
            model: model.num_classes(),
            dataset: ds.num_classes(),
        });
    }
    if let Some(width) = ds.feature_width().filter(|&w| w != model.feature_width()) {
        return Err(GnnError::FeatureWidthMismatch {
            model: model.feature_width(),
            data: width,
        });
    }
    Ok(())
}

/// Index of the largest entry per row; ties go to the smallest index.
fn argmax_rows<T: Scalar>(logits: &Matrix<T>) -> Vec<usize> {
    (0..logits.rows())
        .map(|r| {
            let row = logits.row(r);
            let mut best = 0;
            for (c, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = c;
                }
            }
            best
        })
        .collect()
}

/// Predicted class of every graph, in dataset order.
pub fn predict<T: Scalar>(
    model: &GnnModel<T>,
    graphs: &[TrajectoryGraph<T>],
) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(graphs.len());
    for chunk in graphs.chunks(EVAL_BATCH) {
        let (logits, _) = model.forward(&batch_graphs(chunk)?)?;
        out.extend(argmax_rows(&logits));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    /// Percent misclassified.
    pub error_rate: f64,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
}

impl Evaluation {
    pub fn total(&self) -> usize {
        self.confusion.iter().flatten().sum()
    }

    pub fn correct(&self) -> usize {
        (0..self.confusion.len())
            .map(|c| self.confusion[c][c])
            .sum()
    }
}

pub fn evaluate<T: Scalar>(model: &GnnModel<T>, ds: &GraphDataset<T>) -> Result<Evaluation> {
    check_compatible(model, ds)?;
    let classes = model.num_classes();
    let mut confusion = vec![vec![0usize; classes]; classes];
    let predictions = predict(model, ds.graphs())?;
    for (g, p) in ds.graphs().iter().zip(predictions) {
        confusion[g.label()][p] += 1;
    }
    let wrong = ds.len() - (0..classes).map(|c| confusion[c][c]).sum::<usize>();
    Ok(Evaluation {
        error_rate: 100.0 * wrong as f64 / ds.len() as f64,
        confusion,
    })
}

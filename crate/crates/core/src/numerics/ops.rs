use super::{Matrix, NumericsError, Result};
use crate::Scalar;

pub fn relu<T: Scalar>(x: &Matrix<T>) -> Matrix<T> {
    x.map(|v| if v > T::zero() { v } else { T::zero() })
}

/// Passes `upstream` through where `x > 0` and zeroes it elsewhere.
pub fn relu_backward<T: Scalar>(x: &Matrix<T>, upstream: &Matrix<T>) -> Result<Matrix<T>> {
    if x.shape() != upstream.shape() {
        return Err(NumericsError::ShapeMismatch {
            op: "relu_backward",
            left: x.shape(),
            right: upstream.shape(),
        });
    }
    Ok(x.zip_with(upstream, |v, g| if v > T::zero() { g } else { T::zero() }))
}

/// Row-wise softmax with max subtraction.
pub fn softmax_rows<T: Scalar>(logits: &Matrix<T>) -> Matrix<T> {
    let mut out = logits.clone();
    for r in 0..out.rows() {
        let row = out.row_mut(r);
        let max = row.iter().copied().fold(T::neg_infinity(), T::max);
        let mut total = T::zero();
        for v in row.iter_mut() {
            *v = (*v - max).exp();
            total += *v;
        }
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    out
}

/// Mean cross-entropy of row-wise softmax against `labels`, and its gradient
/// with respect to `logits`: `(softmax - onehot) / rows`.
pub fn softmax_cross_entropy<T: Scalar>(
    logits: &Matrix<T>,
    labels: &[usize],
) -> Result<(T, Matrix<T>)> {
    let (rows, classes) = logits.shape();
    if labels.len() != rows || rows == 0 {
        return Err(NumericsError::ShapeMismatch {
            op: "softmax_cross_entropy",
            left: logits.shape(),
            right: (labels.len(), 1),
        });
    }
    if let Some(&label) = labels.iter().find(|&&l| l >= classes) {
        return Err(NumericsError::LabelOutOfRange { label, classes });
    }

    let n = T::from_usize_lossy(rows);
    let mut grad = softmax_rows(logits);
    let mut loss = T::zero();
    for (r, &label) in labels.iter().enumerate() {
        let row = logits.row(r);
        let max = row.iter().copied().fold(T::neg_infinity(), T::max);
        let log_sum = row.iter().map(|&v| (v - max).exp()).sum::<T>().ln();
        loss += log_sum - (row[label] - max);

        let g = grad.row_mut(r);
        g[label] -= T::one();
        for v in g.iter_mut() {
            *v /= n;
        }
    }
    Ok((loss / n, grad))
}

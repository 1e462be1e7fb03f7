use super::{Matrix, NumericsError, Result};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdamConfig<T> {
    pub lr: T,
    pub beta1: T,
    pub beta2: T,
    pub eps: T,
}

impl<T: Scalar> Default for AdamConfig<T> {
    fn default() -> Self {
        Self {
            lr: T::lit(0.01),
            beta1: T::lit(0.9),
            beta2: T::lit(0.999),
            eps: T::lit(1e-8),
        }
    }
}

impl<T: Scalar> AdamConfig<T> {
    pub fn with_lr(mut self, lr: T) -> Self {
        self.lr = lr;
        self
    }
}

/// First/second moment estimates for one parameter matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState<T> {
    pub m: Matrix<T>,
    pub v: Matrix<T>,
    pub t: u64,
    pub config: AdamConfig<T>,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(rows: usize, cols: usize, config: AdamConfig<T>) -> Self {
        Self {
            m: Matrix::zeros(rows, cols),
            v: Matrix::zeros(rows, cols),
            t: 0,
            config,
        }
    }

    pub fn for_param(param: &Matrix<T>, config: AdamConfig<T>) -> Self {
        Self::new(param.rows(), param.cols(), config)
    }

    /// One bias-corrected Adam update of `param` in place.
    pub fn step(&mut self, param: &mut Matrix<T>, grad: &Matrix<T>) -> Result<()> {
        for other in [grad.shape(), self.m.shape()] {
            if param.shape() != other {
                return Err(NumericsError::ShapeMismatch {
                    op: "adam_step",
                    left: param.shape(),
                    right: other,
                });
            }
        }
        let AdamConfig {
            lr,
            beta1,
            beta2,
            eps,
        } = self.config;
        self.t += 1;
        let t = i32::try_from(self.t).unwrap_or(i32::MAX);
        let correction1 = T::one() - beta1.powi(t);
        let correction2 = T::one() - beta2.powi(t);

        let params = param.as_mut_slice();
        let ms = self.m.as_mut_slice();
        let vs = self.v.as_mut_slice();
        for (((p, &g), m), v) in params.iter_mut().zip(grad.as_slice()).zip(ms).zip(vs) {
            *m = beta1 * *m + (T::one() - beta1) * g;
            *v = beta2 * *v + (T::one() - beta2) * g * g;
            let m_hat = *m / correction1;
            let v_hat = *v / correction2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
        }
        Ok(())
    }
}

pub fn adam_step<T: Scalar>(
    param: &mut Matrix<T>,
    grad: &Matrix<T>,
    state: &mut AdamState<T>,
) -> Result<()> {
    state.step(param, grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_with_unit_gradient() {
        // t=1: m = 0.1, v = 0.001, m̂ = 1, v̂ = 1, update = 0.01 / (1 + 1e-8)
        let mut p = Matrix::<f64>::row_vector(&[0.0]);
        let mut s = AdamState::for_param(&p, AdamConfig::default());
        adam_step(&mut p, &Matrix::row_vector(&[1.0]), &mut s).unwrap();
        let expected = -0.01 / (1.0 + 1e-8);
        assert!((p[(0, 0)] - expected).abs() < 1e-15);
        assert!((s.m[(0, 0)] - 0.1).abs() < 1e-15);
        assert!((s.v[(0, 0)] - 0.001).abs() < 1e-15);
    }

    #[test]
    fn zero_gradient_leaves_param() {
        let mut p = Matrix::row_vector(&[1.5, -2.0]);
        let mut s = AdamState::for_param(&p, AdamConfig::default());
        adam_step(&mut p, &Matrix::zeros(1, 2), &mut s).unwrap();
        assert_eq!(p.as_slice(), &[1.5, -2.0]);
    }

    #[test]
    fn state_bookkeeping() {
        let mut p = Matrix::<f64>::row_vector(&[0.0]);
        let mut s = AdamState::for_param(&p, AdamConfig::default());
        let g = Matrix::row_vector(&[0.5]);
        adam_step(&mut p, &g, &mut s).unwrap();
        let v1 = s.v[(0, 0)];
        adam_step(&mut p, &g, &mut s).unwrap();
        assert_eq!(s.t, 2);
        assert!(s.v[(0, 0)] > v1);
        assert!(s.v.as_slice().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn shape_mismatch() {
        let mut p = Matrix::<f64>::zeros(2, 2);
        let mut s = AdamState::for_param(&p, AdamConfig::default());
        assert!(adam_step(&mut p, &Matrix::zeros(1, 2), &mut s).is_err());
    }
}

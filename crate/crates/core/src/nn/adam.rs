//! Adam with bias correction.

use std::collections::BTreeMap;

use super::params::{OptimizerSnapshot, Parameter};
use super::tensor::Tensor;

#[derive(Debug, Clone, Copy)]
pub struct AdamHyper {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamHyper {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdamState {
    first_moment: Vec<Tensor>,
    second_moment: Vec<Tensor>,
    step_count: u64,
    pub hyper: AdamHyper,
}

impl AdamState {
    pub fn new(params: &[Parameter], hyper: AdamHyper) -> Self {
        let zeros: Vec<Tensor> = params
            .iter()
            .map(|p| Tensor::zeros(p.tensor.rows(), p.tensor.cols()))
            .collect();
        Self {
            first_moment: zeros.clone(),
            second_moment: zeros,
            step_count: 0,
            hyper,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// One update from the gradients currently held in `params[i].grad`.
    pub fn step(&mut self, params: &mut [Parameter]) {
        assert_eq!(params.len(), self.first_moment.len());
        self.step_count += 1;
        let t = self.step_count as i32;
        let h = self.hyper;
        let bc1 = 1.0 - h.beta1.powi(t);
        let bc2 = 1.0 - h.beta2.powi(t);
        for (i, p) in params.iter_mut().enumerate() {
            let m = self.first_moment[i].values_mut();
            let v = self.second_moment[i].values_mut();
            let w = p.tensor.values_mut();
            for ((w, (m, v)), &g) in w
                .iter_mut()
                .zip(m.iter_mut().zip(v.iter_mut()))
                .zip(p.grad.values())
            {
                *m = h.beta1 * *m + (1.0 - h.beta1) * g;
                *v = h.beta2 * *v + (1.0 - h.beta2) * g * g;
                let m_hat = *m / bc1;
                let v_hat = *v / bc2;
                *w -= h.lr * m_hat / (v_hat.sqrt() + h.epsilon);
            }
        }
    }

    pub fn snapshot(&self, params: &[Parameter]) -> OptimizerSnapshot {
        OptimizerSnapshot {
            first_moment: params
                .iter()
                .zip(&self.first_moment)
                .map(|(p, m)| (p.name.clone(), m.clone()))
                .collect::<BTreeMap<_, _>>(),
            second_moment: params
                .iter()
                .zip(&self.second_moment)
                .map(|(p, v)| (p.name.clone(), v.clone()))
                .collect::<BTreeMap<_, _>>(),
            step_count: self.step_count,
        }
    }
}

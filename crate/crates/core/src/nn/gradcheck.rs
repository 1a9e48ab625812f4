//! Central finite-difference gradient checking.
//!
//! The numeric side stays independent of the tape: it only re-evaluates the
//! caller's loss closure at perturbed parameter values.

use super::params::Parameter;
use super::tensor::Tensor;
use super::NnError;

/// Numeric gradients of `loss_fn` w.r.t. every parameter entry, central
/// differences at the given epsilon.
pub fn finite_difference_grads<F>(
    params: &mut [Parameter],
    mut loss_fn: F,
    eps: f64,
) -> Result<Vec<Tensor>, NnError>
where
    F: FnMut(&[Parameter]) -> Result<f64, NnError>,
{
    let mut out = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let mut grad = Tensor::zeros(params[i].tensor.rows(), params[i].tensor.cols());
        for j in 0..params[i].tensor.len() {
            let orig = params[i].tensor.values()[j];
            params[i].tensor.values_mut()[j] = orig + eps;
            let up = loss_fn(params)?;
            params[i].tensor.values_mut()[j] = orig - eps;
            let down = loss_fn(params)?;
            params[i].tensor.values_mut()[j] = orig;
            grad.values_mut()[j] = (up - down) / (2.0 * eps);
        }
        out.push(grad);
    }
    Ok(out)
}

/// Relative error with a small absolute floor so near-zero gradients compare
/// on an absolute scale.
pub fn max_relative_error(analytic: &Tensor, numeric: &Tensor) -> f64 {
    analytic
        .values()
        .iter()
        .zip(numeric.values())
        .map(|(&a, &n)| (a - n).abs() / a.abs().max(n.abs()).max(1e-3))
        .fold(0.0, f64::max)
}

/// Compares grads already populated in `params` (by a backward pass) against
/// finite differences of `loss_fn`. Returns the worst relative error.
pub fn max_grad_relative_error<F>(
    params: &mut [Parameter],
    loss_fn: F,
    eps: f64,
) -> Result<f64, NnError>
where
    F: FnMut(&[Parameter]) -> Result<f64, NnError>,
{
    let analytic: Vec<Tensor> = params.iter().map(|p| p.grad.clone()).collect();
    let numeric = finite_difference_grads(params, loss_fn, eps)?;
    Ok(analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| max_relative_error(a, n))
        .fold(0.0, f64::max))
}

//! Minimal dense-tensor math with reverse-mode gradients and Adam.
//!
//! Enough to train an attention layer and a small perceptron; nothing more.
//! 64-bit floats throughout.

mod adam;
mod gradcheck;
mod params;
mod tape;
mod tensor;

pub use adam::{AdamHyper, AdamState};
pub use gradcheck::{finite_difference_grads, max_grad_relative_error, max_relative_error};
pub use params::{glorot_uniform, load_params, save_params, Parameter, ParamsFile, PARAMS_SCHEMA_VERSION};
pub use tape::{segment_softmax_values, sigmoid, Tape, Var};
pub use tensor::Tensor;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("loss must be a scalar")]
    NotScalarLoss,
    #[error("non-finite value in tensor")]
    NonFinite,
    #[error("backward has not been run on this tape")]
    BackwardNotRun,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("parameter file error: {0}")]
    ParamsFile(String),
}

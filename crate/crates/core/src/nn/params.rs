//! Named parameters, seeded initialization, and the `*.params.json` format.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::tensor::Tensor;
use super::NnError;

pub const PARAMS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct Parameter {
    pub name: String,
    pub tensor: Tensor,
    pub grad: Tensor,
}

impl Parameter {
    pub fn new(name: impl Into<String>, tensor: Tensor) -> Self {
        let grad = Tensor::zeros(tensor.rows(), tensor.cols());
        Self {
            name: name.into(),
            tensor,
            grad,
        }
    }

    pub fn zero_grad(&mut self) {
        for g in self.grad.values_mut() {
            *g = 0.0;
        }
    }
}

/// Uniform(−a, a) with a = sqrt(6 / (fan_in + fan_out)).
pub fn glorot_uniform(rows: usize, cols: usize, rng: &mut impl Rng) -> Tensor {
    let a = (6.0 / (rows + cols) as f64).sqrt();
    let values: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(-a..a)).collect();
    Tensor::new(vec![rows, cols], values).expect("glorot values are finite")
}

/// Serialized optimizer state, stored alongside parameters when present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerSnapshot {
    pub first_moment: BTreeMap<String, Tensor>,
    pub second_moment: BTreeMap<String, Tensor>,
    pub step_count: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsFile {
    pub schema_version: u32,
    pub tensors: BTreeMap<String, Tensor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerSnapshot>,
}

pub fn save_params(
    params: &[Parameter],
    optimizer: Option<OptimizerSnapshot>,
    w: &mut impl Write,
) -> Result<(), NnError> {
    let file = ParamsFile {
        schema_version: PARAMS_SCHEMA_VERSION,
        tensors: params
            .iter()
            .map(|p| (p.name.clone(), p.tensor.clone()))
            .collect(),
        optimizer,
    };
    let json = serde_json::to_string_pretty(&file).map_err(|e| NnError::ParamsFile(e.to_string()))?;
    w.write_all(json.as_bytes())
        .map_err(|e| NnError::ParamsFile(e.to_string()))
}

pub fn load_params(r: &mut impl Read) -> Result<ParamsFile, NnError> {
    let mut buf = String::new();
    r.read_to_string(&mut buf)
        .map_err(|e| NnError::ParamsFile(e.to_string()))?;
    let file: ParamsFile =
        serde_json::from_str(&buf).map_err(|e| NnError::ParamsFile(e.to_string()))?;
    if file.schema_version != PARAMS_SCHEMA_VERSION {
        return Err(NnError::ParamsFile(format!(
            "unsupported params schema version {}",
            file.schema_version
        )));
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn glorot_range_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = glorot_uniform(4, 6, &mut rng);
        let a = (6.0 / 10.0f64).sqrt();
        assert!(t.values().iter().all(|v| v.abs() < a));
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(t, glorot_uniform(4, 6, &mut rng2));
    }

    #[test]
    fn params_roundtrip() {
        let params = vec![
            Parameter::new("w", Tensor::from_rows(&[vec![1.0, 2.0]])),
            Parameter::new("b", Tensor::from_rows(&[vec![0.5]])),
        ];
        let mut buf = Vec::new();
        save_params(&params, None, &mut buf).unwrap();
        let file = load_params(&mut buf.as_slice()).unwrap();
        assert_eq!(file.tensors["w"], params[0].tensor);
        assert_eq!(file.tensors["b"], params[1].tensor);
    }
}

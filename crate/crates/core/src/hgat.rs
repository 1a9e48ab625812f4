//! Heterogeneous graph attention network for per-component vulnerability
//! exposure classification.
//!
//! Each layer computes multi-head attention per edge type: scores are
//! `leaky_relu(aᵀ [W_src h_u ‖ W_dst h_v])`, normalized with a softmax over
//! every destination node's incoming edges of that type. Per-head messages
//! are concatenated, contributions from different edge types arriving at the
//! same node type are combined (sum by default), every node keeps a learned
//! self-projection, and the result passes through elu.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeType, HeteroGraph, NodeType};
use crate::nn::{
    glorot_uniform, AdamHyper, AdamState, NnError, Parameter, Tape, Tensor, Var,
};

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum HgatError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("training labels are single-class on the train split")]
    DegenerateLabels,
    #[error("feature schema version mismatch: model {model}, graph {graph}")]
    SchemaMismatch { model: u32, graph: u32 },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("model file error: {0}")]
    ModelFile(String),
    #[error(transparent)]
    Nn(#[from] NnError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossTypeAggregation {
    Sum,
    Mean,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HgatConfig {
    pub hidden_dim: usize,
    pub heads: usize,
    pub layers: usize,
    pub leaky_slope: f64,
    pub dropout_rate: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub class_weight_positive: f64,
    /// Exclude the HAS_VULNERABILITY relation and the CVE-derived component
    /// features during training and inference, so the has-any-CVE label
    /// cannot be read off the input directly.
    pub mask_label_leakage: bool,
    pub aggregation: CrossTypeAggregation,
}

impl Default for HgatConfig {
    fn default() -> Self {
        Self {
            hidden_dim: 32,
            heads: 2,
            layers: 2,
            leaky_slope: 0.2,
            dropout_rate: 0.1,
            epochs: 200,
            learning_rate: 0.01,
            seed: 42,
            class_weight_positive: 1.0,
            mask_label_leakage: true,
            aggregation: CrossTypeAggregation::Sum,
        }
    }
}

impl HgatConfig {
    pub fn validate(&self) -> Result<(), HgatError> {
        if self.heads == 0 {
            return Err(HgatError::InvalidConfig("heads must be >= 1".into()));
        }
        if self.hidden_dim % self.heads != 0 {
            return Err(HgatError::InvalidConfig(format!(
                "hidden_dim {} not divisible by heads {}",
                self.hidden_dim, self.heads
            )));
        }
        if self.layers == 0 {
            return Err(HgatError::InvalidConfig("layers must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(HgatError::InvalidConfig("dropout_rate must be in [0,1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HgatModel {
    pub config: HgatConfig,
    pub feature_schema_version: u32,
    pub params: Vec<Parameter>,
}

// component feature columns derived from CVE findings (label leakage for the
// has-any-CVE task)
const LEAKY_COMPONENT_COLUMNS: [usize; 3] = [0, 1, 2];

fn edge_name(t: EdgeType) -> &'static str {
    match t {
        EdgeType::DependsOn => "DEPENDS_ON",
        EdgeType::HasVulnerability => "HAS_VULNERABILITY",
        EdgeType::HasCwe => "HAS_CWE",
        EdgeType::RevDependsOn => "REV_DEPENDS_ON",
        EdgeType::RevHasVulnerability => "REV_HAS_VULNERABILITY",
        EdgeType::RevHasCwe => "REV_HAS_CWE",
    }
}

fn node_name(t: NodeType) -> &'static str {
    match t {
        NodeType::Component => "component",
        NodeType::Cve => "cve",
        NodeType::Cwe => "cwe",
    }
}

impl HgatModel {
    /// Glorot-initialized parameters for the given input dimensions
    /// (per node type), seeded from `config.seed`.
    pub fn init(config: HgatConfig, input_dims: &BTreeMap<NodeType, usize>, schema_version: u32)
        -> Result<Self, HgatError>
    {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let dh = config.hidden_dim / config.heads;
        let mut params = Vec::new();
        let dim_at = |layer: usize, t: NodeType| -> usize {
            if layer == 0 {
                *input_dims.get(&t).unwrap_or(&1)
            } else {
                config.hidden_dim
            }
        };
        for layer in 0..config.layers {
            for t in NodeType::ALL {
                params.push(Parameter::new(
                    format!("layer{layer}.self.{}", node_name(t)),
                    glorot_uniform(dim_at(layer, t), config.hidden_dim, &mut rng),
                ));
            }
            for et in EdgeType::ALL {
                let (src, dst) = et.endpoints();
                for head in 0..config.heads {
                    let base = format!("layer{layer}.{}.head{head}", edge_name(et));
                    params.push(Parameter::new(
                        format!("{base}.w_src"),
                        glorot_uniform(dim_at(layer, src), dh, &mut rng),
                    ));
                    params.push(Parameter::new(
                        format!("{base}.w_dst"),
                        glorot_uniform(dim_at(layer, dst), dh, &mut rng),
                    ));
                    params.push(Parameter::new(
                        format!("{base}.attn"),
                        glorot_uniform(2 * dh, 1, &mut rng),
                    ));
                }
            }
        }
        params.push(Parameter::new(
            "out.weight",
            glorot_uniform(config.hidden_dim, 1, &mut rng),
        ));
        params.push(Parameter::new("out.bias", Tensor::zeros(1, 1)));
        Ok(Self {
            config,
            feature_schema_version: schema_version,
            params,
        })
    }

    pub fn parameter_count(&self) -> usize {
        self.params.iter().map(|p| p.tensor.len()).sum()
    }

    fn param_index(&self) -> BTreeMap<String, usize> {
        self.params
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), i))
            .collect()
    }
}

/// Attention coefficients produced during one forward pass, aligned with the
/// graph's edge list of the given type.
#[derive(Debug, Clone)]
pub struct AttentionRecord {
    pub edge_type: EdgeType,
    pub head: usize,
    pub dst_indices: Vec<usize>,
    pub coefficients: Vec<f64>,
}

struct Forward {
    tape: Tape,
    vars: Vec<Var>,
    index: BTreeMap<String, usize>,
    attention: Vec<AttentionRecord>,
}

impl Forward {
    fn var(&self, name: &str) -> Var {
        self.vars[*self.index.get(name).expect("parameter name exists")]
    }
}

fn masked_features(graph: &HeteroGraph, t: NodeType, mask: bool) -> Tensor {
    let mut f = graph.features(t).clone();
    if mask && t == NodeType::Component {
        let d = f.cols();
        for row in 0..f.rows() {
            for &c in &LEAKY_COMPONENT_COLUMNS {
                if c < d {
                    f.values_mut()[row * d + c] = 0.0;
                }
            }
        }
    }
    f
}

fn run_forward(
    model: &HgatModel,
    graph: &HeteroGraph,
    training: bool,
    dropout_rng: Option<&mut ChaCha8Rng>,
) -> Result<(Forward, Var), HgatError> {
    let cfg = &model.config;
    let mut tape = Tape::new();
    let vars: Vec<Var> = model
        .params
        .iter()
        .map(|p| tape.leaf(p.tensor.clone()))
        .collect();
    let mut fwd = Forward {
        tape,
        vars,
        index: model.param_index(),
        attention: Vec::new(),
    };

    let mask = cfg.mask_label_leakage;
    let mut h: BTreeMap<NodeType, Var> = BTreeMap::new();
    for t in NodeType::ALL {
        let feats = masked_features(graph, t, mask);
        h.insert(t, fwd.tape.leaf(feats));
    }

    let mut rng_holder = dropout_rng;
    for layer in 0..cfg.layers {
        // self projection for every node type
        let mut next: BTreeMap<NodeType, Var> = BTreeMap::new();
        let mut contributions: BTreeMap<NodeType, usize> = BTreeMap::new();
        for t in NodeType::ALL {
            let w = fwd.var(&format!("layer{layer}.self.{}", node_name(t)));
            let proj = fwd.tape.matmul(h[&t], w)?;
            next.insert(t, proj);
        }
        for et in EdgeType::ALL {
            if mask
                && matches!(et, EdgeType::HasVulnerability | EdgeType::RevHasVulnerability)
            {
                continue;
            }
            let edges = graph.edges(et);
            if edges.is_empty() {
                continue;
            }
            let (src_t, dst_t) = et.endpoints();
            let src_idx: Vec<usize> = edges.iter().map(|&(s, _)| s).collect();
            let dst_idx: Vec<usize> = edges.iter().map(|&(_, d)| d).collect();
            let n_dst = graph.node_count(dst_t);

            let mut head_outputs = Vec::with_capacity(cfg.heads);
            for head in 0..cfg.heads {
                let base = format!("layer{layer}.{}.head{head}", edge_name(et));
                let w_src = fwd.var(&format!("{base}.w_src"));
                let w_dst = fwd.var(&format!("{base}.w_dst"));
                let attn = fwd.var(&format!("{base}.attn"));

                let hs = fwd.tape.matmul(h[&src_t], w_src)?;
                let hd = fwd.tape.matmul(h[&dst_t], w_dst)?;
                let gs = fwd.tape.gather_rows(hs, &src_idx)?;
                let gd = fwd.tape.gather_rows(hd, &dst_idx)?;
                let cat = fwd.tape.concat_cols(&[gs, gd])?;
                let raw = fwd.tape.matmul(cat, attn)?;
                let score = fwd.tape.leaky_relu(raw, cfg.leaky_slope)?;
                let alpha = fwd.tape.segment_softmax(score, &dst_idx)?;
                fwd.attention.push(AttentionRecord {
                    edge_type: et,
                    head,
                    dst_indices: dst_idx.clone(),
                    coefficients: fwd.tape.value(alpha).values().to_vec(),
                });
                let weighted = fwd.tape.row_scale(gs, alpha)?;
                let agg = fwd.tape.segment_sum(weighted, &dst_idx, n_dst)?;
                head_outputs.push(agg);
            }
            let message = fwd.tape.concat_cols(&head_outputs)?;
            let combined = fwd.tape.add(next[&dst_t], message)?;
            next.insert(dst_t, combined);
            *contributions.entry(dst_t).or_insert(0) += 1;
        }
        for t in NodeType::ALL {
            let mut v = next[&t];
            if cfg.aggregation == CrossTypeAggregation::Mean {
                let n_contrib = contributions.get(&t).copied().unwrap_or(0);
                if n_contrib > 1 {
                    // self projection plus n message stacks
                    v = fwd.tape.scale(v, 1.0 / (n_contrib as f64 + 1.0))?;
                }
            }
            let mut activated = fwd.tape.elu(v)?;
            if training && cfg.dropout_rate > 0.0 {
                if let Some(rng) = rng_holder.as_deref_mut() {
                    let len = fwd.tape.value(activated).len();
                    let keep = 1.0 - cfg.dropout_rate;
                    let mask_vals: Vec<f64> = (0..len)
                        .map(|_| if rng.gen::<f64>() < keep { 1.0 / keep } else { 0.0 })
                        .collect();
                    activated = fwd.tape.mul_mask(activated, &mask_vals)?;
                }
            }
            h.insert(t, activated);
        }
    }

    let w_out = fwd.var("out.weight");
    let b_out = fwd.var("out.bias");
    let logits = fwd.tape.matmul(h[&NodeType::Component], w_out)?;
    let logits = fwd.tape.add_bias(logits, b_out)?;
    let probs = fwd.tape.sigmoid(logits)?;
    Ok((fwd, probs))
}

/// Per-component probability of association with at least one known
/// vulnerability. Dropout disabled; deterministic.
pub fn predict_components(model: &HgatModel, graph: &HeteroGraph) -> Result<Vec<f64>, HgatError> {
    if model.feature_schema_version != graph.feature_schema.version {
        return Err(HgatError::SchemaMismatch {
            model: model.feature_schema_version,
            graph: graph.feature_schema.version,
        });
    }
    if graph.node_count(NodeType::Component) == 0 {
        return Ok(Vec::new());
    }
    let (fwd, probs) = run_forward(model, graph, false, None)?;
    Ok(fwd.tape.value(probs).values().to_vec())
}

/// Attention coefficients of a single inference pass, for inspection and
/// normalization checks.
pub fn attention_coefficients(
    model: &HgatModel,
    graph: &HeteroGraph,
) -> Result<Vec<AttentionRecord>, HgatError> {
    let (fwd, _) = run_forward(model, graph, false, None)?;
    Ok(fwd.attention)
}

/// Inference-mode BCE loss over the given component indices. Dropout is
/// disabled so the value is a deterministic function of the parameters.
pub fn node_loss(
    model: &HgatModel,
    graph: &HeteroGraph,
    labels: &[f64],
    indices: &[usize],
) -> Result<f64, HgatError> {
    let (mut fwd, probs) = run_forward(model, graph, false, None)?;
    let sel = fwd.tape.gather_rows(probs, indices)?;
    let sel_labels: Vec<f64> = indices.iter().map(|&i| labels[i]).collect();
    let weights = vec![1.0; indices.len()];
    let loss = fwd.tape.bce_loss(sel, &sel_labels, &weights)?;
    Ok(fwd.tape.value(loss).scalar_value().expect("scalar loss"))
}

/// Same loss as [`node_loss`], additionally writing the parameter gradients
/// into `model.params[i].grad`.
pub fn node_loss_with_grads(
    model: &mut HgatModel,
    graph: &HeteroGraph,
    labels: &[f64],
    indices: &[usize],
) -> Result<f64, HgatError> {
    let (mut fwd, probs) = run_forward(model, graph, false, None)?;
    let sel = fwd.tape.gather_rows(probs, indices)?;
    let sel_labels: Vec<f64> = indices.iter().map(|&i| labels[i]).collect();
    let weights = vec![1.0; indices.len()];
    let loss = fwd.tape.bce_loss(sel, &sel_labels, &weights)?;
    let value = fwd.tape.value(loss).scalar_value().expect("scalar loss");
    fwd.tape.backward(loss)?;
    for (p, v) in model.params.iter_mut().zip(&fwd.vars) {
        p.grad = fwd.tape.grad(*v)?.clone();
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
}

/// Confusion-matrix metrics at the given threshold. Precision and recall are
/// 0 when their denominator is 0; f1 is 0 when p + r = 0.
pub fn compute_metrics(
    probs: &[f64],
    labels: &[f64],
    threshold: f64,
) -> Result<MetricsReport, HgatError> {
    if probs.len() != labels.len() {
        return Err(HgatError::LengthMismatch(format!(
            "{} probs vs {} labels",
            probs.len(),
            labels.len()
        )));
    }
    if !(0.0..1.0).contains(&threshold) || threshold == 0.0 {
        return Err(HgatError::InvalidConfig(format!(
            "threshold {threshold} outside (0,1)"
        )));
    }
    let (mut tp, mut fp, mut tn, mut fal_n) = (0usize, 0usize, 0usize, 0usize);
    for (&p, &y) in probs.iter().zip(labels) {
        let pred = p >= threshold;
        let actual = y >= 0.5;
        match (pred, actual) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fal_n += 1,
        }
    }
    let total = probs.len().max(1) as f64;
    let accuracy = (tp + tn) as f64 / total;
    let precision = if tp + fp > 0 { tp as f64 / (tp + fp) as f64 } else { 0.0 };
    let recall = if tp + fal_n > 0 { tp as f64 / (tp + fal_n) as f64 } else { 0.0 };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(MetricsReport {
        accuracy,
        precision,
        recall,
        f1,
        true_positives: tp,
        false_positives: fp,
        true_negatives: tn,
        false_negatives: fal_n,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSplit {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded 70/15/15 shuffle split over `n` component nodes.
pub fn split_nodes(n: usize, fractions: (f64, f64, f64), seed: u64) -> NodeSplit {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_train = (fractions.0 * n as f64).floor() as usize;
    let n_val = (fractions.1 * n as f64).floor() as usize;
    let mut train: Vec<usize> = order[..n_train].to_vec();
    let mut validation: Vec<usize> = order[n_train..n_train + n_val].to_vec();
    let mut test: Vec<usize> = order[n_train + n_val..].to_vec();
    train.sort();
    validation.sort();
    test.sort();
    NodeSplit { train, validation, test }
}

#[derive(Debug)]
pub struct TrainOutcome {
    pub model: HgatModel,
    pub metrics: MetricsReport,
    /// training loss per epoch
    pub curve: Vec<f64>,
}

/// Train with Adam on weighted BCE over the train indices; report test-split
/// metrics at threshold 0.5. Deterministic given the config seed.
pub fn train_node_classifier(
    graph: &HeteroGraph,
    labels: &[f64],
    config: &HgatConfig,
    split: &NodeSplit,
) -> Result<TrainOutcome, HgatError> {
    config.validate()?;
    let n = graph.node_count(NodeType::Component);
    if labels.len() != n {
        return Err(HgatError::LengthMismatch(format!(
            "{} labels for {} components",
            labels.len(),
            n
        )));
    }
    let train_labels: Vec<f64> = split.train.iter().map(|&i| labels[i]).collect();
    let pos = train_labels.iter().filter(|&&y| y >= 0.5).count();
    if pos == 0 || pos == train_labels.len() {
        return Err(HgatError::DegenerateLabels);
    }

    let input_dims: BTreeMap<NodeType, usize> = NodeType::ALL
        .iter()
        .map(|&t| (t, graph.features(t).cols().max(1)))
        .collect();
    let mut model = HgatModel::init(config.clone(), &input_dims, graph.feature_schema.version)?;
    let mut adam = AdamState::new(
        &model.params,
        AdamHyper { lr: config.learning_rate, ..AdamHyper::default() },
    );
    let mut dropout_rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(0x5eed));

    let weights: Vec<f64> = train_labels
        .iter()
        .map(|&y| if y >= 0.5 { config.class_weight_positive } else { 1.0 })
        .collect();

    let mut curve = Vec::with_capacity(config.epochs);
    for _epoch in 0..config.epochs {
        let (mut fwd, probs) = run_forward(&model, graph, true, Some(&mut dropout_rng))?;
        let train_probs = fwd.tape.gather_rows(probs, &split.train)?;
        let loss = fwd.tape.bce_loss(train_probs, &train_labels, &weights)?;
        curve.push(fwd.tape.value(loss).scalar_value().expect("scalar loss"));
        fwd.tape.backward(loss)?;
        for (p, v) in model.params.iter_mut().zip(&fwd.vars) {
            p.grad = fwd.tape.grad(*v)?.clone();
        }
        adam.step(&mut model.params);
    }

    let probs = predict_components(&model, graph)?;
    let test_probs: Vec<f64> = split.test.iter().map(|&i| probs[i]).collect();
    let test_labels: Vec<f64> = split.test.iter().map(|&i| labels[i]).collect();
    let metrics = compute_metrics(&test_probs, &test_labels, 0.5)?;

    Ok(TrainOutcome { model, metrics, curve })
}

/// has-any-CVE label per component, aligned with the graph's component order.
pub fn has_any_cve_labels(
    enriched: &crate::enrich::EnrichedSbom,
    graph: &HeteroGraph,
) -> Vec<f64> {
    graph
        .nodes(NodeType::Component)
        .iter()
        .map(|id| {
            enriched
                .findings
                .get(id)
                .is_some_and(|v| !v.is_empty()) as u8 as f64
        })
        .collect()
}

// ---- model persistence ----

#[derive(Serialize, Deserialize)]
struct ModelFile {
    schema_version: u32,
    config: HgatConfig,
    feature_schema_version: u32,
    tensors: BTreeMap<String, Tensor>,
}

pub fn save_model(model: &HgatModel, w: &mut impl Write) -> Result<(), HgatError> {
    let file = ModelFile {
        schema_version: MODEL_SCHEMA_VERSION,
        config: model.config.clone(),
        feature_schema_version: model.feature_schema_version,
        tensors: model
            .params
            .iter()
            .map(|p| (p.name.clone(), p.tensor.clone()))
            .collect(),
    };
    let json = serde_json::to_string_pretty(&file).map_err(|e| HgatError::ModelFile(e.to_string()))?;
    w.write_all(json.as_bytes())
        .map_err(|e| HgatError::ModelFile(e.to_string()))
}

pub fn load_model(r: &mut impl Read) -> Result<HgatModel, HgatError> {
    let mut buf = String::new();
    r.read_to_string(&mut buf)
        .map_err(|e| HgatError::ModelFile(e.to_string()))?;
    let file: ModelFile =
        serde_json::from_str(&buf).map_err(|e| HgatError::ModelFile(e.to_string()))?;
    if file.schema_version != MODEL_SCHEMA_VERSION {
        return Err(HgatError::ModelFile(format!(
            "unsupported model schema version {}",
            file.schema_version
        )));
    }
    let params: Vec<Parameter> = file
        .tensors
        .into_iter()
        .map(|(name, tensor)| Parameter::new(name, tensor))
        .collect();
    Ok(HgatModel {
        config: file.config,
        feature_schema_version: file.feature_schema_version,
        params,
    })
}

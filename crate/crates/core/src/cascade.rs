//! CVE co-exploitation link prediction and chain composition.
//!
//! Pairs of CVEs are scored with a small feature-based perceptron; pairs above
//! a threshold become edges of an undirected co-exploitation graph, and beam
//! search over simple paths produces ranked multi-step chain candidates.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enrich::{CveRecord, SeverityBin};
use crate::nn::{
    glorot_uniform, AdamHyper, AdamState, NnError, Parameter, Tape, Tensor, Var,
};

pub const PAIR_FEATURE_DIM: usize = 17;
pub const MLP_LAYER_SIZES: [usize; 4] = [PAIR_FEATURE_DIM, 16, 8, 1];
pub const LINK_MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CascadeError {
    #[error("malformed chain seed: {0}")]
    MalformedSeed(String),
    #[error("duplicate chain_id {0}")]
    DuplicateChainId(String),
    #[error("universe has too few non-positive pairs ({available} available, {requested} requested)")]
    InsufficientUniverse { available: usize, requested: usize },
    #[error("labels are single-class")]
    DegenerateLabels,
    #[error("both classes must be present")]
    SingleClass,
    #[error("model file error: {0}")]
    ModelFile(String),
    #[error(transparent)]
    Nn(#[from] NnError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSourceKind {
    Advisory,
    IncidentReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSeed {
    pub chain_id: String,
    pub cves: Vec<String>,
    pub source_kind: SeedSourceKind,
    pub source_ref: String,
    #[serde(default)]
    pub disclosed: Option<NaiveDate>,
}

/// Unordered CVE pair in canonical orientation (first < second by id).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CvePair(pub String, pub String);

impl CvePair {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            CvePair(a, b)
        } else {
            CvePair(b, a)
        }
    }
}

fn is_cve_id(id: &str) -> bool {
    let Some(rest) = id.strip_prefix("CVE-") else {
        return false;
    };
    let mut parts = rest.splitn(2, '-');
    let year = parts.next().unwrap_or_default();
    let num = parts.next().unwrap_or_default();
    year.len() == 4
        && year.chars().all(|c| c.is_ascii_digit())
        && num.len() >= 4
        && num.chars().all(|c| c.is_ascii_digit())
}

/// Parse and validate the JSON chain seed file (a list of seed objects).
pub fn load_chain_seeds(r: &mut impl Read) -> Result<Vec<ChainSeed>, CascadeError> {
    let mut buf = String::new();
    r.read_to_string(&mut buf)
        .map_err(|e| CascadeError::MalformedSeed(e.to_string()))?;
    if buf.trim().is_empty() {
        return Ok(Vec::new());
    }
    let seeds: Vec<ChainSeed> =
        serde_json::from_str(&buf).map_err(|e| CascadeError::MalformedSeed(e.to_string()))?;
    let mut ids = BTreeSet::new();
    for (i, seed) in seeds.iter().enumerate() {
        if seed.cves.len() < 2 {
            return Err(CascadeError::MalformedSeed(format!(
                "seed #{i} ({}): chain must list at least 2 CVEs",
                seed.chain_id
            )));
        }
        let mut seen = BTreeSet::new();
        for cve in &seed.cves {
            if !is_cve_id(cve) {
                return Err(CascadeError::MalformedSeed(format!(
                    "seed #{i} ({}): invalid CVE id {cve}",
                    seed.chain_id
                )));
            }
            if !seen.insert(cve) {
                return Err(CascadeError::MalformedSeed(format!(
                    "seed #{i} ({}): repeated CVE {cve}",
                    seed.chain_id
                )));
            }
        }
        if !ids.insert(seed.chain_id.clone()) {
            return Err(CascadeError::DuplicateChainId(seed.chain_id.clone()));
        }
    }
    Ok(seeds)
}

/// All unordered within-chain pairs, union-deduplicated across chains.
pub fn expand_positive_pairs(seeds: &[ChainSeed]) -> BTreeSet<CvePair> {
    let mut out = BTreeSet::new();
    for seed in seeds {
        for i in 0..seed.cves.len() {
            for j in i + 1..seed.cves.len() {
                out.insert(CvePair::new(seed.cves[i].clone(), seed.cves[j].clone()));
            }
        }
    }
    out
}

/// ⌈ratio·|positives|⌉ unordered pairs drawn uniformly without replacement
/// from the universe, excluding positives. Deterministic per seed.
pub fn sample_negative_pairs(
    cve_universe: &[String],
    positives: &BTreeSet<CvePair>,
    ratio: f64,
    seed: u64,
) -> Result<Vec<CvePair>, CascadeError> {
    assert!(ratio > 0.0, "ratio must be positive");
    let mut universe: Vec<String> = cve_universe.to_vec();
    universe.sort();
    universe.dedup();
    let n = universe.len();
    let total = n * n.saturating_sub(1) / 2;
    let positives_inside = positives
        .iter()
        .filter(|p| universe.binary_search(&p.0).is_ok() && universe.binary_search(&p.1).is_ok())
        .count();
    let requested = (ratio * positives.len() as f64).ceil() as usize;
    let available = total - positives_inside;
    if requested > available {
        return Err(CascadeError::InsufficientUniverse { available, requested });
    }
    sample_pairs_excluding(&universe, positives, requested, seed)
}

/// Draw `count` unordered pairs uniformly without replacement from the
/// (sorted, deduplicated) universe, skipping the excluded set.
pub fn sample_pairs_excluding(
    universe: &[String],
    excluded: &BTreeSet<CvePair>,
    count: usize,
    seed: u64,
) -> Result<Vec<CvePair>, CascadeError> {
    let n = universe.len();
    // enumerate non-excluded pairs in deterministic order, then shuffle-select
    let mut candidates: Vec<CvePair> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let pair = CvePair::new(universe[i].clone(), universe[j].clone());
            if !excluded.contains(&pair) {
                candidates.push(pair);
            }
        }
    }
    if count > candidates.len() {
        return Err(CascadeError::InsufficientUniverse {
            available: candidates.len(),
            requested: count,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    candidates.shuffle(&mut rng);
    candidates.truncate(count);
    Ok(candidates)
}

/// 17-dim pair feature vector: one-hot severity bins of both CVEs (ordered by
/// cve_id), CVSS gap, temporal proximity with a 180-day decay, shared-CWE
/// count (log1p), and exploitation flags.
pub fn extract_pair_features(a: &CveRecord, b: &CveRecord) -> Vec<f64> {
    let (a, b) = if a.cve_id <= b.cve_id { (a, b) } else { (b, a) };
    let mut v = vec![0.0; PAIR_FEATURE_DIM];
    v[a.severity_bin.one_hot_index()] = 1.0;
    v[SeverityBin::CARDINALITY + b.severity_bin.one_hot_index()] = 1.0;
    let ca = a.cvss_base.unwrap_or(0.0);
    let cb = b.cvss_base.unwrap_or(0.0);
    v[12] = (ca - cb).abs() / 10.0;
    let gap_days = (a.published - b.published).num_days().abs() as f64;
    v[13] = (-gap_days / 180.0).exp();
    let shared = a
        .cwe_ids
        .iter()
        .filter(|c| b.cwe_ids.contains(c))
        .count() as f64;
    v[14] = (1.0 + shared).ln();
    let (ea, eb) = (a.exploited_signal, b.exploited_signal);
    v[15] = if ea || eb { 1.0 } else { 0.0 };
    v[16] = if ea && eb { 1.0 } else { 0.0 };
    v
}

#[derive(Debug, Clone)]
pub struct MlpModel {
    pub params: Vec<Parameter>,
}

impl MlpModel {
    pub fn init(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = Vec::new();
        for (i, pair) in MLP_LAYER_SIZES.windows(2).enumerate() {
            params.push(Parameter::new(
                format!("mlp.layer{i}.weight"),
                glorot_uniform(pair[0], pair[1], &mut rng),
            ));
            params.push(Parameter::new(
                format!("mlp.layer{i}.bias"),
                Tensor::zeros(1, pair[1]),
            ));
        }
        Self { params }
    }

    /// Forward on a tape; returns the probability column.
    fn forward_tape(&self, tape: &mut Tape, vars: &[Var], x: Var) -> Result<Var, NnError> {
        let n_layers = MLP_LAYER_SIZES.len() - 1;
        let mut h = x;
        for i in 0..n_layers {
            let w = vars[2 * i];
            let b = vars[2 * i + 1];
            h = tape.matmul(h, w)?;
            h = tape.add_bias(h, b)?;
            if i + 1 < n_layers {
                h = tape.elu(h)?;
            } else {
                h = tape.sigmoid(h)?;
            }
        }
        Ok(h)
    }

    /// Tape-free inference for a batch of feature rows.
    pub fn score_rows(&self, rows: &Tensor) -> Result<Vec<f64>, NnError> {
        let mut tape = Tape::new();
        let vars: Vec<Var> = self.params.iter().map(|p| tape.leaf(p.tensor.clone())).collect();
        let x = tape.leaf(rows.clone());
        let probs = self.forward_tape(&mut tape, &vars, x)?;
        Ok(tape.value(probs).values().to_vec())
    }

    pub fn score_pair(&self, a: &CveRecord, b: &CveRecord) -> Result<f64, NnError> {
        let features = extract_pair_features(a, b);
        let rows = Tensor::new(vec![1, PAIR_FEATURE_DIM], features)?;
        Ok(self.score_rows(&rows)?[0])
    }
}

/// BCE loss of the perceptron on a labelled feature batch.
pub fn link_loss(model: &MlpModel, features: &Tensor, labels: &[f64]) -> Result<f64, NnError> {
    let mut tape = Tape::new();
    let vars: Vec<Var> = model.params.iter().map(|p| tape.leaf(p.tensor.clone())).collect();
    let x = tape.leaf(features.clone());
    let probs = model.forward_tape(&mut tape, &vars, x)?;
    let weights = vec![1.0; labels.len()];
    let loss = tape.bce_loss(probs, labels, &weights)?;
    Ok(tape.value(loss).scalar_value().expect("scalar loss"))
}

/// Same loss as [`link_loss`], additionally writing parameter gradients into
/// `model.params[i].grad`.
pub fn link_loss_with_grads(
    model: &mut MlpModel,
    features: &Tensor,
    labels: &[f64],
) -> Result<f64, NnError> {
    let mut tape = Tape::new();
    let vars: Vec<Var> = model.params.iter().map(|p| tape.leaf(p.tensor.clone())).collect();
    let x = tape.leaf(features.clone());
    let probs = model.forward_tape(&mut tape, &vars, x)?;
    let weights = vec![1.0; labels.len()];
    let loss = tape.bce_loss(probs, labels, &weights)?;
    let value = tape.value(loss).scalar_value().expect("scalar loss");
    tape.backward(loss)?;
    for (p, v) in model.params.iter_mut().zip(&vars) {
        p.grad = tape.grad(*v)?.clone();
    }
    Ok(value)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkTrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    /// fraction of pairs held out for evaluation
    pub holdout_fraction: f64,
}

impl Default for LinkTrainConfig {
    fn default() -> Self {
        Self {
            epochs: 300,
            learning_rate: 0.01,
            seed: 42,
            holdout_fraction: 0.3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RocReport {
    pub train_size: usize,
    pub holdout_size: usize,
    pub holdout_auc: f64,
    pub final_train_loss: f64,
}

/// Probability that a random positive outscores a random negative, ties at
/// 0.5 (Mann-Whitney formulation, computed via average ranks).
pub fn roc_auc(scores: &[f64], labels: &[f64]) -> Result<f64, CascadeError> {
    assert_eq!(scores.len(), labels.len());
    let n_pos = labels.iter().filter(|&&y| y >= 0.5).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(CascadeError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));
    // average ranks over tie groups, 1-based
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = ((i + 1 + j) as f64) / 2.0;
        for &idx in &order[i..j] {
            if labels[idx] >= 0.5 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Train the pair scorer with Adam on BCE; report ROC-AUC on the held-out
/// portion. Deterministic per seed.
pub fn train_link_predictor(
    features: &Tensor,
    labels: &[f64],
    config: &LinkTrainConfig,
) -> Result<(MlpModel, RocReport), CascadeError> {
    let n = features.rows();
    if labels.len() != n {
        return Err(CascadeError::MalformedSeed(format!(
            "{} labels for {n} pairs",
            labels.len()
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    order.shuffle(&mut rng);
    let n_holdout = (config.holdout_fraction * n as f64).round() as usize;
    let (holdout_idx, train_idx) = order.split_at(n_holdout);

    let gather = |idx: &[usize]| -> (Tensor, Vec<f64>) {
        let d = features.cols();
        let mut vals = Vec::with_capacity(idx.len() * d);
        let mut labs = Vec::with_capacity(idx.len());
        for &i in idx {
            vals.extend_from_slice(features.row(i));
            labs.push(labels[i]);
        }
        (
            Tensor::new(vec![idx.len(), d], vals).expect("gathered rows are finite"),
            labs,
        )
    };
    let (train_x, train_y) = gather(train_idx);
    let (hold_x, hold_y) = gather(holdout_idx);

    let pos = train_y.iter().filter(|&&y| y >= 0.5).count();
    if pos < 2 || train_y.len() - pos < 2 {
        return Err(CascadeError::DegenerateLabels);
    }

    let mut model = MlpModel::init(config.seed);
    let mut adam = AdamState::new(
        &model.params,
        AdamHyper { lr: config.learning_rate, ..AdamHyper::default() },
    );
    let unit_weights = vec![1.0; train_y.len()];
    let mut final_loss = f64::NAN;
    for _ in 0..config.epochs {
        let mut tape = Tape::new();
        let vars: Vec<Var> = model.params.iter().map(|p| tape.leaf(p.tensor.clone())).collect();
        let x = tape.leaf(train_x.clone());
        let probs = model.forward_tape(&mut tape, &vars, x)?;
        let loss = tape.bce_loss(probs, &train_y, &unit_weights)?;
        final_loss = tape.value(loss).scalar_value().expect("scalar loss");
        tape.backward(loss)?;
        for (p, v) in model.params.iter_mut().zip(&vars) {
            p.grad = tape.grad(*v)?.clone();
        }
        adam.step(&mut model.params);
    }

    let holdout_scores = model.score_rows(&hold_x)?;
    let holdout_auc = roc_auc(&holdout_scores, &hold_y)?;
    Ok((
        model,
        RocReport {
            train_size: train_y.len(),
            holdout_size: hold_y.len(),
            holdout_auc,
            final_train_loss: final_loss,
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCandidate {
    pub cves: Vec<String>,
    pub per_edge_scores: Vec<f64>,
    pub aggregate_score: f64,
    pub length: usize,
}

// summed in sorted order so the result is independent of edge traversal order
fn geometric_mean(scores: &[f64]) -> f64 {
    let mut lns: Vec<f64> = scores.iter().map(|&x| x.ln()).collect();
    lns.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    (lns.iter().sum::<f64>() / lns.len() as f64).exp()
}

/// Orient an emitted sequence by published date (earliest first); ties fall
/// back to the lexicographically smaller endpoint.
fn orient(
    mut seq: Vec<String>,
    mut edge_scores: Vec<f64>,
    records: &BTreeMap<String, CveRecord>,
) -> (Vec<String>, Vec<f64>) {
    let first = records.get(seq.first().expect("non-empty"));
    let last = records.get(seq.last().expect("non-empty"));
    let reversed = match (first, last) {
        (Some(f), Some(l)) => {
            f.published > l.published
                || (f.published == l.published && seq.first() > seq.last())
        }
        _ => seq.first() > seq.last(),
    };
    if reversed {
        seq.reverse();
        edge_scores.reverse();
    }
    (seq, edge_scores)
}

/// Rank candidate multi-step chains: score all unordered pairs, keep edges at
/// or above the threshold, and beam-search simple paths up to `max_length`.
/// `beam_width = None` means unlimited (exhaustive enumeration). Candidates
/// are ranked by geometric-mean edge score, ties broken by longer length and
/// then lexicographic sequence.
pub fn compose_chains(
    cve_set: &[String],
    model: &MlpModel,
    records: &BTreeMap<String, CveRecord>,
    score_threshold: f64,
    max_length: usize,
    beam_width: Option<usize>,
) -> Result<Vec<ChainCandidate>, CascadeError> {
    assert!(max_length >= 2, "max_length must be >= 2");
    let mut ids: Vec<String> = cve_set
        .iter()
        .filter(|id| records.contains_key(*id))
        .cloned()
        .collect();
    ids.sort();
    ids.dedup();

    // adjacency over qualifying edges
    let mut edge_score: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let s = model.score_pair(&records[&ids[i]], &records[&ids[j]])?;
            if s >= score_threshold {
                edge_score.insert((i, j), s);
                edge_score.insert((j, i), s);
            }
        }
    }

    // beam of directed simple paths, extended one node at a time
    #[derive(Clone)]
    struct Partial {
        nodes: Vec<usize>,
        scores: Vec<f64>,
        aggregate: f64,
    }
    let mut beam: Vec<Partial> = edge_score
        .iter()
        .filter(|((s, d), _)| s < d)
        .flat_map(|(&(s, d), &w)| {
            [
                Partial { nodes: vec![s, d], scores: vec![w], aggregate: w },
                Partial { nodes: vec![d, s], scores: vec![w], aggregate: w },
            ]
        })
        .collect();

    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut candidates: Vec<ChainCandidate> = Vec::new();
    let mut collect = |beam: &[Partial]| {
        for p in beam {
            let seq: Vec<String> = p.nodes.iter().map(|&i| ids[i].clone()).collect();
            let (seq, scores) = orient(seq, p.scores.clone(), records);
            if seen.insert(seq.clone()) {
                candidates.push(ChainCandidate {
                    length: seq.len(),
                    cves: seq,
                    per_edge_scores: scores,
                    aggregate_score: geometric_mean(&p.scores),
                });
            }
        }
    };

    let prune = |beam: &mut Vec<Partial>, ids: &[String]| {
        if let Some(w) = beam_width {
            beam.sort_by(|a, b| {
                b.aggregate
                    .partial_cmp(&a.aggregate)
                    .expect("finite aggregates")
                    .then_with(|| {
                        let sa: Vec<&String> = a.nodes.iter().map(|&i| &ids[i]).collect();
                        let sb: Vec<&String> = b.nodes.iter().map(|&i| &ids[i]).collect();
                        sa.cmp(&sb)
                    })
            });
            beam.truncate(w);
        }
    };

    prune(&mut beam, &ids);
    collect(&beam);
    for _len in 3..=max_length {
        let mut next: Vec<Partial> = Vec::new();
        for p in &beam {
            let tail = *p.nodes.last().expect("non-empty path");
            for (&(s, d), &w) in edge_score.range((tail, 0)..=(tail, usize::MAX)) {
                debug_assert_eq!(s, tail);
                if p.nodes.contains(&d) {
                    continue;
                }
                let mut nodes = p.nodes.clone();
                nodes.push(d);
                let mut scores = p.scores.clone();
                scores.push(w);
                let aggregate = geometric_mean(&scores);
                next.push(Partial { nodes, scores, aggregate });
            }
        }
        if next.is_empty() {
            break;
        }
        prune(&mut next, &ids);
        collect(&next);
        beam = next;
    }

    candidates.sort_by(|a, b| {
        b.aggregate_score
            .partial_cmp(&a.aggregate_score)
            .expect("finite aggregates")
            .then_with(|| b.length.cmp(&a.length))
            .then_with(|| a.cves.cmp(&b.cves))
    });
    Ok(candidates)
}

// ---- link model persistence ----

#[derive(Serialize, Deserialize)]
struct LinkModelFile {
    schema_version: u32,
    tensors: BTreeMap<String, Tensor>,
}

pub fn save_link_model(model: &MlpModel, w: &mut impl Write) -> Result<(), CascadeError> {
    let file = LinkModelFile {
        schema_version: LINK_MODEL_SCHEMA_VERSION,
        tensors: model
            .params
            .iter()
            .map(|p| (p.name.clone(), p.tensor.clone()))
            .collect(),
    };
    let json =
        serde_json::to_string_pretty(&file).map_err(|e| CascadeError::ModelFile(e.to_string()))?;
    w.write_all(json.as_bytes())
        .map_err(|e| CascadeError::ModelFile(e.to_string()))
}

pub fn load_link_model(r: &mut impl Read) -> Result<MlpModel, CascadeError> {
    let mut buf = String::new();
    r.read_to_string(&mut buf)
        .map_err(|e| CascadeError::ModelFile(e.to_string()))?;
    let file: LinkModelFile =
        serde_json::from_str(&buf).map_err(|e| CascadeError::ModelFile(e.to_string()))?;
    if file.schema_version != LINK_MODEL_SCHEMA_VERSION {
        return Err(CascadeError::ModelFile(format!(
            "unsupported link model schema version {}",
            file.schema_version
        )));
    }
    // restore layer order: the forward pass indexes parameters positionally
    let mut tensors = file.tensors;
    let mut params = Vec::new();
    for i in 0..MLP_LAYER_SIZES.len() - 1 {
        for kind in ["weight", "bias"] {
            let name = format!("mlp.layer{i}.{kind}");
            let tensor = tensors
                .remove(&name)
                .ok_or_else(|| CascadeError::ModelFile(format!("missing tensor {name}")))?;
            params.push(Parameter::new(name, tensor));
        }
    }
    Ok(MlpModel { params })
}

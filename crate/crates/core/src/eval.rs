//! Reproducible experiment harness: pair splits, ablations, synthetic data
//! generation, and deterministic report emission.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cascade::{
    expand_positive_pairs, extract_pair_features, sample_pairs_excluding, CascadeError,
    ChainSeed, CvePair, PAIR_FEATURE_DIM,
};
use crate::enrich::{bin_severity, CveRecord, CweRecord, EnrichedSbom};
use crate::graph::{build_graph, EdgeType, HeteroGraph, NodeType};
use crate::hgat::{
    predict_components, split_nodes, train_node_classifier, HgatConfig, HgatError, MetricsReport,
};
use crate::nn::Tensor;
use crate::sbom::{ComponentKind, ComponentRecord, DependencyEdge, SbomDocument};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("split side {0} has fewer than 2 positive pairs")]
    EmptySide(&'static str),
    #[error("temporal split requires a disclosed date on every seed; {0} lacks one")]
    MissingDisclosureDate(String),
    #[error("report I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Cascade(#[from] CascadeError),
    #[error(transparent)]
    Hgat(#[from] HgatError),
}

// ---- pair splits ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    PairLevel,
    ChainLevel,
    Temporal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitSpec {
    pub kind: SplitKind,
    /// fraction of pairs (or chains) assigned to train; ignored for temporal
    pub train_fraction: f64,
    /// chains disclosed strictly before the cutoff go to train
    pub cutoff: Option<NaiveDate>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSide {
    pub pairs: Vec<CvePair>,
    pub labels: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSplit {
    pub train: PairSide,
    pub test: PairSide,
}

fn side_universe(pairs: &BTreeSet<CvePair>) -> Vec<String> {
    let mut u: Vec<String> = pairs
        .iter()
        .flat_map(|p| [p.0.clone(), p.1.clone()])
        .collect();
    u.sort();
    u.dedup();
    u
}

fn assemble_side(
    name: &'static str,
    positives: &BTreeSet<CvePair>,
    all_positives: &BTreeSet<CvePair>,
    negative_ratio: f64,
    seed: u64,
) -> Result<PairSide, EvalError> {
    if positives.len() < 2 {
        return Err(EvalError::EmptySide(name));
    }
    let universe = side_universe(positives);
    // exclude every known positive (both sides) from the negative pool
    let want = (negative_ratio * positives.len() as f64).ceil() as usize;
    let negatives = sample_pairs_excluding(&universe, all_positives, want, seed)?;
    let mut pairs: Vec<CvePair> = positives.iter().cloned().collect();
    let mut labels = vec![1.0; pairs.len()];
    labels.extend(std::iter::repeat(0.0).take(negatives.len()));
    pairs.extend(negatives);
    Ok(PairSide { pairs, labels })
}

/// Split positive pairs into train/test per the spec, then sample negatives
/// per side (after splitting, so no negative pair leaks across sides).
pub fn split_pairs(
    seeds: &[ChainSeed],
    spec: &SplitSpec,
    negative_ratio: f64,
) -> Result<PairSplit, EvalError> {
    let all_positives = expand_positive_pairs(seeds);
    let (train_pos, test_pos): (BTreeSet<CvePair>, BTreeSet<CvePair>) = match spec.kind {
        SplitKind::PairLevel => {
            let mut pairs: Vec<CvePair> = all_positives.iter().cloned().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            pairs.shuffle(&mut rng);
            let n_train = (spec.train_fraction * pairs.len() as f64).floor() as usize;
            let (tr, te) = pairs.split_at(n_train);
            (tr.iter().cloned().collect(), te.iter().cloned().collect())
        }
        SplitKind::ChainLevel => {
            let mut order: Vec<usize> = (0..seeds.len()).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            order.shuffle(&mut rng);
            let n_train = (spec.train_fraction * seeds.len() as f64).floor() as usize;
            let train_chains: Vec<ChainSeed> =
                order[..n_train].iter().map(|&i| seeds[i].clone()).collect();
            let test_chains: Vec<ChainSeed> =
                order[n_train..].iter().map(|&i| seeds[i].clone()).collect();
            let tr = expand_positive_pairs(&train_chains);
            let mut te = expand_positive_pairs(&test_chains);
            // a pair shared by chains on both sides stays in train only
            te.retain(|p| !tr.contains(p));
            (tr, te)
        }
        SplitKind::Temporal => {
            let cutoff = spec.cutoff.expect("temporal split requires a cutoff date");
            let mut train_chains = Vec::new();
            let mut test_chains = Vec::new();
            for seed in seeds {
                let disclosed = seed
                    .disclosed
                    .ok_or_else(|| EvalError::MissingDisclosureDate(seed.chain_id.clone()))?;
                if disclosed < cutoff {
                    train_chains.push(seed.clone());
                } else {
                    test_chains.push(seed.clone());
                }
            }
            let tr = expand_positive_pairs(&train_chains);
            let mut te = expand_positive_pairs(&test_chains);
            te.retain(|p| !tr.contains(p));
            (tr, te)
        }
    };

    let train = assemble_side("train", &train_pos, &all_positives, negative_ratio, spec.seed)?;
    let test = assemble_side(
        "test",
        &test_pos,
        &all_positives,
        negative_ratio,
        spec.seed.wrapping_add(1),
    )?;
    Ok(PairSplit { train, test })
}

/// Feature matrix for a pair side given the CVE record table. Pairs whose
/// records are missing are skipped (with their labels).
pub fn side_features(
    side: &PairSide,
    records: &BTreeMap<String, CveRecord>,
) -> (Tensor, Vec<f64>) {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (pair, &label) in side.pairs.iter().zip(&side.labels) {
        let (Some(a), Some(b)) = (records.get(&pair.0), records.get(&pair.1)) else {
            continue;
        };
        rows.extend(extract_pair_features(a, b));
        labels.push(label);
    }
    let n = labels.len();
    (
        Tensor::new(vec![n, PAIR_FEATURE_DIM], rows).expect("pair features are finite"),
        labels,
    )
}

// ---- synthetic data ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticNodeSpec {
    pub n_components: usize,
    /// expected edges per negative component (density of the background graph)
    pub edge_density: f64,
    /// noise CVEs beyond the planted critical ones
    pub n_cves: usize,
    pub n_cwes: usize,
    /// requested fraction of positive components
    pub positive_fraction: f64,
    pub seed: u64,
}

impl Default for SyntheticNodeSpec {
    fn default() -> Self {
        Self {
            n_components: 500,
            edge_density: 1.5,
            n_cves: 40,
            n_cwes: 8,
            positive_fraction: 0.3,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticNodeTask {
    pub enriched: EnrichedSbom,
    pub graph: HeteroGraph,
    /// aligned with the graph's component node order
    pub labels: Vec<f64>,
}

fn component_id(i: usize) -> String {
    format!("comp-{i:04}@1.0.0#{i}")
}

/// Plant a 2-hop dependency signal: positives are exactly the components
/// within two dependency hops (either direction) of a critical-CVE holder.
/// The positive count matches the requested fraction within one node.
pub fn generate_node_task(spec: &SyntheticNodeSpec) -> SyntheticNodeTask {
    assert!(spec.n_components >= 1, "need at least one component");
    let n = spec.n_components;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // Distinct stream so the generator's permutations never coincide with
    // those of consumers (splits, training) seeded from the same value.
    rng.set_stream(1);

    let components: Vec<ComponentRecord> = (0..n)
        .map(|i| ComponentRecord {
            component_id: component_id(i),
            name: format!("comp-{i:04}"),
            version: "1.0.0".into(),
            purl: None,
            component_kind: ComponentKind::Library,
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let n_pos = ((spec.positive_fraction * n as f64).round() as usize).min(n);
    let positives: Vec<usize> = order[..n_pos].to_vec();
    let negatives: Vec<usize> = order[n_pos..].to_vec();

    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut holders: Vec<usize> = Vec::new();
    let mut decoy_holders: Vec<usize> = Vec::new();

    // Both sides are partitioned into identically shaped clusters (a holder
    // plus direct and depth-2 members) so topology alone — in particular the
    // degree features — carries no label signal. Only positive-cluster
    // holders receive a critical CVE; the label is reachable solely through
    // DEPENDS_ON message passing.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut carve = |pool: &[usize],
                     holders: &mut Vec<usize>,
                     clusters: &mut Vec<Vec<usize>>,
                     rng: &mut ChaCha8Rng| {
        let mut i = 0;
        while i < pool.len() {
            let size = rng.gen_range(1..=5).min(pool.len() - i);
            let cluster = &pool[i..i + size];
            let holder = cluster[0];
            holders.push(holder);
            let mut ring1: Vec<usize> = Vec::new();
            for (k, &m) in cluster.iter().enumerate().skip(1) {
                if k == 1 || ring1.is_empty() || rng.gen_bool(0.6) {
                    edges.insert((holder.min(m), holder.max(m)));
                    ring1.push(m);
                } else {
                    let parent = ring1[rng.gen_range(0..ring1.len())];
                    edges.insert((parent.min(m), parent.max(m)));
                }
            }
            clusters.push(cluster.to_vec());
            i += size;
        }
    };
    carve(&positives, &mut holders, &mut clusters, &mut rng);
    carve(&negatives, &mut decoy_holders, &mut clusters, &mut rng);

    // Intra-cluster chord edges up to the requested density. Chords stay
    // inside one cluster, so 2-hop reachability (and thus labels) is
    // unchanged, and both sides are densified identically.
    let target_edges = ((spec.edge_density * n as f64) / 2.0) as usize;
    let mut attempts = 4 * target_edges;
    while edges.len() < target_edges && attempts > 0 {
        attempts -= 1;
        let cluster = &clusters[rng.gen_range(0..clusters.len())];
        if cluster.len() < 2 {
            continue;
        }
        let a = cluster[rng.gen_range(0..cluster.len())];
        let b = cluster[rng.gen_range(0..cluster.len())];
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }

    let dependencies: Vec<DependencyEdge> = edges
        .iter()
        .map(|&(a, b)| DependencyEdge { from_id: component_id(a), to_id: component_id(b) })
        .collect();

    let doc = SbomDocument {
        components,
        dependencies,
        spec_version: "1.5".into(),
        source_path: format!("synthetic://node-task/{}", spec.seed),
    };

    // critical CVEs on holders, medium noise CVEs elsewhere
    let mut cves: BTreeMap<String, CveRecord> = BTreeMap::new();
    let mut findings: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut cwes: BTreeMap<String, CweRecord> = BTreeMap::new();
    let add_cve = |idx: usize, critical: bool, comp: usize, rng: &mut ChaCha8Rng,
                       cves: &mut BTreeMap<String, CveRecord>,
                       findings: &mut BTreeMap<String, Vec<String>>,
                       cwes: &mut BTreeMap<String, CweRecord>| {
        let cve_id = format!("CVE-2021-{:04}", 1000 + idx);
        let score = if critical { 9.8 } else { rng.gen_range(3.0..7.0) };
        let score = (score * 10.0_f64).round() / 10.0;
        let cwe_id = format!("CWE-{}", 1 + rng.gen_range(0..spec.n_cwes.max(1)));
        let published = NaiveDate::from_ymd_opt(2021, 1, 1).unwrap()
            + chrono::Duration::days(rng.gen_range(0..365));
        cwes.entry(cwe_id.clone())
            .or_insert_with(|| CweRecord { cwe_id: cwe_id.clone(), name: String::new() });
        cves.insert(
            cve_id.clone(),
            CveRecord {
                cve_id: cve_id.clone(),
                cvss_base: Some(score),
                severity_bin: bin_severity(Some(score)).expect("score in range"),
                published,
                modified: None,
                cwe_ids: vec![cwe_id],
                exploited_signal: critical && rng.gen_bool(0.5),
                summary: String::new(),
            },
        );
        let list = findings.entry(component_id(comp)).or_default();
        list.push(cve_id);
        list.sort();
    };

    let mut cve_idx = 0;
    for &h in &holders {
        add_cve(cve_idx, true, h, &mut rng, &mut cves, &mut findings, &mut cwes);
        cve_idx += 1;
    }
    // decoy holders mirror real holders with a sub-critical CVE, so merely
    // holding a CVE does not separate the classes
    for &h in &decoy_holders {
        add_cve(cve_idx, false, h, &mut rng, &mut cves, &mut findings, &mut cwes);
        cve_idx += 1;
    }
    // side-blind noise CVEs; sub-critical scores cannot flip a label
    for _ in 0..spec.n_cves {
        let comp = rng.gen_range(0..n);
        add_cve(cve_idx, false, comp, &mut rng, &mut cves, &mut findings, &mut cwes);
        cve_idx += 1;
    }

    let enriched = EnrichedSbom { doc, findings, cves, cwes };
    let reference = crate::graph::default_reference_date(&enriched);
    let graph = build_graph(&enriched, reference);
    let labels = two_hop_labels(&enriched, &graph);
    SyntheticNodeTask { enriched, graph, labels }
}

/// Independent oracle: breadth-first search over dependency edges (both
/// directions), marking components within 2 hops of a critical-CVE holder.
/// Aligned with the graph's component node order.
pub fn two_hop_labels(enriched: &EnrichedSbom, graph: &HeteroGraph) -> Vec<f64> {
    let ids = graph.nodes(NodeType::Component);
    let index: BTreeMap<&str, usize> =
        ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
    for dep in &enriched.doc.dependencies {
        let (Some(&a), Some(&b)) = (
            index.get(dep.from_id.as_str()),
            index.get(dep.to_id.as_str()),
        ) else {
            continue;
        };
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![usize::MAX; ids.len()];
    let mut queue = VecDeque::new();
    for (comp, cve_ids) in &enriched.findings {
        let Some(&ci) = index.get(comp.as_str()) else { continue };
        let critical = cve_ids.iter().any(|id| {
            enriched
                .cves
                .get(id)
                .and_then(|c| c.cvss_base)
                .map_or(false, |s| s >= 9.0)
        });
        if critical && dist[ci] != 0 {
            dist[ci] = 0;
            queue.push_back(ci);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] == 2 {
            continue;
        }
        for &v in &adj[u] {
            if dist[v] > dist[u] + 1 {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist.iter().map(|&d| if d <= 2 { 1.0 } else { 0.0 }).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticPairSpec {
    pub n_positives: usize,
    pub n_negatives: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SyntheticPairTask {
    pub features: Tensor,
    pub labels: Vec<f64>,
}

/// Separable pair dataset: positives are published within 18 days of each
/// other and share a CWE; negatives are over 415 days apart with disjoint
/// CWEs. Proximity lands at ≥ 0.9 for positives and ≤ 0.1 for negatives.
pub fn generate_pair_task(spec: &SyntheticPairSpec) -> SyntheticPairTask {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(2);
    let base = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let total = spec.n_positives + spec.n_negatives;
    for k in 0..total {
        let positive = k < spec.n_positives;
        let gap = if positive {
            rng.gen_range(0..=18)
        } else {
            rng.gen_range(415..900)
        };
        let start = rng.gen_range(0..2000);
        let score_a = (rng.gen_range(2.0..9.9_f64) * 10.0).round() / 10.0;
        let score_b = (rng.gen_range(2.0..9.9_f64) * 10.0).round() / 10.0;
        let shared_cwe = format!("CWE-{}", 10 + rng.gen_range(0..5));
        let make = |id: String, score: f64, offset: i64, cwes: Vec<String>| CveRecord {
            cve_id: id,
            cvss_base: Some(score),
            severity_bin: bin_severity(Some(score)).expect("score in range"),
            published: base + chrono::Duration::days(offset),
            modified: None,
            cwe_ids: cwes,
            exploited_signal: false,
            summary: String::new(),
        };
        let (cwes_a, cwes_b) = if positive {
            (vec![shared_cwe.clone()], vec![shared_cwe])
        } else {
            (vec!["CWE-100".to_string()], vec!["CWE-200".to_string()])
        };
        let a = make(format!("CVE-2020-{:04}", 2 * k), score_a, start, cwes_a);
        let b = make(format!("CVE-2020-{:04}", 2 * k + 1), score_b, start + gap, cwes_b);
        rows.extend(extract_pair_features(&a, &b));
        labels.push(if positive { 1.0 } else { 0.0 });
    }
    SyntheticPairTask {
        features: Tensor::new(vec![total, PAIR_FEATURE_DIM], rows)
            .expect("pair features are finite"),
        labels,
    }
}

/// Random chain-seed fixture for split-hygiene checks: CVE-disjoint chains of
/// length 2–5.
pub fn generate_seed_fixture(n_chains: usize, seed: u64) -> Vec<ChainSeed> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(3);
    let mut next_cve = 0;
    (0..n_chains)
        .map(|i| {
            let len = rng.gen_range(2..=5);
            let cves: Vec<String> = (0..len)
                .map(|_| {
                    next_cve += 1;
                    format!("CVE-2022-{:04}", next_cve)
                })
                .collect();
            ChainSeed {
                chain_id: format!("chain-{i:03}"),
                cves,
                source_kind: crate::cascade::SeedSourceKind::Advisory,
                source_ref: format!("fixture-{i}"),
                disclosed: NaiveDate::from_ymd_opt(2022, 1, 1)
                    .map(|d| d + chrono::Duration::days(rng.gen_range(0..700))),
            }
        })
        .collect()
}

// ---- ablation ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationVariant {
    pub metrics: MetricsReport,
    /// predictions ≥ 0.5 over all component nodes
    pub positive_predictions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub ablated_edge_type: EdgeType,
    pub full: AblationVariant,
    pub ablated: AblationVariant,
    /// full minus ablated
    pub delta_positive_predictions: i64,
    pub delta_f1: f64,
}

fn count_positive_predictions(probs: &[f64]) -> usize {
    probs.iter().filter(|&&p| p >= 0.5).count()
}

/// Train the node classifier twice with identical config and seed — once on
/// the full graph, once with `edge_type` (and its reverse) removed — and
/// compare positive-prediction counts and test metrics.
pub fn run_ablation(
    graph: &HeteroGraph,
    labels: &[f64],
    config: &HgatConfig,
    edge_type: EdgeType,
) -> Result<AblationReport, EvalError> {
    let n = graph.node_count(NodeType::Component);
    let split = split_nodes(n, (0.7, 0.15, 0.15), config.seed);

    let full_run = train_node_classifier(graph, labels, config, &split)?;
    let full_probs = predict_components(&full_run.model, graph)?;

    let ablated_graph = graph.ablate_edges(edge_type);
    let ablated_run = train_node_classifier(&ablated_graph, labels, config, &split)?;
    let ablated_probs = predict_components(&ablated_run.model, &ablated_graph)?;

    let full = AblationVariant {
        metrics: full_run.metrics,
        positive_predictions: count_positive_predictions(&full_probs),
    };
    let ablated = AblationVariant {
        metrics: ablated_run.metrics,
        positive_predictions: count_positive_predictions(&ablated_probs),
    };
    Ok(AblationReport {
        ablated_edge_type: edge_type,
        delta_positive_predictions: full.positive_predictions as i64
            - ablated.positive_predictions as i64,
        delta_f1: full.metrics.f1 - ablated.metrics.f1,
        full,
        ablated,
    })
}

// ---- reports ----

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything persisted about one experiment run. Wall-clock time is tracked
/// in memory for logging but deliberately excluded from serialization so that
/// reruns with equal inputs produce byte-identical report files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub run_id: String,
    pub config: serde_json::Value,
    /// artifact name → sha256 of its content
    pub fingerprints: BTreeMap<String, String>,
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_clock_secs: f64,
}

impl ExperimentReport {
    pub fn new(config: serde_json::Value) -> Self {
        let config_bytes = serde_json::to_vec(&config).expect("config serializes");
        let run_id = format!("run-{}", &sha256_hex(&config_bytes)[..12]);
        Self {
            run_id,
            config,
            fingerprints: BTreeMap::new(),
            metrics: BTreeMap::new(),
            notes: Vec::new(),
            wall_clock_secs: 0.0,
        }
    }

    pub fn fingerprint(&mut self, name: &str, content: &[u8]) {
        self.fingerprints.insert(name.to_string(), sha256_hex(content));
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("run: {}\n", self.run_id));
        out.push_str("\nfingerprints:\n");
        for (name, hash) in &self.fingerprints {
            out.push_str(&format!("  {name}: {hash}\n"));
        }
        out.push_str("\nmetrics:\n");
        for (name, value) in &self.metrics {
            out.push_str(&format!("  {name}: {value:.6}\n"));
        }
        if !self.notes.is_empty() {
            out.push_str("\nnotes:\n");
            for note in &self.notes {
                out.push_str(&format!("  - {note}\n"));
            }
        }
        out
    }
}

/// Timer helper so callers can log wall clock without persisting it.
pub struct RunTimer(Instant);

impl RunTimer {
    pub fn start() -> Self {
        RunTimer(Instant::now())
    }

    pub fn elapsed_secs(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// Write `runs/<run_id>/{config.json, report.json, curves.csv, report.txt}`
/// under `base` and return the run directory.
pub fn write_run(
    base: &Path,
    report: &ExperimentReport,
    curves: &[(String, Vec<f64>)],
) -> Result<PathBuf, EvalError> {
    let dir = base.join("runs").join(&report.run_id);
    std::fs::create_dir_all(&dir)?;
    let config_json =
        serde_json::to_string_pretty(&report.config).expect("config serializes");
    std::fs::write(dir.join("config.json"), config_json)?;
    let report_json = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(dir.join("report.json"), report_json)?;
    std::fs::write(dir.join("report.txt"), report.render_text())?;

    let mut csv = String::from("epoch");
    for (name, _) in curves {
        csv.push(',');
        csv.push_str(name);
    }
    csv.push('\n');
    let n_epochs = curves.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    for epoch in 0..n_epochs {
        csv.push_str(&epoch.to_string());
        for (_, values) in curves {
            csv.push(',');
            if let Some(v) = values.get(epoch) {
                csv.push_str(&format!("{v:.12e}"));
            }
        }
        csv.push('\n');
    }
    std::fs::write(dir.join("curves.csv"), csv)?;
    Ok(dir)
}

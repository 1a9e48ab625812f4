//! Acceptance suite: one test per release criterion, each printing a single
//! `ACCEPTANCE <name>: PASS` line on success (run with `--nocapture` to see
//! them). Tolerances are pinned in the assertions.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::time::Instant;

use chrono::NaiveDate;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sbomcascade::cascade::{
    compose_chains, link_loss, link_loss_with_grads, CvePair, MlpModel, LinkTrainConfig,
    train_link_predictor, roc_auc, MLP_LAYER_SIZES, PAIR_FEATURE_DIM,
};
use sbomcascade::enrich::{bin_severity, CveRecord};
use sbomcascade::eval::{
    generate_node_task, generate_pair_task, generate_seed_fixture, run_ablation, split_pairs,
    SplitKind, SplitSpec, SyntheticNodeSpec, SyntheticPairSpec,
};
use sbomcascade::graph::{EdgeType, NodeType};
use sbomcascade::hgat::{
    attention_coefficients, compute_metrics, node_loss, node_loss_with_grads, split_nodes,
    train_node_classifier, HgatConfig, HgatModel,
};
use sbomcascade::nn::{max_grad_relative_error, NnError, Parameter, Tape, Tensor, Var};

fn report(name: &str, ok: bool, detail: &str) {
    println!("ACCEPTANCE {name}: {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "ACCEPTANCE {name}: FAIL — {detail}");
}

// ---- 1. gradient correctness ----

/// Random tensor with entries bounded away from zero so finite differences
/// never straddle an activation kink.
fn random_tensor(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Tensor {
    let values: Vec<f64> = (0..rows * cols)
        .map(|_| {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            sign * (0.05 + 0.85 * rng.gen::<f64>())
        })
        .collect();
    Tensor::new(vec![rows, cols], values).expect("finite values")
}

/// Gradient-check one op graph: `build` turns leaf vars (one per shape) into
/// a scalar loss var. Returns the worst relative error across all parameters.
fn check_op<F>(shapes: &[(usize, usize)], seed: u64, build: F) -> f64
where
    F: Fn(&mut Tape, &[Var]) -> Result<Var, NnError>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params: Vec<Parameter> = shapes
        .iter()
        .enumerate()
        .map(|(i, &(r, c))| Parameter::new(format!("p{i}"), random_tensor(r, c, &mut rng)))
        .collect();
    // analytic gradients via the tape
    {
        let mut tape = Tape::new();
        let vars: Vec<Var> = params.iter().map(|p| tape.leaf(p.tensor.clone())).collect();
        let loss = build(&mut tape, &vars).expect("op graph builds");
        tape.backward(loss).expect("backward succeeds");
        for (p, v) in params.iter_mut().zip(&vars) {
            p.grad = tape.grad(*v).expect("grad present").clone();
        }
    }
    max_grad_relative_error(
        &mut params,
        |ps: &[Parameter]| {
            let mut tape = Tape::new();
            let vars: Vec<Var> = ps.iter().map(|p| tape.leaf(p.tensor.clone())).collect();
            let loss = build(&mut tape, &vars)?;
            Ok(tape.value(loss).scalar_value().expect("scalar loss"))
        },
        1e-5,
    )
    .expect("finite differences evaluate")
}

#[test]
fn gradient_correctness() {
    let start = Instant::now();
    const TOL: f64 = 1e-4;
    const SEEDS: u64 = 20;

    // every differentiable tape operation, wrapped so per-entry gradients are
    // informative (sigmoid + sum reduction)
    type OpCase = (
        &'static str,
        Vec<(usize, usize)>,
        Box<dyn Fn(&mut Tape, &[Var]) -> Result<Var, NnError>>,
    );
    let squash = |t: &mut Tape, v: Var| -> Result<Var, NnError> {
        let s = t.sigmoid(v)?;
        t.sum(s)
    };
    let cases: Vec<OpCase> = vec![
        ("matmul", vec![(3, 4), (4, 2)], Box::new(move |t, v| {
            let y = t.matmul(v[0], v[1])?;
            squash(t, y)
        })),
        ("add_bias", vec![(3, 4), (1, 4)], Box::new(move |t, v| {
            let y = t.add_bias(v[0], v[1])?;
            squash(t, y)
        })),
        ("add", vec![(3, 4), (3, 4)], Box::new(move |t, v| {
            let y = t.add(v[0], v[1])?;
            squash(t, y)
        })),
        ("scale", vec![(3, 4)], Box::new(move |t, v| {
            let y = t.scale(v[0], 1.7)?;
            squash(t, y)
        })),
        ("concat_cols", vec![(3, 2), (3, 3)], Box::new(move |t, v| {
            let y = t.concat_cols(&[v[0], v[1]])?;
            squash(t, y)
        })),
        ("leaky_relu", vec![(3, 4)], Box::new(move |t, v| {
            let y = t.leaky_relu(v[0], 0.2)?;
            squash(t, y)
        })),
        ("elu", vec![(3, 4)], Box::new(move |t, v| {
            let y = t.elu(v[0])?;
            squash(t, y)
        })),
        ("sigmoid", vec![(3, 4)], Box::new(|t, v| {
            let y = t.sigmoid(v[0])?;
            t.sum(y)
        })),
        ("segment_softmax", vec![(6, 1)], Box::new(|t, v| {
            let y = t.segment_softmax(v[0], &[0, 0, 1, 1, 1, 2])?;
            let m = t.mul_mask(y, &[0.3, -1.2, 0.7, 2.0, -0.4, 1.5])?;
            t.sum(m)
        })),
        ("row_scale", vec![(4, 3), (4, 1)], Box::new(move |t, v| {
            let y = t.row_scale(v[0], v[1])?;
            squash(t, y)
        })),
        ("gather_rows", vec![(5, 3)], Box::new(move |t, v| {
            let y = t.gather_rows(v[0], &[4, 0, 2, 2])?;
            squash(t, y)
        })),
        ("segment_sum", vec![(6, 2)], Box::new(move |t, v| {
            let y = t.segment_sum(v[0], &[0, 1, 1, 2, 2, 2], 4)?;
            squash(t, y)
        })),
        ("sum", vec![(3, 4)], Box::new(|t, v| t.sum(v[0]))),
        ("mul_mask", vec![(3, 4)], Box::new(|t, v| {
            let y = t.mul_mask(v[0], &[0.5; 12])?;
            t.sum(y)
        })),
        ("bce_loss", vec![(5, 1)], Box::new(|t, v| {
            let p = t.sigmoid(v[0])?;
            t.bce_loss(p, &[1.0, 0.0, 1.0, 0.0, 1.0], &[1.0, 0.5, 2.0, 1.0, 1.0])
        })),
    ];
    for (name, shapes, build) in &cases {
        for seed in 0..SEEDS {
            let err = check_op(shapes, seed, build);
            assert!(err <= TOL, "op {name} seed {seed}: rel err {err} > {TOL}");
        }
    }

    // one full HGAT layer end to end on a small heterogeneous graph
    for seed in 0..SEEDS {
        let spec = SyntheticNodeSpec {
            n_components: 6,
            n_cves: 3,
            n_cwes: 2,
            seed,
            ..Default::default()
        };
        let task = generate_node_task(&spec);
        let config = HgatConfig {
            layers: 1,
            hidden_dim: 4,
            heads: 2,
            mask_label_leakage: false,
            seed,
            ..Default::default()
        };
        let input_dims: BTreeMap<NodeType, usize> = NodeType::ALL
            .iter()
            .map(|&t| (t, task.graph.features(t).cols().max(1)))
            .collect();
        let mut model =
            HgatModel::init(config, &input_dims, task.graph.feature_schema.version)
                .expect("model initializes");
        let indices: Vec<usize> = (0..spec.n_components).collect();
        node_loss_with_grads(&mut model, &task.graph, &task.labels, &indices)
            .expect("loss evaluates");
        let mut probe = model.clone();
        let err = max_grad_relative_error(
            &mut model.params,
            |ps: &[Parameter]| {
                for (q, p) in probe.params.iter_mut().zip(ps) {
                    q.tensor = p.tensor.clone();
                }
                Ok(node_loss(&probe, &task.graph, &task.labels, &indices)
                    .expect("loss evaluates"))
            },
            1e-5,
        )
        .expect("finite differences evaluate");
        assert!(err <= TOL, "HGAT layer seed {seed}: rel err {err} > {TOL}");
    }

    // the 17-16-8-1 perceptron
    assert_eq!(MLP_LAYER_SIZES, [17, 16, 8, 1]);
    for seed in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(999));
        let features = random_tensor(12, PAIR_FEATURE_DIM, &mut rng);
        let labels: Vec<f64> = (0..12).map(|_| f64::from(rng.gen_bool(0.5))).collect();
        let mut model = MlpModel::init(seed);
        link_loss_with_grads(&mut model, &features, &labels).expect("loss evaluates");
        let mut probe = MlpModel::init(seed);
        let err = max_grad_relative_error(
            &mut model.params,
            |ps: &[Parameter]| {
                for (q, p) in probe.params.iter_mut().zip(ps) {
                    q.tensor = p.tensor.clone();
                }
                link_loss(&probe, &features, &labels)
            },
            1e-5,
        )
        .expect("finite differences evaluate");
        assert!(err <= TOL, "MLP seed {seed}: rel err {err} > {TOL}");
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "gradient-correctness",
        elapsed < 30.0,
        &format!("runtime {elapsed:.1}s exceeds 30s budget"),
    );
}

// ---- 2. attention normalization ----

#[test]
fn attention_normalization() {
    const TOL: f64 = 1e-6;
    for s in 0..100u64 {
        let spec = SyntheticNodeSpec {
            n_components: 5 + (s as usize % 40),
            n_cves: 3 + (s as usize % 7),
            n_cwes: 2 + (s as usize % 5),
            seed: s,
            ..Default::default()
        };
        let task = generate_node_task(&spec);
        assert!(
            task.graph.total_node_count() <= 200,
            "graph {s} has {} nodes",
            task.graph.total_node_count()
        );
        let config = HgatConfig { mask_label_leakage: false, seed: s, ..Default::default() };
        let heads = config.heads;
        let input_dims: BTreeMap<NodeType, usize> = NodeType::ALL
            .iter()
            .map(|&t| (t, task.graph.features(t).cols().max(1)))
            .collect();
        let model = HgatModel::init(config, &input_dims, task.graph.feature_schema.version)
            .expect("model initializes");
        let records = attention_coefficients(&model, &task.graph).expect("forward succeeds");

        let mut seen: BTreeSet<(EdgeType, usize)> = BTreeSet::new();
        for rec in &records {
            seen.insert((rec.edge_type, rec.head));
            let mut sums: BTreeMap<usize, f64> = BTreeMap::new();
            for (&dst, &c) in rec.dst_indices.iter().zip(&rec.coefficients) {
                *sums.entry(dst).or_insert(0.0) += c;
            }
            for (dst, sum) in sums {
                assert!(
                    (sum - 1.0).abs() <= TOL,
                    "graph {s} {:?} head {} dst {dst}: attention sums to {sum}",
                    rec.edge_type,
                    rec.head
                );
            }
        }
        // every populated edge type must be represented for every head
        for t in EdgeType::ALL {
            if !task.graph.edges(t).is_empty() {
                for head in 0..heads {
                    assert!(
                        seen.contains(&(t, head)),
                        "graph {s}: no attention record for {t:?} head {head}"
                    );
                }
            }
        }
    }
    report("attention-normalization", true, "");
}

// ---- 3. metric oracles ----

fn brute_force_auc(scores: &[f64], labels: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut pairs = 0.0;
    for (i, (&sp, &lp)) in scores.iter().zip(labels).enumerate() {
        if lp < 0.5 {
            continue;
        }
        for (j, (&sn, &ln)) in scores.iter().zip(labels).enumerate() {
            if i == j || ln >= 0.5 {
                continue;
            }
            pairs += 1.0;
            if sp > sn {
                num += 1.0;
            } else if sp == sn {
                num += 0.5;
            }
        }
    }
    num / pairs
}

#[test]
fn metric_oracles() {
    // confusion counting: exact match on 1000 random vectors
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=64);
        let probs: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let labels: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_bool(0.5))).collect();
        let threshold = rng.gen_range(0.05..0.95);
        let m = compute_metrics(&probs, &labels, threshold).expect("valid inputs");
        let (mut tp, mut fp, mut tn, mut fal_n) = (0usize, 0, 0, 0);
        for (&p, &y) in probs.iter().zip(&labels) {
            match (p >= threshold, y >= 0.5) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, false) => tn += 1,
                (false, true) => fal_n += 1,
            }
        }
        assert_eq!(
            (m.true_positives, m.false_positives, m.true_negatives, m.false_negatives),
            (tp, fp, tn, fal_n)
        );
    }

    // ROC-AUC vs the O(n²) Mann-Whitney oracle, ties included
    for round in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + round);
        let n = rng.gen_range(10..=500);
        let quantize = round % 2 == 0;
        let scores: Vec<f64> = (0..n)
            .map(|_| {
                let s = rng.gen::<f64>();
                if quantize { (s * 20.0).round() / 20.0 } else { s }
            })
            .collect();
        let mut labels: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_bool(0.4))).collect();
        // guarantee both classes
        labels[0] = 1.0;
        labels[n - 1] = 0.0;
        let fast = roc_auc(&scores, &labels).expect("both classes present");
        let slow = brute_force_auc(&scores, &labels);
        assert!(
            (fast - slow).abs() <= 1e-9,
            "round {round}: AUC {fast} vs oracle {slow}"
        );
    }

    // harmonic-mean consistency of the reference precision/recall pair:
    // tp=3413, fp=809, fn=1587 gives P=3413/4222, R=0.6826
    let mut probs = Vec::new();
    let mut labels = Vec::new();
    let push = |probs: &mut Vec<f64>, labels: &mut Vec<f64>, n: usize, p: f64, y: f64| {
        probs.extend(std::iter::repeat(p).take(n));
        labels.extend(std::iter::repeat(y).take(n));
    };
    push(&mut probs, &mut labels, 3413, 0.9, 1.0);
    push(&mut probs, &mut labels, 809, 0.9, 0.0);
    push(&mut probs, &mut labels, 1587, 0.1, 1.0);
    push(&mut probs, &mut labels, 4191, 0.1, 0.0);
    let m = compute_metrics(&probs, &labels, 0.5).expect("valid inputs");
    assert!((m.precision - 0.8084).abs() <= 1e-4, "precision {}", m.precision);
    assert!((m.recall - 0.6826).abs() <= 1e-12, "recall {}", m.recall);
    report(
        "metric-oracles",
        (m.f1 - 0.7402).abs() <= 1e-4,
        &format!("f1 {} outside 0.7402 ± 1e-4", m.f1),
    );
}

// ---- 4. synthetic learnability, node task ----

#[test]
fn node_task_learnability() {
    let start = Instant::now();
    let spec = SyntheticNodeSpec { n_components: 500, seed: 42, ..Default::default() };
    let task = generate_node_task(&spec);
    let config = HgatConfig { mask_label_leakage: false, epochs: 200, ..Default::default() };
    let split = split_nodes(spec.n_components, (0.7, 0.15, 0.15), 42);
    let outcome =
        train_node_classifier(&task.graph, &task.labels, &config, &split).expect("training runs");
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "node-task-learnability",
        outcome.metrics.accuracy >= 0.90 && outcome.metrics.f1 >= 0.80 && elapsed < 120.0,
        &format!(
            "accuracy {:.4} (≥0.90), f1 {:.4} (≥0.80), runtime {elapsed:.1}s (<120s)",
            outcome.metrics.accuracy, outcome.metrics.f1
        ),
    );
}

// ---- 5. synthetic learnability, pair task ----

#[test]
fn pair_task_learnability() {
    let start = Instant::now();
    let spec = SyntheticPairSpec { n_positives: 100, n_negatives: 200, seed: 42 };
    let task = generate_pair_task(&spec);
    let (_, rocs) = train_link_predictor(&task.features, &task.labels, &LinkTrainConfig::default())
        .expect("training runs");
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "pair-task-learnability",
        rocs.holdout_auc >= 0.90 && elapsed < 30.0,
        &format!("holdout AUC {:.4} (≥0.90), runtime {elapsed:.1}s (<30s)", rocs.holdout_auc),
    );
}

// ---- 6. ablation direction ----

#[test]
fn ablation_direction() {
    let mut wins = 0;
    for seed in 0..10u64 {
        let spec =
            SyntheticNodeSpec { n_components: 150, seed: 100 + seed, ..Default::default() };
        let task = generate_node_task(&spec);
        let config = HgatConfig {
            mask_label_leakage: false,
            epochs: 60,
            seed: 100 + seed,
            ..Default::default()
        };
        let rep = run_ablation(&task.graph, &task.labels, &config, EdgeType::DependsOn)
            .expect("ablation runs");
        if rep.delta_positive_predictions > 0 {
            wins += 1;
        }
    }
    report(
        "ablation-direction",
        wins >= 9,
        &format!("dependency ablation reduced positives in only {wins}/10 seeds (need ≥9)"),
    );
}

// ---- 7. composition oracle ----

fn random_records(n: usize, rng: &mut ChaCha8Rng) -> BTreeMap<String, CveRecord> {
    let base = NaiveDate::from_ymd_opt(2021, 1, 1).unwrap();
    (0..n)
        .map(|i| {
            let id = format!("CVE-2021-{:04}", 100 + i);
            let score = (rng.gen_range(2.0..9.9_f64) * 10.0).round() / 10.0;
            let record = CveRecord {
                cve_id: id.clone(),
                cvss_base: Some(score),
                severity_bin: bin_severity(Some(score)).expect("score in range"),
                published: base + chrono::Duration::days(rng.gen_range(0..700)),
                modified: None,
                cwe_ids: vec![format!("CWE-{}", 1 + rng.gen_range(0..4))],
                exploited_signal: rng.gen_bool(0.3),
                summary: String::new(),
            };
            (id, record)
        })
        .collect()
}

/// Order-independent geometric mean, matching the ranked output exactly.
fn geo_mean(scores: &[f64]) -> f64 {
    let mut lns: Vec<f64> = scores.iter().map(|&x| x.ln()).collect();
    lns.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    (lns.iter().sum::<f64>() / lns.len() as f64).exp()
}

/// Independent oracle: depth-first enumeration of every undirected simple
/// path of 2..=max_length nodes over edges scoring at or above the threshold.
/// Paths are keyed by the lexicographically smaller of (sequence, reverse).
fn exhaustive_paths(
    ids: &[String],
    model: &MlpModel,
    records: &BTreeMap<String, CveRecord>,
    threshold: f64,
    max_length: usize,
) -> BTreeMap<Vec<String>, f64> {
    let n = ids.len();
    let mut score = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let s = model
                .score_pair(&records[&ids[i]], &records[&ids[j]])
                .expect("scoring succeeds");
            if s >= threshold {
                score[i][j] = Some(s);
                score[j][i] = Some(s);
            }
        }
    }
    let mut out: BTreeMap<Vec<String>, f64> = BTreeMap::new();
    let mut path = Vec::new();
    let mut edge_scores = Vec::new();
    fn dfs(
        node: usize,
        path: &mut Vec<usize>,
        edge_scores: &mut Vec<f64>,
        score: &[Vec<Option<f64>>],
        ids: &[String],
        max_length: usize,
        out: &mut BTreeMap<Vec<String>, f64>,
    ) {
        path.push(node);
        if path.len() >= 2 {
            let seq: Vec<String> = path.iter().map(|&i| ids[i].clone()).collect();
            let mut rev = seq.clone();
            rev.reverse();
            let key = seq.min(rev);
            out.insert(key, geo_mean(edge_scores));
        }
        if path.len() < max_length {
            for (next, s) in score[node].iter().enumerate() {
                if let Some(s) = s {
                    if !path.contains(&next) {
                        edge_scores.push(*s);
                        dfs(next, path, edge_scores, score, ids, max_length, out);
                        edge_scores.pop();
                    }
                }
            }
        }
        path.pop();
    }
    for start in 0..n {
        dfs(start, &mut path, &mut edge_scores, &score, ids, max_length, &mut out);
    }
    out
}

#[test]
fn composition_oracle() {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = 4 + (seed as usize % 3); // 4..=6 CVEs
        let records = random_records(n, &mut rng);
        let ids: Vec<String> = records.keys().cloned().collect();
        let model = MlpModel::init(seed);
        let threshold = rng.gen_range(0.2..0.6);
        let max_length = 6;
        let ranked = compose_chains(&ids, &model, &records, threshold, max_length, None)
            .expect("composition runs");
        let oracle = exhaustive_paths(&ids, &model, &records, threshold, max_length);

        assert_eq!(
            ranked.len(),
            oracle.len(),
            "seed {seed}: {} ranked vs {} exhaustive paths",
            ranked.len(),
            oracle.len()
        );
        for cand in &ranked {
            let mut rev = cand.cves.clone();
            rev.reverse();
            let key = cand.cves.clone().min(rev);
            let expected = oracle
                .get(&key)
                .unwrap_or_else(|| panic!("seed {seed}: ranked chain {key:?} not in oracle"));
            assert!(
                (cand.aggregate_score - expected).abs() <= 1e-12,
                "seed {seed}: aggregate {} vs oracle {expected}",
                cand.aggregate_score
            );
        }
    }
    report("composition-oracle", true, "");
}

// ---- 8. determinism ----

fn collect_files(dir: &std::path::Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).expect("run dir readable") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).expect("under root").to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&path).expect("file readable"));
            }
        }
    }
    out
}

#[test]
fn pipeline_determinism() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let out1 = tmp.path().join("run1");
    let out2 = tmp.path().join("run2");
    for out in [&out1, &out2] {
        let code = sbomcascade::cli::run([
            "sbomcascade",
            "--offline",
            "--seed",
            "42",
            "--out",
            out.to_str().expect("utf-8 path"),
            "pipeline",
            "fixtures/sbom_small.json",
            "--seeds",
            "fixtures/chains.json",
        ]);
        assert_eq!(code, 0, "pipeline run failed");
    }
    let files1 = collect_files(&out1);
    let files2 = collect_files(&out2);
    assert!(!files1.is_empty(), "pipeline produced no artifacts");
    assert_eq!(
        files1.keys().collect::<Vec<_>>(),
        files2.keys().collect::<Vec<_>>(),
        "artifact sets differ"
    );
    let mut ok = true;
    for (name, bytes) in &files1 {
        if files2[name] != *bytes {
            ok = false;
            eprintln!("artifact {name} differs between identical runs");
        }
    }
    report("pipeline-determinism", ok, "artifacts differ between identical runs");
}

// ---- 9. split hygiene ----

#[test]
fn split_hygiene() {
    for seed in 0..100u64 {
        let seeds = generate_seed_fixture(8, seed);
        let spec = SplitSpec {
            kind: SplitKind::ChainLevel,
            train_fraction: 0.7,
            cutoff: None,
            seed,
        };
        let split = split_pairs(&seeds, &spec, 2.0).expect("split succeeds");
        let positives = |side: &sbomcascade::eval::PairSide| -> BTreeSet<CvePair> {
            side.pairs
                .iter()
                .zip(&side.labels)
                .filter(|(_, &y)| y >= 0.5)
                .map(|(p, _)| p.clone())
                .collect()
        };
        let train_pos = positives(&split.train);
        let test_pos = positives(&split.test);
        assert!(
            train_pos.is_disjoint(&test_pos),
            "seed {seed}: positive pairs shared across sides"
        );
        // no chain may contribute positive pairs to both sides
        for chain in &seeds {
            let chain_pairs: BTreeSet<CvePair> = chain
                .cves
                .iter()
                .enumerate()
                .flat_map(|(i, a)| {
                    chain.cves[i + 1..].iter().map(move |b| CvePair::new(a.clone(), b.clone()))
                })
                .collect();
            let in_train = !train_pos.is_disjoint(&chain_pairs);
            let in_test = !test_pos.is_disjoint(&chain_pairs);
            assert!(
                !(in_train && in_test),
                "seed {seed}: chain {} straddles the split",
                chain.chain_id
            );
        }
    }
    report("split-hygiene", true, "");
}

//! Command-line orchestration: ingest → enrich → graph → train/eval → rank
//! chains → report.
//!
//! Exit codes: 0 success, 2 input error, 3 source unavailable in strict mode,
//! 64 usage error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cascade::{
    compose_chains, expand_positive_pairs, load_chain_seeds, sample_negative_pairs,
    save_link_model, train_link_predictor, CascadeError, ChainCandidate, CvePair, LinkTrainConfig,
    MlpModel,
};
use crate::enrich::{enrich_sbom, CacheConfig, EnrichError, EnrichedSbom, VulnSource};
use crate::eval::{run_ablation, write_run, EvalError, ExperimentReport, RunTimer};
use crate::graph::{self, build_graph, default_reference_date, EdgeType, HeteroGraph, NodeType};
use crate::hgat::{
    has_any_cve_labels, save_model, split_nodes, train_node_classifier, HgatConfig, HgatError,
    NodeSplit, TrainOutcome,
};
use crate::sbom::{parse_sbom, validate_sbom, FindingSeverity, SbomError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOURCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

const ENV_OSV_URL: &str = "SBOMCASCADE_OSV_URL";
const ENV_CACHE_DIR: &str = "SBOMCASCADE_CACHE_DIR";
const DEFAULT_OSV_URL: &str = "https://api.osv.dev/v1/query";

#[derive(Parser, Debug)]
#[command(
    name = "sbomcascade",
    version,
    about = "SBOM vulnerability graph analysis and CVE chain ranking"
)]
struct Cli {
    /// TOML config file (flag > env > file > default)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// use local advisory fixtures instead of the network
    #[arg(long, global = true)]
    offline: bool,
    /// abort (exit 3) when the advisory source is unavailable
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// pair score threshold for chain composition
    #[arg(long, global = true)]
    threshold: Option<f64>,
    /// maximum chain length
    #[arg(long, global = true)]
    max_length: Option<usize>,
    /// beam width (0 = unlimited)
    #[arg(long, global = true)]
    beam: Option<usize>,
    /// edge type to ablate (e.g. depends_on)
    #[arg(long, global = true)]
    ablate: Option<String>,
    /// output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate SBOMs, printing a summary JSON per input
    Ingest { paths: Vec<PathBuf> },
    /// Enrich an SBOM with advisory data and write the enriched document
    Enrich { sbom: PathBuf },
    /// Build and write the heterogeneous graph for an SBOM
    Graph { sbom: PathBuf },
    /// Train the component classifier on an enriched SBOM
    TrainNode { sbom: PathBuf },
    /// Train the CVE-pair link predictor from chain seeds
    TrainLink {
        sbom: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
    },
    /// Rank candidate CVE chains for an SBOM
    RankChains {
        sbom: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
    },
    /// Compare the component classifier with and without an edge type
    Ablate { sbom: PathBuf },
    /// End-to-end run: ingest, enrich, graph, train both models, rank chains
    Pipeline {
        sbom: PathBuf,
        #[arg(long)]
        seeds: Option<PathBuf>,
    },
}

// ---- configuration ----

#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    seed: Option<u64>,
    threshold: Option<f64>,
    max_length: Option<usize>,
    beam: Option<usize>,
    out: Option<PathBuf>,
    offline: Option<bool>,
    strict: Option<bool>,
    #[serde(default)]
    vuln_source: FileVulnSource,
    #[serde(default)]
    hgat: FileHgat,
    #[serde(default)]
    link: FileLink,
}

#[derive(Debug, Default, Deserialize)]
struct FileVulnSource {
    url: Option<String>,
    fixtures: Option<PathBuf>,
    cache_dir: Option<PathBuf>,
    cache_max_age_secs: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
struct FileHgat {
    hidden_dim: Option<usize>,
    heads: Option<usize>,
    layers: Option<usize>,
    epochs: Option<usize>,
    learning_rate: Option<f64>,
    dropout_rate: Option<f64>,
    class_weight_positive: Option<f64>,
    mask_label_leakage: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
struct FileLink {
    epochs: Option<usize>,
    learning_rate: Option<f64>,
    holdout_fraction: Option<f64>,
    negative_ratio: Option<f64>,
}

/// Fully merged configuration (flag > env > file > default), echoed verbatim
/// into every report.
#[derive(Debug, Clone, Serialize)]
pub struct CliConfig {
    pub seed: u64,
    pub threshold: f64,
    pub max_length: usize,
    /// None = unlimited beam
    pub beam: Option<usize>,
    /// output location only; excluded from the config echo so reruns into
    /// different directories produce identical run ids and report bytes
    #[serde(skip)]
    pub out: PathBuf,
    pub offline: bool,
    pub strict: bool,
    pub osv_url: String,
    pub fixtures_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
    pub cache_max_age_secs: u64,
    pub negative_ratio: f64,
    pub hgat: HgatConfig,
    pub link: LinkTrainConfig,
    pub ablate_edge: Option<String>,
}

fn resolve_config(cli: &Cli) -> Result<CliConfig, CliError> {
    let file: FileConfig = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::input(path, &format!("cannot read config: {e}")))?;
            toml::from_str(&text)
                .map_err(|e| CliError::input(path, &format!("bad config: {e}")))?
        }
        None => FileConfig::default(),
    };

    let env_url = std::env::var(ENV_OSV_URL).ok();
    let env_cache = std::env::var(ENV_CACHE_DIR).ok().map(PathBuf::from);

    let seed = cli.seed.or(file.seed).unwrap_or(42);
    let beam = match cli.beam.or(file.beam) {
        Some(0) => None,
        Some(w) => Some(w),
        None => Some(10),
    };
    let mut hgat = HgatConfig { seed, ..HgatConfig::default() };
    if let Some(v) = file.hgat.hidden_dim {
        hgat.hidden_dim = v;
    }
    if let Some(v) = file.hgat.heads {
        hgat.heads = v;
    }
    if let Some(v) = file.hgat.layers {
        hgat.layers = v;
    }
    if let Some(v) = file.hgat.epochs {
        hgat.epochs = v;
    }
    if let Some(v) = file.hgat.learning_rate {
        hgat.learning_rate = v;
    }
    if let Some(v) = file.hgat.dropout_rate {
        hgat.dropout_rate = v;
    }
    if let Some(v) = file.hgat.class_weight_positive {
        hgat.class_weight_positive = v;
    }
    if let Some(v) = file.hgat.mask_label_leakage {
        hgat.mask_label_leakage = v;
    }

    let mut link = LinkTrainConfig { seed, ..LinkTrainConfig::default() };
    if let Some(v) = file.link.epochs {
        link.epochs = v;
    }
    if let Some(v) = file.link.learning_rate {
        link.learning_rate = v;
    }
    if let Some(v) = file.link.holdout_fraction {
        link.holdout_fraction = v;
    }

    Ok(CliConfig {
        seed,
        threshold: cli.threshold.or(file.threshold).unwrap_or(0.5),
        max_length: cli.max_length.or(file.max_length).unwrap_or(5),
        beam,
        out: cli
            .out
            .clone()
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from("out")),
        offline: cli.offline || file.offline.unwrap_or(false),
        strict: cli.strict || file.strict.unwrap_or(false),
        osv_url: env_url
            .or(file.vuln_source.url)
            .unwrap_or_else(|| DEFAULT_OSV_URL.to_string()),
        fixtures_dir: file
            .vuln_source
            .fixtures
            .unwrap_or_else(|| PathBuf::from("fixtures/osv")),
        cache_dir: env_cache.or(file.vuln_source.cache_dir),
        cache_max_age_secs: file.vuln_source.cache_max_age_secs.unwrap_or(86_400),
        negative_ratio: file.link.negative_ratio.unwrap_or(2.0),
        hgat,
        link,
        ablate_edge: cli.ablate.clone(),
    })
}

impl CliConfig {
    fn vuln_source(&self) -> VulnSource {
        if self.offline {
            VulnSource::Fixtures(self.fixtures_dir.clone())
        } else {
            VulnSource::Http {
                url: self.osv_url.clone(),
                cache: self.cache_dir.as_ref().map(|dir| CacheConfig {
                    dir: dir.clone(),
                    max_age_secs: self.cache_max_age_secs,
                }),
            }
        }
    }
}

// ---- errors ----

#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    fn input(path: &Path, msg: &str) -> Self {
        CliError { exit_code: EXIT_INPUT, message: format!("{}: {msg}", path.display()) }
    }

    fn stage(stage: &str, path: &Path, msg: &str) -> Self {
        CliError {
            exit_code: EXIT_INPUT,
            message: format!("{stage}: {}: {msg}", path.display()),
        }
    }
}

fn enrich_error(path: &Path, e: EnrichError, strict: bool) -> CliError {
    let exit_code = match e {
        EnrichError::SourceUnavailable(_) if strict => EXIT_SOURCE,
        _ => EXIT_INPUT,
    };
    CliError { exit_code, message: format!("enrich: {}: {e}", path.display()) }
}

fn warn(path: &Path, msg: &str) {
    eprintln!("WARN {}: {msg}", path.display());
}

fn error(msg: &str) {
    eprintln!("ERROR {msg}");
}

// ---- entry points ----

/// Run with explicit arguments; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    if argv.len() <= 1 {
        // zero arguments: usage text on the diagnostic stream
        let mut cmd = <Cli as clap::CommandFactory>::command();
        let _ = cmd.print_help();
        return EXIT_USAGE;
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let config = match resolve_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            error(&e.message);
            return e.exit_code;
        }
    };
    match dispatch(&cli.command, &config) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            error(&e.message);
            e.exit_code
        }
    }
}

fn dispatch(command: &Command, config: &CliConfig) -> Result<(), CliError> {
    match command {
        Command::Ingest { paths } => cmd_ingest(paths),
        Command::Enrich { sbom } => cmd_enrich(sbom, config).map(|_| ()),
        Command::Graph { sbom } => cmd_graph(sbom, config).map(|_| ()),
        Command::TrainNode { sbom } => cmd_train_node(sbom, config),
        Command::TrainLink { sbom, seeds } => cmd_train_link(sbom, seeds, config).map(|_| ()),
        Command::RankChains { sbom, seeds } => cmd_rank_chains(sbom, seeds, config),
        Command::Ablate { sbom } => cmd_ablate(sbom, config),
        Command::Pipeline { sbom, seeds } => cmd_pipeline(sbom, seeds.as_deref(), config),
    }
}

// ---- stages ----

#[derive(Serialize)]
struct IngestSummary {
    path: String,
    spec_version: String,
    components: usize,
    dependencies: usize,
    errors: Vec<String>,
    warnings: Vec<String>,
}

fn cmd_ingest(paths: &[PathBuf]) -> Result<(), CliError> {
    if paths.is_empty() {
        return Err(CliError { exit_code: EXIT_USAGE, message: "ingest: no input files".into() });
    }
    let mut failed = false;
    for path in paths {
        let raw = match fs::read(path) {
            Ok(b) => b,
            Err(e) => {
                error(&format!("{}: {e}", path.display()));
                failed = true;
                continue;
            }
        };
        match parse_sbom(&raw, &path.display().to_string()) {
            Ok(parsed) => {
                let findings = validate_sbom(&parsed.doc);
                let summary = IngestSummary {
                    path: path.display().to_string(),
                    spec_version: parsed.doc.spec_version.clone(),
                    components: parsed.doc.components.len(),
                    dependencies: parsed.doc.dependencies.len(),
                    errors: findings
                        .iter()
                        .filter(|f| f.severity == FindingSeverity::Error)
                        .map(|f| format!("{}: {}", f.locator, f.message))
                        .collect(),
                    warnings: parsed
                        .warnings
                        .iter()
                        .cloned()
                        .chain(
                            findings
                                .iter()
                                .filter(|f| f.severity == FindingSeverity::Warning)
                                .map(|f| format!("{}: {}", f.locator, f.message)),
                        )
                        .collect(),
                };
                for w in &summary.warnings {
                    warn(path, w);
                }
                println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            }
            Err(e) => {
                error(&format!("{}: {e}", path.display()));
                failed = true;
            }
        }
    }
    if failed {
        Err(CliError { exit_code: EXIT_INPUT, message: "ingest: one or more inputs failed".into() })
    } else {
        Ok(())
    }
}

fn load_enriched(sbom: &Path, config: &CliConfig) -> Result<EnrichedSbom, CliError> {
    let raw = fs::read(sbom).map_err(|e| CliError::input(sbom, &e.to_string()))?;
    let parsed = parse_sbom(&raw, &sbom.display().to_string())
        .map_err(|e: SbomError| CliError::stage("ingest", sbom, &e.to_string()))?;
    for w in &parsed.warnings {
        warn(sbom, w);
    }
    let outcome = enrich_sbom(&parsed.doc, &config.vuln_source(), config.strict)
        .map_err(|e| enrich_error(sbom, e, config.strict))?;
    for w in &outcome.warnings {
        warn(sbom, w);
    }
    Ok(outcome.enriched)
}

fn write_json(path: &Path, json: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::input(path, &e.to_string()))?;
    }
    fs::write(path, json).map_err(|e| CliError::input(path, &e.to_string()))
}

fn cmd_enrich(sbom: &Path, config: &CliConfig) -> Result<EnrichedSbom, CliError> {
    let enriched = load_enriched(sbom, config)?;
    let json = serde_json::to_string_pretty(&enriched).expect("enriched serializes");
    write_json(&config.out.join("enriched.json"), &json)?;
    Ok(enriched)
}

fn cmd_graph(sbom: &Path, config: &CliConfig) -> Result<(EnrichedSbom, HeteroGraph), CliError> {
    let enriched = load_enriched(sbom, config)?;
    let graph = build_graph(&enriched, default_reference_date(&enriched));
    write_json(&config.out.join("graph.hgraph.json"), &graph::to_json(&graph))?;
    Ok((enriched, graph))
}

/// 70/15/15 node split; tiny inputs train and evaluate on all nodes.
fn node_split(n: usize, seed: u64) -> NodeSplit {
    if n < 10 {
        let all: Vec<usize> = (0..n).collect();
        NodeSplit { train: all.clone(), validation: Vec::new(), test: all }
    } else {
        split_nodes(n, (0.7, 0.15, 0.15), seed)
    }
}

fn train_node(
    enriched: &EnrichedSbom,
    graph: &HeteroGraph,
    config: &CliConfig,
    sbom: &Path,
) -> Result<TrainOutcome, CliError> {
    let labels = has_any_cve_labels(enriched, graph);
    let split = node_split(graph.node_count(NodeType::Component), config.seed);
    train_node_classifier(graph, &labels, &config.hgat, &split)
        .map_err(|e: HgatError| CliError::stage("train-node", sbom, &e.to_string()))
}

fn cmd_train_node(sbom: &Path, config: &CliConfig) -> Result<(), CliError> {
    let enriched = load_enriched(sbom, config)?;
    let graph = build_graph(&enriched, default_reference_date(&enriched));
    let outcome = train_node(&enriched, &graph, config, sbom)?;
    let mut model_json = Vec::new();
    save_model(&outcome.model, &mut model_json)
        .map_err(|e| CliError::stage("train-node", sbom, &e.to_string()))?;
    write_json(
        &config.out.join("node_model.json"),
        std::str::from_utf8(&model_json).expect("model JSON is utf-8"),
    )?;
    let metrics =
        serde_json::to_string_pretty(&outcome.metrics).expect("metrics serialize");
    write_json(&config.out.join("node_metrics.json"), &metrics)?;
    println!("{metrics}");
    Ok(())
}

fn load_seeds(path: &Path) -> Result<Vec<crate::cascade::ChainSeed>, CliError> {
    let mut file = fs::File::open(path).map_err(|e| CliError::input(path, &e.to_string()))?;
    load_chain_seeds(&mut file).map_err(|e: CascadeError| CliError::input(path, &e.to_string()))
}

#[derive(Serialize)]
struct LinkArtifacts {
    report: crate::cascade::RocReport,
    positives: usize,
    negatives: usize,
}

fn train_link(
    enriched: &EnrichedSbom,
    seeds_path: &Path,
    config: &CliConfig,
) -> Result<(MlpModel, LinkArtifacts), CliError> {
    let seeds = load_seeds(seeds_path)?;
    let positives = expand_positive_pairs(&seeds);
    let universe: Vec<String> = enriched.cves.keys().cloned().collect();
    let negatives =
        sample_negative_pairs(&universe, &positives, config.negative_ratio, config.seed)
            .map_err(|e| CliError::stage("train-link", seeds_path, &e.to_string()))?;

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut push_pair = |pair: &CvePair, label: f64| {
        let (Some(a), Some(b)) = (enriched.cves.get(&pair.0), enriched.cves.get(&pair.1)) else {
            warn(seeds_path, &format!("pair ({}, {}) has no advisory records, skipped", pair.0, pair.1));
            return;
        };
        rows.extend(crate::cascade::extract_pair_features(a, b));
        labels.push(label);
    };
    for p in &positives {
        push_pair(p, 1.0);
    }
    for p in &negatives {
        push_pair(p, 0.0);
    }
    let features = crate::nn::Tensor::new(
        vec![labels.len(), crate::cascade::PAIR_FEATURE_DIM],
        rows,
    )
    .expect("pair features are finite");
    let (model, report) = train_link_predictor(&features, &labels, &config.link)
        .map_err(|e| CliError::stage("train-link", seeds_path, &e.to_string()))?;
    let artifacts = LinkArtifacts {
        report,
        positives: positives.len(),
        negatives: negatives.len(),
    };
    Ok((model, artifacts))
}

fn cmd_train_link(sbom: &Path, seeds: &Path, config: &CliConfig) -> Result<MlpModel, CliError> {
    let enriched = load_enriched(sbom, config)?;
    let (model, artifacts) = train_link(&enriched, seeds, config)?;
    let mut model_json = Vec::new();
    save_link_model(&model, &mut model_json)
        .map_err(|e| CliError::stage("train-link", seeds, &e.to_string()))?;
    write_json(
        &config.out.join("link_model.json"),
        std::str::from_utf8(&model_json).expect("model JSON is utf-8"),
    )?;
    let report = serde_json::to_string_pretty(&artifacts).expect("report serializes");
    write_json(&config.out.join("link_report.json"), &report)?;
    println!("{report}");
    Ok(model)
}

fn render_chain_table(chains: &[ChainCandidate]) -> String {
    let mut out = String::from("rank  aggregate  chain\n");
    for (i, c) in chains.iter().enumerate() {
        out.push_str(&format!(
            "{:<5} {:<10.4} {}\n",
            i + 1,
            c.aggregate_score,
            c.cves.join(" -> ")
        ));
    }
    out
}

fn rank_chains(
    enriched: &EnrichedSbom,
    model: &MlpModel,
    config: &CliConfig,
) -> Result<Vec<ChainCandidate>, CliError> {
    let cve_set: Vec<String> = enriched.cves.keys().cloned().collect();
    compose_chains(
        &cve_set,
        model,
        &enriched.cves,
        config.threshold,
        config.max_length,
        config.beam,
    )
    .map_err(|e| CliError { exit_code: EXIT_INPUT, message: format!("rank-chains: {e}") })
}

fn cmd_rank_chains(sbom: &Path, seeds: &Path, config: &CliConfig) -> Result<(), CliError> {
    let enriched = load_enriched(sbom, config)?;
    let (model, _) = train_link(&enriched, seeds, config)?;
    let chains = rank_chains(&enriched, &model, config)?;
    write_json(
        &config.out.join("chains.json"),
        &serde_json::to_string_pretty(&chains).expect("chains serialize"),
    )?;
    let table = render_chain_table(&chains);
    write_json(&config.out.join("chains.txt"), &table)?;
    print!("{table}");
    Ok(())
}

fn parse_edge_type(name: &str) -> Result<EdgeType, CliError> {
    match name.to_ascii_lowercase().as_str() {
        "depends_on" | "depends-on" => Ok(EdgeType::DependsOn),
        "has_vulnerability" | "has-vulnerability" => Ok(EdgeType::HasVulnerability),
        "has_cwe" | "has-cwe" => Ok(EdgeType::HasCwe),
        other => Err(CliError {
            exit_code: EXIT_USAGE,
            message: format!("unknown edge type {other}"),
        }),
    }
}

fn cmd_ablate(sbom: &Path, config: &CliConfig) -> Result<(), CliError> {
    let edge = parse_edge_type(config.ablate_edge.as_deref().unwrap_or("depends_on"))?;
    let enriched = load_enriched(sbom, config)?;
    let graph = build_graph(&enriched, default_reference_date(&enriched));
    let labels = has_any_cve_labels(&enriched, &graph);
    let report = run_ablation(&graph, &labels, &config.hgat, edge)
        .map_err(|e: EvalError| CliError::stage("ablate", sbom, &e.to_string()))?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_json(&config.out.join("ablation.json"), &json)?;
    println!("{json}");
    Ok(())
}

fn cmd_pipeline(sbom: &Path, seeds: Option<&Path>, config: &CliConfig) -> Result<(), CliError> {
    let timer = RunTimer::start();
    let config_echo = serde_json::to_value(config).expect("config serializes");
    let mut report = ExperimentReport::new(config_echo);

    let raw = fs::read(sbom).map_err(|e| CliError::input(sbom, &e.to_string()))?;
    report.fingerprint("sbom", &raw);

    let enriched = load_enriched(sbom, config)?;
    let enriched_json = serde_json::to_string_pretty(&enriched).expect("enriched serializes");
    report.fingerprint("enriched.json", enriched_json.as_bytes());

    let graph = build_graph(&enriched, default_reference_date(&enriched));
    let graph_json = graph::to_json(&graph);
    report.fingerprint("graph.hgraph.json", graph_json.as_bytes());
    report
        .metrics
        .insert("graph_nodes".into(), graph.total_node_count() as f64);
    report
        .metrics
        .insert("graph_edges".into(), graph.total_edge_count() as f64);

    let mut curves: Vec<(String, Vec<f64>)> = Vec::new();
    let mut node_model_json: Option<Vec<u8>> = None;
    match train_node(&enriched, &graph, config, sbom) {
        Ok(outcome) => {
            report.metrics.insert("node_accuracy".into(), outcome.metrics.accuracy);
            report.metrics.insert("node_f1".into(), outcome.metrics.f1);
            curves.push(("node_loss".into(), outcome.curve.clone()));
            let mut buf = Vec::new();
            save_model(&outcome.model, &mut buf)
                .map_err(|e| CliError::stage("train-node", sbom, &e.to_string()))?;
            report.fingerprint("node_model.json", &buf);
            node_model_json = Some(buf);

            if let Some(edge_name) = &config.ablate_edge {
                let edge = parse_edge_type(edge_name)?;
                let labels = has_any_cve_labels(&enriched, &graph);
                let ablation = run_ablation(&graph, &labels, &config.hgat, edge)
                    .map_err(|e| CliError::stage("ablate", sbom, &e.to_string()))?;
                report.metrics.insert(
                    "ablation_delta_positive_predictions".into(),
                    ablation.delta_positive_predictions as f64,
                );
                report.metrics.insert("ablation_delta_f1".into(), ablation.delta_f1);
            }
        }
        Err(e) => {
            warn(sbom, &format!("node training skipped: {}", e.message));
            report.notes.push(format!("node training skipped: {}", e.message));
        }
    }

    let mut link_model_json: Option<Vec<u8>> = None;
    let mut chains_json: Option<String> = None;
    let mut chains_text: Option<String> = None;
    if let Some(seeds_path) = seeds {
        let seeds_raw =
            fs::read(seeds_path).map_err(|e| CliError::input(seeds_path, &e.to_string()))?;
        report.fingerprint("chain_seeds", &seeds_raw);
        let (model, artifacts) = train_link(&enriched, seeds_path, config)?;
        report.metrics.insert("link_holdout_auc".into(), artifacts.report.holdout_auc);
        report
            .metrics
            .insert("link_positive_pairs".into(), artifacts.positives as f64);
        report
            .metrics
            .insert("link_negative_pairs".into(), artifacts.negatives as f64);
        let mut buf = Vec::new();
        save_link_model(&model, &mut buf)
            .map_err(|e| CliError::stage("train-link", seeds_path, &e.to_string()))?;
        report.fingerprint("link_model.json", &buf);
        link_model_json = Some(buf);

        let chains = rank_chains(&enriched, &model, config)?;
        report.metrics.insert("chains_ranked".into(), chains.len() as f64);
        let json = serde_json::to_string_pretty(&chains).expect("chains serialize");
        report.fingerprint("chains.json", json.as_bytes());
        chains_text = Some(render_chain_table(&chains));
        chains_json = Some(json);
    }

    report.wall_clock_secs = timer.elapsed_secs();
    let dir = write_run(&config.out, &report, &curves)
        .map_err(|e| CliError::input(&config.out, &e.to_string()))?;

    let write_artifact = |name: &str, bytes: &[u8]| -> Result<(), CliError> {
        fs::write(dir.join(name), bytes).map_err(|e| CliError::input(&dir, &e.to_string()))
    };
    write_artifact("enriched.json", enriched_json.as_bytes())?;
    write_artifact("graph.hgraph.json", graph_json.as_bytes())?;
    if let Some(buf) = node_model_json {
        write_artifact("node_model.json", &buf)?;
    }
    if let Some(buf) = link_model_json {
        write_artifact("link_model.json", &buf)?;
    }
    if let Some(json) = chains_json {
        write_artifact("chains.json", json.as_bytes())?;
    }
    if let Some(text) = &chains_text {
        write_artifact("chains.txt", text.as_bytes())?;
    }

    eprintln!(
        "INFO {}: pipeline finished in {:.2}s, artifacts in {}",
        sbom.display(),
        report.wall_clock_secs,
        dir.display()
    );
    if let Some(text) = chains_text {
        print!("{text}");
    }
    Ok(())
}

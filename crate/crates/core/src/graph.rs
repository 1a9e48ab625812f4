//! Typed heterogeneous graph over components, CVEs, and CWEs, with per-type
//! feature matrices and a versioned JSON serialization (`*.hgraph.json`).

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enrich::{EnrichedSbom, SeverityBin};
use crate::nn::Tensor;

pub const GRAPH_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed graph file: {0}")]
    MalformedFile(String),
    #[error("graph invariant violated: {0}")]
    InvariantViolated(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeType {
    Component,
    Cve,
    Cwe,
}

impl NodeType {
    pub const ALL: [NodeType; 3] = [NodeType::Component, NodeType::Cve, NodeType::Cwe];

    pub fn index(self) -> usize {
        match self {
            NodeType::Component => 0,
            NodeType::Cve => 1,
            NodeType::Cwe => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeType {
    DependsOn,
    HasVulnerability,
    HasCwe,
    RevDependsOn,
    RevHasVulnerability,
    RevHasCwe,
}

impl EdgeType {
    pub const ALL: [EdgeType; 6] = [
        EdgeType::DependsOn,
        EdgeType::HasVulnerability,
        EdgeType::HasCwe,
        EdgeType::RevDependsOn,
        EdgeType::RevHasVulnerability,
        EdgeType::RevHasCwe,
    ];

    pub const FORWARD: [EdgeType; 3] = [
        EdgeType::DependsOn,
        EdgeType::HasVulnerability,
        EdgeType::HasCwe,
    ];

    pub fn index(self) -> usize {
        match self {
            EdgeType::DependsOn => 0,
            EdgeType::HasVulnerability => 1,
            EdgeType::HasCwe => 2,
            EdgeType::RevDependsOn => 3,
            EdgeType::RevHasVulnerability => 4,
            EdgeType::RevHasCwe => 5,
        }
    }

    pub fn reverse(self) -> EdgeType {
        match self {
            EdgeType::DependsOn => EdgeType::RevDependsOn,
            EdgeType::HasVulnerability => EdgeType::RevHasVulnerability,
            EdgeType::HasCwe => EdgeType::RevHasCwe,
            EdgeType::RevDependsOn => EdgeType::DependsOn,
            EdgeType::RevHasVulnerability => EdgeType::HasVulnerability,
            EdgeType::RevHasCwe => EdgeType::HasCwe,
        }
    }

    /// (source node type, destination node type)
    pub fn endpoints(self) -> (NodeType, NodeType) {
        match self {
            EdgeType::DependsOn | EdgeType::RevDependsOn => {
                (NodeType::Component, NodeType::Component)
            }
            EdgeType::HasVulnerability => (NodeType::Component, NodeType::Cve),
            EdgeType::RevHasVulnerability => (NodeType::Cve, NodeType::Component),
            EdgeType::HasCwe => (NodeType::Cve, NodeType::Cwe),
            EdgeType::RevHasCwe => (NodeType::Cwe, NodeType::Cve),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// log1p of a count, scaled by the column's log1p max
    Log1pMax,
    /// raw score divided by 10
    DivideBy10,
    /// already in [0,1]
    Identity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub version: u32,
    pub per_type: BTreeMap<NodeType, Vec<FeatureSpec>>,
}

fn spec(name: &str, normalization: Normalization) -> FeatureSpec {
    FeatureSpec {
        name: name.to_string(),
        normalization,
    }
}

pub fn default_feature_schema() -> FeatureSchema {
    use Normalization::*;
    let mut per_type = BTreeMap::new();
    per_type.insert(
        NodeType::Component,
        vec![
            spec("vuln_count", Log1pMax),
            spec("cvss_max", DivideBy10),
            spec("cvss_mean", DivideBy10),
            spec("depends_on_out_degree", Log1pMax),
            spec("depends_on_in_degree", Log1pMax),
            spec("total_degree", Log1pMax),
            spec("has_version", Identity),
        ],
    );
    let mut cve = Vec::new();
    for bin in ["none", "low", "medium", "high", "critical", "unknown"] {
        cve.push(spec(&format!("severity_{bin}"), Identity));
    }
    cve.push(spec("recency", Identity));
    cve.push(spec("exploited", Identity));
    per_type.insert(NodeType::Cve, cve);
    per_type.insert(NodeType::Cwe, vec![spec("normalized_degree", Identity)]);
    FeatureSchema {
        version: 1,
        per_type,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeteroGraph {
    node_ids: [Vec<String>; 3],
    edges: [Vec<(usize, usize)>; 6],
    features: [Tensor; 3],
    pub feature_schema: FeatureSchema,
}

impl HeteroGraph {
    pub fn nodes(&self, t: NodeType) -> &[String] {
        &self.node_ids[t.index()]
    }

    pub fn node_count(&self, t: NodeType) -> usize {
        self.node_ids[t.index()].len()
    }

    pub fn total_node_count(&self) -> usize {
        self.node_ids.iter().map(Vec::len).sum()
    }

    pub fn edges(&self, t: EdgeType) -> &[(usize, usize)] {
        &self.edges[t.index()]
    }

    pub fn total_edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn features(&self, t: NodeType) -> &Tensor {
        &self.features[t.index()]
    }

    pub fn set_features(&mut self, t: NodeType, features: Tensor) -> Result<(), GraphError> {
        if features.rows() != self.node_count(t) {
            return Err(GraphError::InvariantViolated(format!(
                "{:?} features have {} rows for {} nodes",
                t,
                features.rows(),
                self.node_count(t)
            )));
        }
        self.features[t.index()] = features;
        Ok(())
    }

    pub fn node_index(&self, t: NodeType, id: &str) -> Option<usize> {
        self.node_ids[t.index()].binary_search_by(|x| x.as_str().cmp(id)).ok()
    }

    /// Copy with the named edge type and its reverse emptied; nodes and
    /// features retained.
    pub fn ablate_edges(&self, t: EdgeType) -> HeteroGraph {
        let mut out = self.clone();
        out.edges[t.index()].clear();
        out.edges[t.reverse().index()].clear();
        out
    }
}

/// Build the typed graph from an enriched SBOM: structure, then features.
/// Node order is sorted by id, so construction is permutation-invariant.
pub fn build_graph(enriched: &EnrichedSbom, reference_date: NaiveDate) -> HeteroGraph {
    let mut components: Vec<String> = enriched
        .doc
        .components
        .iter()
        .map(|c| c.component_id.clone())
        .collect();
    components.sort();
    components.dedup();
    let mut cves: Vec<String> = enriched.cves.keys().cloned().collect();
    cves.sort();
    let mut cwes: Vec<String> = enriched.cwes.keys().cloned().collect();
    cwes.sort();

    let comp_idx: BTreeMap<&str, usize> = components
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let cve_idx: BTreeMap<&str, usize> = cves
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let cwe_idx: BTreeMap<&str, usize> = cwes
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();

    let mut depends_on: Vec<(usize, usize)> = enriched
        .doc
        .dependencies
        .iter()
        .filter_map(|e| Some((*comp_idx.get(e.from_id.as_str())?, *comp_idx.get(e.to_id.as_str())?)))
        .collect();
    depends_on.sort();
    depends_on.dedup();

    let mut has_vuln: Vec<(usize, usize)> = Vec::new();
    for (comp, cve_list) in &enriched.findings {
        let Some(&ci) = comp_idx.get(comp.as_str()) else {
            continue;
        };
        for cve in cve_list {
            if let Some(&vi) = cve_idx.get(cve.as_str()) {
                has_vuln.push((ci, vi));
            }
        }
    }
    has_vuln.sort();
    has_vuln.dedup();

    let mut has_cwe: Vec<(usize, usize)> = Vec::new();
    for rec in enriched.cves.values() {
        let Some(&vi) = cve_idx.get(rec.cve_id.as_str()) else {
            continue;
        };
        for cwe in &rec.cwe_ids {
            if let Some(&wi) = cwe_idx.get(cwe.as_str()) {
                has_cwe.push((vi, wi));
            }
        }
    }
    has_cwe.sort();
    has_cwe.dedup();

    let rev = |edges: &[(usize, usize)]| -> Vec<(usize, usize)> {
        let mut r: Vec<(usize, usize)> = edges.iter().map(|&(s, d)| (d, s)).collect();
        r.sort();
        r
    };

    let edges = [
        depends_on.clone(),
        has_vuln.clone(),
        has_cwe.clone(),
        rev(&depends_on),
        rev(&has_vuln),
        rev(&has_cwe),
    ];

    let schema = default_feature_schema();
    let mut graph = HeteroGraph {
        node_ids: [components, cves, cwes],
        edges,
        features: [Tensor::zeros(0, 0), Tensor::zeros(0, 0), Tensor::zeros(0, 0)],
        feature_schema: schema,
    };
    let comp_feat = component_features(enriched, &graph);
    let cve_feat = cve_features(enriched, &graph, reference_date);
    let cwe_feat = cwe_features(&graph);
    graph.features = [comp_feat, cve_feat, cwe_feat];
    graph
}

/// Latest published date across CVEs; a deterministic recency anchor.
pub fn default_reference_date(enriched: &EnrichedSbom) -> NaiveDate {
    enriched
        .cves
        .values()
        .map(|c| c.published)
        .max()
        .unwrap_or_else(|| NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid date"))
}

fn log1p_max_scale(counts: &[f64]) -> Vec<f64> {
    let max = counts.iter().cloned().fold(0.0, f64::max);
    let denom = (1.0 + max).ln().max(1.0e-12);
    if max == 0.0 {
        return vec![0.0; counts.len()];
    }
    counts.iter().map(|&c| (1.0 + c).ln() / denom).collect()
}

/// Per component: [vuln_count, cvss_max, cvss_mean, out_deg(DEPENDS_ON),
/// in_deg(DEPENDS_ON), total_degree, has_version]. Counts are log1p-scaled to
/// the column max; scores divided by 10.
pub fn component_features(enriched: &EnrichedSbom, graph: &HeteroGraph) -> Tensor {
    let n = graph.node_count(NodeType::Component);
    let mut vuln_count = vec![0.0; n];
    let mut cvss_max = vec![0.0; n];
    let mut cvss_mean = vec![0.0; n];
    let mut out_deg = vec![0.0; n];
    let mut in_deg = vec![0.0; n];
    let mut has_version = vec![0.0; n];

    for &(s, d) in graph.edges(EdgeType::DependsOn) {
        out_deg[s] += 1.0;
        in_deg[d] += 1.0;
    }
    for (comp_id, cve_list) in &enriched.findings {
        let Some(i) = graph.node_index(NodeType::Component, comp_id) else {
            continue;
        };
        vuln_count[i] = cve_list.len() as f64;
        let scores: Vec<f64> = cve_list
            .iter()
            .filter_map(|cve| enriched.cves.get(cve).and_then(|r| r.cvss_base))
            .collect();
        if !scores.is_empty() {
            cvss_max[i] = scores.iter().cloned().fold(0.0, f64::max);
            cvss_mean[i] = scores.iter().sum::<f64>() / scores.len() as f64;
        }
    }
    for c in &enriched.doc.components {
        if let Some(i) = graph.node_index(NodeType::Component, &c.component_id) {
            if !c.version.is_empty() {
                has_version[i] = 1.0;
            }
        }
    }
    let total_deg: Vec<f64> = (0..n)
        .map(|i| out_deg[i] + in_deg[i] + vuln_count[i])
        .collect();

    let vc = log1p_max_scale(&vuln_count);
    let od = log1p_max_scale(&out_deg);
    let id_ = log1p_max_scale(&in_deg);
    let td = log1p_max_scale(&total_deg);

    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        rows.push(vec![
            vc[i],
            cvss_max[i] / 10.0,
            cvss_mean[i] / 10.0,
            od[i],
            id_[i],
            td[i],
            has_version[i],
        ]);
    }
    matrix(n, 7, rows)
}

/// Per CVE: one-hot severity bin (6) ++ [recency = exp(−age_days/365),
/// exploited flag].
pub fn cve_features(
    enriched: &EnrichedSbom,
    graph: &HeteroGraph,
    reference_date: NaiveDate,
) -> Tensor {
    let ids = graph.nodes(NodeType::Cve);
    let mut rows = Vec::with_capacity(ids.len());
    for id in ids {
        let mut row = vec![0.0; SeverityBin::CARDINALITY + 2];
        if let Some(rec) = enriched.cves.get(id) {
            row[rec.severity_bin.one_hot_index()] = 1.0;
            let age_days = (reference_date - rec.published).num_days().max(0) as f64;
            row[SeverityBin::CARDINALITY] = (-age_days / 365.0).exp();
            row[SeverityBin::CARDINALITY + 1] = if rec.exploited_signal { 1.0 } else { 0.0 };
        } else {
            row[SeverityBin::Unknown.one_hot_index()] = 1.0;
        }
        rows.push(row);
    }
    matrix(ids.len(), SeverityBin::CARDINALITY + 2, rows)
}

/// Per CWE: HAS_CWE degree over the max CWE degree in the graph.
pub fn cwe_features(graph: &HeteroGraph) -> Tensor {
    let n = graph.node_count(NodeType::Cwe);
    let mut degree = vec![0.0; n];
    for &(_, d) in graph.edges(EdgeType::HasCwe) {
        degree[d] += 1.0;
    }
    let max = degree.iter().cloned().fold(1.0, f64::max);
    let rows: Vec<Vec<f64>> = degree.iter().map(|&d| vec![d / max]).collect();
    matrix(n, 1, rows)
}

fn matrix(n: usize, d: usize, rows: Vec<Vec<f64>>) -> Tensor {
    let values: Vec<f64> = rows.into_iter().flatten().collect();
    Tensor::new(vec![n, d], values).expect("feature rows are rectangular and finite")
}

// ---- serialization ----

#[derive(Serialize, Deserialize)]
struct GraphFile {
    schema_version: u32,
    nodes: BTreeMap<NodeType, Vec<String>>,
    edges: BTreeMap<EdgeType, Vec<(usize, usize)>>,
    features: BTreeMap<NodeType, Tensor>,
    feature_schema: FeatureSchema,
}

pub fn to_json(graph: &HeteroGraph) -> String {
    let file = GraphFile {
        schema_version: GRAPH_SCHEMA_VERSION,
        nodes: NodeType::ALL
            .iter()
            .map(|&t| (t, graph.nodes(t).to_vec()))
            .collect(),
        edges: EdgeType::ALL
            .iter()
            .map(|&t| (t, graph.edges(t).to_vec()))
            .collect(),
        features: NodeType::ALL
            .iter()
            .map(|&t| (t, graph.features(t).clone()))
            .collect(),
        feature_schema: graph.feature_schema.clone(),
    };
    serde_json::to_string_pretty(&file).expect("graph serializes")
}

pub fn from_json(json: &str) -> Result<HeteroGraph, GraphError> {
    let file: GraphFile =
        serde_json::from_str(json).map_err(|e| GraphError::MalformedFile(e.to_string()))?;
    if file.schema_version != GRAPH_SCHEMA_VERSION {
        return Err(GraphError::MalformedFile(format!(
            "unsupported graph schema version {}",
            file.schema_version
        )));
    }
    let mut node_ids: [Vec<String>; 3] = Default::default();
    for t in NodeType::ALL {
        node_ids[t.index()] = file.nodes.get(&t).cloned().unwrap_or_default();
    }
    let mut edges: [Vec<(usize, usize)>; 6] = Default::default();
    for t in EdgeType::ALL {
        let list = file.edges.get(&t).cloned().unwrap_or_default();
        let (st, dt) = t.endpoints();
        for &(s, d) in &list {
            if s >= node_ids[st.index()].len() || d >= node_ids[dt.index()].len() {
                return Err(GraphError::InvariantViolated(format!(
                    "edge ({s},{d}) of type {t:?} out of range"
                )));
            }
        }
        edges[t.index()] = list;
    }
    let mut features: [Tensor; 3] =
        [Tensor::zeros(0, 0), Tensor::zeros(0, 0), Tensor::zeros(0, 0)];
    for t in NodeType::ALL {
        let f = file
            .features
            .get(&t)
            .cloned()
            .unwrap_or_else(|| Tensor::zeros(node_ids[t.index()].len(), 0));
        if f.rows() != node_ids[t.index()].len() {
            return Err(GraphError::InvariantViolated(format!(
                "{t:?} features row count {} != node count {}",
                f.rows(),
                node_ids[t.index()].len()
            )));
        }
        features[t.index()] = f;
    }
    Ok(HeteroGraph {
        node_ids,
        edges,
        features,
        feature_schema: file.feature_schema,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enrich::{bin_severity, CveRecord, CweRecord};
    use crate::sbom::{ComponentKind, ComponentRecord, DependencyEdge, SbomDocument};

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn cve(id: &str, score: Option<f64>, cwes: &[&str], published: NaiveDate) -> CveRecord {
        CveRecord {
            cve_id: id.to_string(),
            cvss_base: score,
            severity_bin: bin_severity(score).unwrap(),
            published,
            modified: None,
            cwe_ids: cwes.iter().map(|s| s.to_string()).collect(),
            exploited_signal: false,
            summary: String::new(),
        }
    }

    fn empty_enriched() -> EnrichedSbom {
        EnrichedSbom {
            doc: SbomDocument {
                components: vec![],
                dependencies: vec![],
                spec_version: "1.5".into(),
                source_path: "mem".into(),
            },
            findings: BTreeMap::new(),
            cves: BTreeMap::new(),
            cwes: BTreeMap::new(),
        }
    }

    fn component(id: &str, version: &str) -> ComponentRecord {
        ComponentRecord {
            component_id: id.to_string(),
            name: id.to_string(),
            version: version.to_string(),
            purl: Some(format!("pkg:pypi/{id}@{version}")),
            component_kind: ComponentKind::Library,
        }
    }

    /// 3 components a→b, b→c; a has CVE-1 (9.8, CWE-502) and CVE-2 (5.0,
    /// CWE-502); b has CVE-2.
    fn small_enriched() -> EnrichedSbom {
        let mut e = empty_enriched();
        e.doc.components = vec![component("a", "1"), component("b", "2"), component("c", "")];
        e.doc.dependencies = vec![
            DependencyEdge { from_id: "a".into(), to_id: "b".into() },
            DependencyEdge { from_id: "b".into(), to_id: "c".into() },
        ];
        e.findings.insert("a".into(), vec!["CVE-2021-0001".into(), "CVE-2021-0002".into()]);
        e.findings.insert("b".into(), vec!["CVE-2021-0002".into()]);
        e.findings.insert("c".into(), vec![]);
        e.cves.insert(
            "CVE-2021-0001".into(),
            cve("CVE-2021-0001", Some(9.8), &["CWE-502"], date(2021, 12, 10)),
        );
        e.cves.insert(
            "CVE-2021-0002".into(),
            cve("CVE-2021-0002", Some(5.0), &["CWE-502"], date(2021, 6, 1)),
        );
        e.cwes.insert(
            "CWE-502".into(),
            CweRecord { cwe_id: "CWE-502".into(), name: "Deserialization".into() },
        );
        e
    }

    #[test]
    fn empty_enriched_gives_empty_graph() {
        let g = build_graph(&empty_enriched(), date(2022, 1, 1));
        assert_eq!(g.total_node_count(), 0);
        assert_eq!(g.total_edge_count(), 0);
    }

    #[test]
    fn single_finding_produces_forward_and_reverse_edges() {
        let mut e = empty_enriched();
        e.doc.components = vec![component("a", "1")];
        e.findings.insert("a".into(), vec!["CVE-2021-0001".into()]);
        e.cves.insert(
            "CVE-2021-0001".into(),
            cve("CVE-2021-0001", Some(9.8), &["CWE-502"], date(2021, 12, 10)),
        );
        e.cwes.insert(
            "CWE-502".into(),
            CweRecord { cwe_id: "CWE-502".into(), name: String::new() },
        );
        let g = build_graph(&e, date(2022, 1, 1));
        assert_eq!(g.total_node_count(), 3);
        assert_eq!(g.edges(EdgeType::HasVulnerability).len(), 1);
        assert_eq!(g.edges(EdgeType::HasCwe).len(), 1);
        assert_eq!(g.edges(EdgeType::RevHasVulnerability).len(), 1);
        assert_eq!(g.edges(EdgeType::RevHasCwe).len(), 1);
        assert_eq!(g.edges(EdgeType::DependsOn).len(), 0);
    }

    // hand enumeration: 3 components + 2 CVEs + 1 CWE = 6 nodes;
    // 2 DEPENDS_ON + 3 HAS_VULNERABILITY + 2 HAS_CWE forward edges, doubled
    // by reverses = 14 edges.
    #[test]
    fn small_fixture_counts_pinned() {
        let g = build_graph(&small_enriched(), date(2022, 1, 1));
        assert_eq!(g.total_node_count(), 6);
        assert_eq!(g.edges(EdgeType::DependsOn).len(), 2);
        assert_eq!(g.edges(EdgeType::HasVulnerability).len(), 3);
        assert_eq!(g.edges(EdgeType::HasCwe).len(), 2);
        assert_eq!(g.total_edge_count(), 14);
    }

    #[test]
    fn reverse_edges_pair_bijectively() {
        let g = build_graph(&small_enriched(), date(2022, 1, 1));
        for t in EdgeType::FORWARD {
            let mut flipped: Vec<(usize, usize)> =
                g.edges(t).iter().map(|&(s, d)| (d, s)).collect();
            flipped.sort();
            assert_eq!(flipped, g.edges(t.reverse()));
        }
    }

    #[test]
    fn component_feature_arithmetic() {
        let e = small_enriched();
        let g = build_graph(&e, date(2022, 1, 1));
        let f = g.features(NodeType::Component);
        let a = g.node_index(NodeType::Component, "a").unwrap();
        // a holds CVEs scored {9.8, 5.0}
        assert!((f.get(a, 1) - 0.98).abs() < 1e-12);
        assert!((f.get(a, 2) - 0.74).abs() < 1e-12);
        assert_eq!(f.get(a, 6), 1.0);
        let c = g.node_index(NodeType::Component, "c").unwrap();
        assert_eq!(f.get(c, 0), 0.0); // no CVEs
        assert_eq!(f.get(c, 6), 0.0); // empty version
    }

    #[test]
    fn features_stay_in_unit_interval() {
        let g = build_graph(&small_enriched(), date(2022, 1, 1));
        for t in NodeType::ALL {
            for &v in g.features(t).values() {
                assert!((0.0..=1.0).contains(&v) && v.is_finite());
            }
        }
    }

    #[test]
    fn cve_recency_formula() {
        let e = small_enriched();
        let g = build_graph(&e, date(2021, 12, 10));
        let f = g.features(NodeType::Cve);
        let i = g.node_index(NodeType::Cve, "CVE-2021-0001").unwrap();
        // published on the reference date
        assert_eq!(f.get(i, 6), 1.0);
        let j = g.node_index(NodeType::Cve, "CVE-2021-0002").unwrap();
        let age = (date(2021, 12, 10) - date(2021, 6, 1)).num_days() as f64;
        assert!((f.get(j, 6) - (-age / 365.0).exp()).abs() < 1e-12);
    }

    #[test]
    fn cve_one_year_recency_is_e_inverse() {
        let mut e = empty_enriched();
        e.doc.components = vec![component("a", "1")];
        e.findings.insert("a".into(), vec!["CVE-2020-0001".into()]);
        e.cves.insert(
            "CVE-2020-0001".into(),
            cve("CVE-2020-0001", None, &[], date(2020, 1, 1)),
        );
        let g = build_graph(&e, date(2020, 12, 31));
        let f = g.features(NodeType::Cve);
        assert!((f.get(0, 6) - (-1.0f64).exp()).abs() < 1e-3);
        // unknown severity one-hot
        assert_eq!(f.get(0, SeverityBin::Unknown.one_hot_index()), 1.0);
    }

    #[test]
    fn single_cwe_self_normalizes_to_one() {
        let mut e = empty_enriched();
        e.doc.components = vec![component("a", "1")];
        e.findings.insert("a".into(), vec!["CVE-2021-0001".into()]);
        e.cves.insert(
            "CVE-2021-0001".into(),
            cve("CVE-2021-0001", Some(9.8), &["CWE-79"], date(2021, 1, 1)),
        );
        e.cwes.insert(
            "CWE-79".into(),
            CweRecord { cwe_id: "CWE-79".into(), name: String::new() },
        );
        let g = build_graph(&e, date(2022, 1, 1));
        assert_eq!(g.features(NodeType::Cwe).values(), &[1.0]);
    }

    #[test]
    fn shared_cwe_degrees_normalize() {
        let g = build_graph(&small_enriched(), date(2022, 1, 1));
        // CWE-502 has degree 2 and is the only CWE → 1.0
        assert_eq!(g.features(NodeType::Cwe).values(), &[1.0]);
    }

    #[test]
    fn ablation_empties_both_directions_and_keeps_nodes() {
        let g = build_graph(&small_enriched(), date(2022, 1, 1));
        let ab = g.ablate_edges(EdgeType::DependsOn);
        assert!(ab.edges(EdgeType::DependsOn).is_empty());
        assert!(ab.edges(EdgeType::RevDependsOn).is_empty());
        assert_eq!(ab.edges(EdgeType::HasVulnerability), g.edges(EdgeType::HasVulnerability));
        assert_eq!(ab.total_node_count(), g.total_node_count());
        // idempotent
        assert_eq!(ab.ablate_edges(EdgeType::DependsOn), ab);
    }

    #[test]
    fn serialization_roundtrip() {
        let g = build_graph(&small_enriched(), date(2022, 1, 1));
        let json = to_json(&g);
        let back = from_json(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn build_is_permutation_invariant() {
        let e = small_enriched();
        let mut shuffled = e.clone();
        shuffled.doc.components.reverse();
        shuffled.doc.dependencies.reverse();
        let a = build_graph(&e, date(2022, 1, 1));
        let b = build_graph(&shuffled, date(2022, 1, 1));
        assert_eq!(to_json(&a), to_json(&b));
    }
}

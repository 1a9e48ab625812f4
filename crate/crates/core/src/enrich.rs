//! Vulnerability enrichment: attach normalized CVE/CWE records to SBOM
//! components from an OSV-style HTTP source or an offline fixture directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use chrono::NaiveDate;
use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cvss;
use crate::sbom::SbomDocument;

#[derive(Debug, Error)]
pub enum EnrichError {
    #[error("vulnerability source unavailable: {0}")]
    SourceUnavailable(String),
    #[error("malformed advisory: {0}")]
    MalformedAdvisory(String),
    #[error("cvss base score out of range: {0}")]
    OutOfRange(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeverityBin {
    None,
    Low,
    Medium,
    High,
    Critical,
    Unknown,
}

impl SeverityBin {
    /// Index into the one-hot layout used by feature extraction.
    pub fn one_hot_index(self) -> usize {
        match self {
            SeverityBin::None => 0,
            SeverityBin::Low => 1,
            SeverityBin::Medium => 2,
            SeverityBin::High => 3,
            SeverityBin::Critical => 4,
            SeverityBin::Unknown => 5,
        }
    }

    pub const CARDINALITY: usize = 6;
}

/// CVSS v3.1 qualitative rating scale.
pub fn bin_severity(cvss_base: Option<f64>) -> Result<SeverityBin, EnrichError> {
    let Some(v) = cvss_base else {
        return Ok(SeverityBin::Unknown);
    };
    if !(0.0..=10.0).contains(&v) {
        return Err(EnrichError::OutOfRange(v));
    }
    Ok(if v == 0.0 {
        SeverityBin::None
    } else if v < 4.0 {
        SeverityBin::Low
    } else if v < 7.0 {
        SeverityBin::Medium
    } else if v < 9.0 {
        SeverityBin::High
    } else {
        SeverityBin::Critical
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CveRecord {
    pub cve_id: String,
    pub cvss_base: Option<f64>,
    pub severity_bin: SeverityBin,
    pub published: NaiveDate,
    pub modified: Option<NaiveDate>,
    pub cwe_ids: Vec<String>,
    pub exploited_signal: bool,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CweRecord {
    pub cwe_id: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnrichedSbom {
    pub doc: SbomDocument,
    /// component_id → sorted list of cve_ids
    pub findings: BTreeMap<String, Vec<String>>,
    pub cves: BTreeMap<String, CveRecord>,
    pub cwes: BTreeMap<String, CweRecord>,
}

#[derive(Debug, Clone)]
pub enum VulnSource {
    /// Offline directory of per-purl advisory files.
    Fixtures(PathBuf),
    /// OSV-style HTTP query endpoint.
    Http { url: String, cache: Option<CacheConfig> },
}

#[derive(Debug, Clone)]
pub struct CacheConfig {
    pub dir: PathBuf,
    pub max_age_secs: u64,
}

#[derive(Debug, Default)]
pub struct QueryOutcome {
    pub records: Vec<CveRecord>,
    pub warnings: Vec<String>,
}

// unreserved characters per RFC 3986 stay literal, everything else is escaped
const URLENCODE: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

pub fn urlencode_purl(purl: &str) -> String {
    utf8_percent_encode(purl, URLENCODE).to_string()
}

// ---- raw advisory shape (OSV-like) ----

#[derive(Debug, Deserialize, Serialize)]
struct AdvisoryFile {
    vulns: Vec<serde_json::Value>,
}

#[derive(Debug, Deserialize)]
struct RawAdvisory {
    id: Option<String>,
    #[serde(default)]
    aliases: Vec<String>,
    #[serde(default)]
    summary: String,
    published: Option<String>,
    modified: Option<String>,
    #[serde(default)]
    severity: Vec<RawSeverity>,
    #[serde(default)]
    database_specific: RawDatabaseSpecific,
}

#[derive(Debug, Deserialize)]
struct RawSeverity {
    #[serde(rename = "type")]
    kind: Option<String>,
    score: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
struct RawDatabaseSpecific {
    #[serde(default)]
    cwe_ids: Vec<String>,
    #[serde(default)]
    known_exploited: bool,
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

pub fn is_cwe_id(id: &str) -> bool {
    id.strip_prefix("CWE-")
        .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    // advisories carry RFC 3339 timestamps; the calendar date is enough here
    NaiveDate::parse_from_str(s.get(..10)?, "%Y-%m-%d").ok()
}

fn normalize_advisory(value: &serde_json::Value) -> Result<CveRecord, EnrichError> {
    let raw: RawAdvisory = serde_json::from_value(value.clone())
        .map_err(|e| EnrichError::MalformedAdvisory(e.to_string()))?;
    let id = raw
        .id
        .ok_or_else(|| EnrichError::MalformedAdvisory("missing id".into()))?;

    // non-CVE advisories (GHSA, PYSEC, ...) are kept only when they alias a CVE
    let cve_id = if is_cve_id(&id) {
        id
    } else {
        raw.aliases
            .iter()
            .find(|a| is_cve_id(a))
            .cloned()
            .ok_or_else(|| {
                EnrichError::MalformedAdvisory(format!("{id} does not alias a CVE"))
            })?
    };

    let published = raw
        .published
        .as_deref()
        .and_then(parse_date)
        .ok_or_else(|| {
            EnrichError::MalformedAdvisory(format!("{cve_id}: missing or bad published date"))
        })?;
    let modified = raw.modified.as_deref().and_then(parse_date);
    if let Some(m) = modified {
        if published > m {
            return Err(EnrichError::MalformedAdvisory(format!(
                "{cve_id}: published after modified"
            )));
        }
    }

    // highest base score wins when several vectors are present
    let cvss_base = raw
        .severity
        .iter()
        .filter(|s| {
            s.kind
                .as_deref()
                .is_some_and(|k| k.starts_with("CVSS_V3") || k == "CVSS_V3")
        })
        .filter_map(|s| s.score.as_deref().and_then(cvss::base_score))
        .fold(None::<f64>, |acc, v| Some(acc.map_or(v, |a| a.max(v))));

    let mut cwe_ids: Vec<String> = raw
        .database_specific
        .cwe_ids
        .iter()
        .filter(|c| is_cwe_id(c))
        .cloned()
        .collect();
    cwe_ids.sort();
    cwe_ids.dedup();

    Ok(CveRecord {
        severity_bin: bin_severity(cvss_base)?,
        cve_id,
        cvss_base,
        published,
        modified,
        cwe_ids,
        exploited_signal: raw.database_specific.known_exploited,
        summary: raw.summary,
    })
}

fn normalize_vulns(vulns: &[serde_json::Value]) -> QueryOutcome {
    let mut out = QueryOutcome::default();
    for v in vulns {
        match normalize_advisory(v) {
            Ok(rec) => out.records.push(rec),
            Err(e) => out.warnings.push(e.to_string()),
        }
    }
    out.records.sort_by(|a, b| a.cve_id.cmp(&b.cve_id));
    out
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    fetched_at: u64,
    purl: String,
    vulns: Vec<serde_json::Value>,
}

fn cache_path(cfg: &CacheConfig, purl: &str) -> PathBuf {
    let digest = Sha256::digest(purl.as_bytes());
    let mut hex = String::with_capacity(64);
    for b in digest {
        hex.push_str(&format!("{b:02x}"));
    }
    cfg.dir.join(format!("{hex}.json"))
}

fn cache_read(cfg: &CacheConfig, purl: &str) -> Option<Vec<serde_json::Value>> {
    let bytes = fs::read(cache_path(cfg, purl)).ok()?;
    let entry: CacheEntry = serde_json::from_slice(&bytes).ok()?;
    let now = SystemTime::now().duration_since(UNIX_EPOCH).ok()?.as_secs();
    if now.saturating_sub(entry.fetched_at) > cfg.max_age_secs {
        return None;
    }
    Some(entry.vulns)
}

fn cache_write(cfg: &CacheConfig, purl: &str, vulns: &[serde_json::Value]) {
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let entry = CacheEntry {
        fetched_at: now,
        purl: purl.to_string(),
        vulns: vulns.to_vec(),
    };
    if fs::create_dir_all(&cfg.dir).is_ok() {
        if let Ok(json) = serde_json::to_vec(&entry) {
            let _ = fs::write(cache_path(cfg, purl), json);
        }
    }
}

fn query_http(url: &str, purl: &str, version: &str) -> Result<Vec<serde_json::Value>, EnrichError> {
    let body = serde_json::json!({
        "package": { "purl": purl },
        "version": version,
    });
    let resp = ureq::post(url)
        .send_json(body)
        .map_err(|e| EnrichError::SourceUnavailable(e.to_string()))?;
    let value: serde_json::Value = resp
        .into_json()
        .map_err(|e| EnrichError::SourceUnavailable(e.to_string()))?;
    Ok(value
        .get("vulns")
        .and_then(|v| v.as_array())
        .cloned()
        .unwrap_or_default())
}

/// Fetch and normalize the advisories for one (purl, version).
pub fn query_vuln_source(
    purl: &str,
    version: &str,
    source: &VulnSource,
) -> Result<QueryOutcome, EnrichError> {
    match source {
        VulnSource::Fixtures(dir) => {
            let path = dir.join(format!("{}.json", urlencode_purl(purl)));
            let bytes = match fs::read(&path) {
                Ok(b) => b,
                // no fixture file means no findings for this package
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                    return Ok(QueryOutcome::default())
                }
                Err(e) => {
                    return Err(EnrichError::SourceUnavailable(format!(
                        "{}: {e}",
                        path.display()
                    )))
                }
            };
            let file: AdvisoryFile = serde_json::from_slice(&bytes)
                .map_err(|e| EnrichError::MalformedAdvisory(format!("{}: {e}", path.display())))?;
            Ok(normalize_vulns(&file.vulns))
        }
        VulnSource::Http { url, cache } => {
            if let Some(cfg) = cache {
                if let Some(vulns) = cache_read(cfg, purl) {
                    return Ok(normalize_vulns(&vulns));
                }
            }
            let vulns = query_http(url, purl, version)?;
            if let Some(cfg) = cache {
                cache_write(cfg, purl, &vulns);
            }
            Ok(normalize_vulns(&vulns))
        }
    }
}

/// Built-in names for frequent weakness categories; unknown ids fall back to
/// the id text itself.
fn cwe_name(id: &str) -> String {
    match id {
        "CWE-20" => "Improper Input Validation",
        "CWE-22" => "Path Traversal",
        "CWE-78" => "OS Command Injection",
        "CWE-79" => "Cross-site Scripting",
        "CWE-89" => "SQL Injection",
        "CWE-94" => "Code Injection",
        "CWE-119" => "Buffer Overflow",
        "CWE-125" => "Out-of-bounds Read",
        "CWE-200" => "Information Exposure",
        "CWE-287" => "Improper Authentication",
        "CWE-352" => "Cross-Site Request Forgery",
        "CWE-416" => "Use After Free",
        "CWE-502" => "Deserialization of Untrusted Data",
        "CWE-787" => "Out-of-bounds Write",
        "CWE-918" => "Server-Side Request Forgery",
        other => other,
    }
    .to_string()
}

const DEFAULT_FAN_OUT: usize = 8;

#[derive(Debug)]
pub struct EnrichOutcome {
    pub enriched: EnrichedSbom,
    pub warnings: Vec<String>,
}

/// Query the source per component and assemble the enriched document.
///
/// Per-component failures become warnings unless `strict` is set, in which
/// case the first `SourceUnavailable` aborts the run. Queries fan out over a
/// bounded worker pool; results are assembled in component order, so fixture
/// mode is deterministic.
pub fn enrich_sbom(
    doc: &SbomDocument,
    source: &VulnSource,
    strict: bool,
) -> Result<EnrichOutcome, EnrichError> {
    let n = doc.components.len();
    let results: Mutex<Vec<Option<Result<QueryOutcome, EnrichError>>>> =
        Mutex::new((0..n).map(|_| None).collect());
    let next = std::sync::atomic::AtomicUsize::new(0);

    std::thread::scope(|s| {
        for _ in 0..DEFAULT_FAN_OUT.min(n.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let comp = &doc.components[i];
                let res = comp
                    .purl
                    .as_ref()
                    .map(|purl| query_vuln_source(purl, &comp.version, source));
                let outcome = res.unwrap_or_else(|| Ok(QueryOutcome::default()));
                results.lock().unwrap()[i] = Some(outcome);
            });
        }
    });

    let mut findings: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut cves: BTreeMap<String, CveRecord> = BTreeMap::new();
    let mut cwes: BTreeMap<String, CweRecord> = BTreeMap::new();
    let mut warnings = Vec::new();

    let results = results.into_inner().unwrap();
    for (comp, res) in doc.components.iter().zip(results) {
        let entry = findings.entry(comp.component_id.clone()).or_default();
        if comp.purl.is_none() {
            warnings.push(format!(
                "component {} has no purl, not enriched",
                comp.component_id
            ));
            continue;
        }
        match res.expect("worker filled every slot") {
            Ok(outcome) => {
                warnings.extend(outcome.warnings);
                for rec in outcome.records {
                    entry.push(rec.cve_id.clone());
                    match cves.get_mut(&rec.cve_id) {
                        // the same CVE seen via several packages: keep the
                        // highest base score and the union of CWE links
                        Some(existing) => merge_cve(existing, rec),
                        None => {
                            cves.insert(rec.cve_id.clone(), rec);
                        }
                    }
                }
                entry.sort();
                entry.dedup();
            }
            Err(e @ EnrichError::SourceUnavailable(_)) if strict => return Err(e),
            Err(e) => warnings.push(format!("component {}: {e}", comp.component_id)),
        }
    }

    for rec in cves.values() {
        for cwe in &rec.cwe_ids {
            cwes.entry(cwe.clone()).or_insert_with(|| CweRecord {
                cwe_id: cwe.clone(),
                name: cwe_name(cwe),
            });
        }
    }

    Ok(EnrichOutcome {
        enriched: EnrichedSbom {
            doc: doc.clone(),
            findings,
            cves,
            cwes,
        },
        warnings,
    })
}

fn merge_cve(existing: &mut CveRecord, incoming: CveRecord) {
    let best = match (existing.cvss_base, incoming.cvss_base) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    existing.cvss_base = best;
    existing.severity_bin = bin_severity(best).expect("merged score stays in range");
    for cwe in incoming.cwe_ids {
        if !existing.cwe_ids.contains(&cwe) {
            existing.cwe_ids.push(cwe);
        }
    }
    existing.cwe_ids.sort();
    existing.exploited_signal |= incoming.exploited_signal;
    if existing.summary.is_empty() {
        existing.summary = incoming.summary;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbom::{ComponentKind, ComponentRecord};

    fn advisory(id: &str, score: Option<&str>, cwes: &[&str]) -> serde_json::Value {
        let mut v = serde_json::json!({
            "id": id,
            "summary": "test advisory",
            "published": "2021-12-10T00:00:00Z",
            "modified": "2022-01-01T00:00:00Z",
            "database_specific": { "cwe_ids": cwes, "known_exploited": false },
        });
        if let Some(s) = score {
            v["severity"] = serde_json::json!([{"type": "CVSS_V3", "score": s}]);
        }
        v
    }

    #[test]
    fn bin_severity_decision_table() {
        assert_eq!(bin_severity(None).unwrap(), SeverityBin::Unknown);
        assert_eq!(bin_severity(Some(0.0)).unwrap(), SeverityBin::None);
        assert_eq!(bin_severity(Some(0.1)).unwrap(), SeverityBin::Low);
        assert_eq!(bin_severity(Some(3.9)).unwrap(), SeverityBin::Low);
        assert_eq!(bin_severity(Some(4.0)).unwrap(), SeverityBin::Medium);
        assert_eq!(bin_severity(Some(6.9)).unwrap(), SeverityBin::Medium);
        assert_eq!(bin_severity(Some(7.0)).unwrap(), SeverityBin::High);
        assert_eq!(bin_severity(Some(8.9)).unwrap(), SeverityBin::High);
        assert_eq!(bin_severity(Some(9.0)).unwrap(), SeverityBin::Critical);
        assert_eq!(bin_severity(Some(9.8)).unwrap(), SeverityBin::Critical);
        assert_eq!(bin_severity(Some(10.0)).unwrap(), SeverityBin::Critical);
        assert!(bin_severity(Some(-0.1)).is_err());
        assert!(bin_severity(Some(10.1)).is_err());
    }

    #[test]
    fn bin_severity_monotone() {
        let mut last = bin_severity(Some(0.0)).unwrap().one_hot_index();
        let mut x = 0.0;
        while x <= 10.0 {
            let b = bin_severity(Some(x)).unwrap();
            assert!(b != SeverityBin::Unknown);
            let idx = b.one_hot_index();
            assert!(idx >= last);
            last = idx;
            x += 0.05;
        }
    }

    #[test]
    fn missing_fixture_file_means_no_findings() {
        let dir = tempfile::tempdir().unwrap();
        let src = VulnSource::Fixtures(dir.path().to_path_buf());
        let out = query_vuln_source("pkg:pypi/nothing@1.0", "1.0", &src).unwrap();
        assert!(out.records.is_empty());
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn malformed_record_skipped_with_warning() {
        let dir = tempfile::tempdir().unwrap();
        let purl = "pkg:pypi/demo@1.0";
        let file = AdvisoryFile {
            vulns: vec![
                advisory("CVE-2021-0001", Some("7.5"), &[]),
                advisory("CVE-2021-0002", Some("5.0"), &["CWE-79"]),
                serde_json::json!({"summary": "no id"}),
            ],
        };
        let path = dir.path().join(format!("{}.json", urlencode_purl(purl)));
        fs::write(path, serde_json::to_vec(&file).unwrap()).unwrap();
        let src = VulnSource::Fixtures(dir.path().to_path_buf());
        let out = query_vuln_source(purl, "1.0", &src).unwrap();
        assert_eq!(out.records.len(), 2);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn cvss_vector_bins_critical() {
        let dir = tempfile::tempdir().unwrap();
        let purl = "pkg:pypi/log4j-alike@2.0";
        let file = AdvisoryFile {
            vulns: vec![advisory(
                "CVE-2021-44228",
                Some("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"),
                &["CWE-502"],
            )],
        };
        let path = dir.path().join(format!("{}.json", urlencode_purl(purl)));
        fs::write(path, serde_json::to_vec(&file).unwrap()).unwrap();
        let src = VulnSource::Fixtures(dir.path().to_path_buf());
        let out = query_vuln_source(purl, "2.0", &src).unwrap();
        assert_eq!(out.records[0].cvss_base, Some(9.8));
        assert_eq!(out.records[0].severity_bin, SeverityBin::Critical);
    }

    #[test]
    fn ghsa_alias_resolves_to_cve() {
        let mut v = advisory("GHSA-xxxx-yyyy-zzzz", Some("6.1"), &[]);
        v["aliases"] = serde_json::json!(["CVE-2020-1234"]);
        let rec = normalize_advisory(&v).unwrap();
        assert_eq!(rec.cve_id, "CVE-2020-1234");
    }

    #[test]
    fn ghsa_without_cve_alias_rejected() {
        let v = advisory("GHSA-xxxx-yyyy-zzzz", Some("6.1"), &[]);
        assert!(normalize_advisory(&v).is_err());
    }

    #[test]
    fn highest_of_multiple_cvss_vectors_wins() {
        let mut v = advisory("CVE-2022-1111", None, &[]);
        v["severity"] = serde_json::json!([
            {"type": "CVSS_V3", "score": "5.0"},
            {"type": "CVSS_V3", "score": "8.1"},
        ]);
        let rec = normalize_advisory(&v).unwrap();
        assert_eq!(rec.cvss_base, Some(8.1));
        assert_eq!(rec.severity_bin, SeverityBin::High);
    }

    fn component(id: &str, purl: Option<&str>) -> ComponentRecord {
        ComponentRecord {
            component_id: id.to_string(),
            name: id.to_string(),
            version: "1.0".to_string(),
            purl: purl.map(String::from),
            component_kind: ComponentKind::Library,
        }
    }

    #[test]
    fn enrich_empty_doc_gives_empty_maps() {
        let doc = SbomDocument {
            components: vec![],
            dependencies: vec![],
            spec_version: "1.5".into(),
            source_path: "mem".into(),
        };
        let dir = tempfile::tempdir().unwrap();
        let out = enrich_sbom(&doc, &VulnSource::Fixtures(dir.path().into()), false).unwrap();
        assert!(out.enriched.findings.is_empty());
        assert!(out.enriched.cves.is_empty());
        assert!(out.enriched.cwes.is_empty());
    }

    #[test]
    fn shared_cve_across_components_deduplicates() {
        let dir = tempfile::tempdir().unwrap();
        let shared = AdvisoryFile {
            vulns: vec![advisory("CVE-2021-44228", Some("9.8"), &["CWE-502"])],
        };
        for purl in ["pkg:pypi/a@1.0", "pkg:pypi/b@1.0"] {
            let path = dir.path().join(format!("{}.json", urlencode_purl(purl)));
            fs::write(path, serde_json::to_vec(&shared).unwrap()).unwrap();
        }
        let doc = SbomDocument {
            components: vec![
                component("a", Some("pkg:pypi/a@1.0")),
                component("b", Some("pkg:pypi/b@1.0")),
                component("c", None),
            ],
            dependencies: vec![],
            spec_version: "1.5".into(),
            source_path: "mem".into(),
        };
        let out = enrich_sbom(&doc, &VulnSource::Fixtures(dir.path().into()), false).unwrap();
        assert_eq!(out.enriched.cves.len(), 1);
        assert_eq!(out.enriched.findings["a"], vec!["CVE-2021-44228"]);
        assert_eq!(out.enriched.findings["b"], vec!["CVE-2021-44228"]);
        assert!(out.enriched.findings["c"].is_empty());
        assert_eq!(out.enriched.cwes.len(), 1);
        // the purl-less component produced a warning
        assert!(out.warnings.iter().any(|w| w.contains("no purl")));
    }

    #[test]
    fn enrichment_deterministic_in_fixture_mode() {
        let dir = tempfile::tempdir().unwrap();
        let file = AdvisoryFile {
            vulns: vec![
                advisory("CVE-2021-0002", Some("5.0"), &["CWE-79"]),
                advisory("CVE-2021-0001", Some("7.5"), &["CWE-89"]),
            ],
        };
        let purl = "pkg:pypi/a@1.0";
        let path = dir.path().join(format!("{}.json", urlencode_purl(purl)));
        fs::write(path, serde_json::to_vec(&file).unwrap()).unwrap();
        let doc = SbomDocument {
            components: vec![component("a", Some(purl))],
            dependencies: vec![],
            spec_version: "1.5".into(),
            source_path: "mem".into(),
        };
        let src = VulnSource::Fixtures(dir.path().into());
        let one = enrich_sbom(&doc, &src, false).unwrap().enriched;
        let two = enrich_sbom(&doc, &src, false).unwrap().enriched;
        assert_eq!(one, two);
        assert_eq!(one.findings["a"], vec!["CVE-2021-0001", "CVE-2021-0002"]);
    }
}

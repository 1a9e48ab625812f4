//! CycloneDX SBOM ingestion and validation.
//!
//! Only the JSON encoding of CycloneDX (spec versions 1.4–1.6) is supported.
//! Parsing normalizes into [`SbomDocument`]: a flat component inventory plus a
//! deduplicated dependency relation list.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SbomError {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("unsupported CycloneDX spec version {0} (supported: 1.4-1.6)")]
    UnsupportedSpecVersion(String),
    #[error("bomFormat field absent or not \"CycloneDX\"")]
    MissingBomFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Library,
    Application,
    Framework,
    Container,
    Other,
}

impl ComponentKind {
    fn from_cyclonedx(s: Option<&str>) -> Self {
        match s {
            Some("library") => Self::Library,
            Some("application") => Self::Application,
            Some("framework") => Self::Framework,
            Some("container") => Self::Container,
            _ => Self::Other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub component_id: String,
    pub name: String,
    pub version: String,
    pub purl: Option<String>,
    pub component_kind: ComponentKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DependencyEdge {
    pub from_id: String,
    pub to_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SbomDocument {
    pub components: Vec<ComponentRecord>,
    pub dependencies: Vec<DependencyEdge>,
    pub spec_version: String,
    pub source_path: String,
}

/// Parse result: the normalized document plus non-fatal diagnostics.
#[derive(Debug, Clone)]
pub struct ParsedSbom {
    pub doc: SbomDocument,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingSeverity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationFinding {
    pub severity: FindingSeverity,
    pub message: String,
    pub locator: String,
}

pub type ValidationReport = Vec<ValidationFinding>;

#[derive(Deserialize)]
struct RawBom {
    #[serde(rename = "bomFormat")]
    bom_format: Option<String>,
    #[serde(rename = "specVersion")]
    spec_version: Option<String>,
    metadata: Option<RawMetadata>,
    components: Option<Vec<RawComponent>>,
    dependencies: Option<Vec<RawDependency>>,
}

#[derive(Deserialize)]
struct RawMetadata {
    component: Option<RawComponent>,
}

#[derive(Deserialize)]
struct RawComponent {
    #[serde(rename = "bom-ref")]
    bom_ref: Option<String>,
    #[serde(rename = "type")]
    kind: Option<String>,
    name: Option<String>,
    version: Option<String>,
    purl: Option<String>,
}

#[derive(Deserialize)]
struct RawDependency {
    #[serde(rename = "ref")]
    reference: Option<String>,
    #[serde(rename = "dependsOn")]
    depends_on: Option<Vec<String>>,
}

const SUPPORTED_VERSIONS: &[&str] = &["1.4", "1.5", "1.6"];

pub fn parse_sbom(raw: &[u8], source_path: &str) -> Result<ParsedSbom, SbomError> {
    let bom: RawBom = serde_json::from_slice(raw)
        .map_err(|e| SbomError::MalformedDocument(e.to_string()))?;

    match bom.bom_format.as_deref() {
        Some("CycloneDX") => {}
        _ => return Err(SbomError::MissingBomFormat),
    }
    let spec_version = bom.spec_version.unwrap_or_default();
    if !SUPPORTED_VERSIONS.contains(&spec_version.as_str()) {
        return Err(SbomError::UnsupportedSpecVersion(spec_version));
    }

    let mut warnings = Vec::new();
    let mut components = Vec::new();

    // metadata.component (the BOM subject) participates in dependency edges,
    // so it is ingested like any other component.
    let mut raw_components: Vec<RawComponent> = Vec::new();
    if let Some(meta) = bom.metadata {
        if let Some(root) = meta.component {
            raw_components.push(root);
        }
    }
    raw_components.extend(bom.components.unwrap_or_default());

    for (ordinal, rc) in raw_components.into_iter().enumerate() {
        let name = match rc.name {
            Some(n) if !n.is_empty() => n,
            _ => {
                warnings.push(format!("component #{ordinal} has no name, skipped"));
                continue;
            }
        };
        let version = rc.version.unwrap_or_default();
        let component_id = rc
            .bom_ref
            .unwrap_or_else(|| format!("{name}@{version}#{ordinal}"));
        components.push(ComponentRecord {
            component_id,
            name,
            version,
            purl: rc.purl,
            component_kind: ComponentKind::from_cyclonedx(rc.kind.as_deref()),
        });
    }

    let known: HashSet<&str> = components.iter().map(|c| c.component_id.as_str()).collect();
    let mut seen_pairs: HashSet<(String, String)> = HashSet::new();
    let mut dependencies = Vec::new();
    let mut unresolved = 0usize;
    let mut duplicates = 0usize;
    for dep in bom.dependencies.unwrap_or_default() {
        let from = match dep.reference {
            Some(r) => r,
            None => {
                unresolved += 1;
                continue;
            }
        };
        for to in dep.depends_on.unwrap_or_default() {
            if !known.contains(from.as_str()) || !known.contains(to.as_str()) {
                unresolved += 1;
                continue;
            }
            if from == to {
                warnings.push(format!("self-loop dependency on {from} dropped"));
                continue;
            }
            if !seen_pairs.insert((from.clone(), to.clone())) {
                duplicates += 1;
                continue;
            }
            dependencies.push(DependencyEdge {
                from_id: from.clone(),
                to_id: to,
            });
        }
    }
    if unresolved > 0 {
        warnings.push(format!(
            "{unresolved} dependency reference(s) did not resolve to a component and were dropped"
        ));
    }
    if duplicates > 0 {
        warnings.push(format!("{duplicates} duplicate dependency pair(s) collapsed"));
    }

    Ok(ParsedSbom {
        doc: SbomDocument {
            components,
            dependencies,
            spec_version,
            source_path: source_path.to_string(),
        },
        warnings,
    })
}

/// Report-only consistency checks over a parsed document. Findings are sorted
/// by locator, then message.
pub fn validate_sbom(doc: &SbomDocument) -> ValidationReport {
    let mut findings = Vec::new();

    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for c in &doc.components {
        if !seen.insert(c.component_id.as_str()) {
            findings.push(ValidationFinding {
                severity: FindingSeverity::Error,
                message: "duplicate component_id".to_string(),
                locator: c.component_id.clone(),
            });
        }
        if c.version.is_empty() {
            findings.push(ValidationFinding {
                severity: FindingSeverity::Warning,
                message: "empty version".to_string(),
                locator: c.component_id.clone(),
            });
        }
        if c.purl.is_none() {
            findings.push(ValidationFinding {
                severity: FindingSeverity::Warning,
                message: "missing purl".to_string(),
                locator: c.component_id.clone(),
            });
        }
    }

    findings.sort_by(|a, b| a.locator.cmp(&b.locator).then(a.message.cmp(&b.message)));
    findings
}

//! SBOM-driven vulnerability graph analysis.
//!
//! Parses CycloneDX SBOMs, enriches components with OSV-style advisory data,
//! materializes the result as a heterogeneous graph, classifies components
//! with a graph attention network, and ranks candidate multi-step CVE
//! co-exploitation chains with a pairwise link predictor.

pub mod cascade;
pub mod cli;
pub mod cvss;
pub mod graph;
pub mod hgat;
pub mod enrich;
pub mod eval;
pub mod nn;
pub mod sbom;

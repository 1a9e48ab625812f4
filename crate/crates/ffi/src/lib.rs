//! C ABI over the SBOM analysis pipeline.
//!
//! Every function returns a status code (`ScStatus`); results travel through
//! out-parameters. Objects are opaque handles that must be released with the
//! matching `*_free` function. Strings returned through out-parameters are
//! NUL-terminated, owned by the caller, and released with `sc_string_free`.
//! `sc_last_error` returns a thread-local message for the most recent failure.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::PathBuf;
use std::ptr;

use sbomcascade::enrich::{enrich_sbom, EnrichError, EnrichedSbom, VulnSource};
use sbomcascade::graph::{self, build_graph, default_reference_date, HeteroGraph};
use sbomcascade::sbom::{parse_sbom, validate_sbom, SbomDocument};

/// Status codes returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    /// a required pointer was null or an argument was out of range
    InvalidArgument = 1,
    /// the input could not be parsed
    ParseError = 2,
    /// the advisory source could not be reached
    SourceUnavailable = 3,
    /// unexpected internal failure
    Internal = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Message for the most recent error on this thread. The pointer stays valid
/// until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn sc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parsed SBOM, optionally enriched with advisory data.
pub struct ScSbom {
    doc: SbomDocument,
    enriched: Option<EnrichedSbom>,
}

/// Materialized heterogeneous graph.
pub struct ScGraph {
    graph: HeteroGraph,
}

fn out_string(s: String, out: *mut *mut c_char) -> ScStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            ScStatus::Ok
        }
        Err(e) => {
            set_error(&format!("string contains NUL: {e}"));
            ScStatus::Internal
        }
    }
}

/// Parse a CycloneDX JSON document. On success `*out` owns a new handle.
///
/// # Safety
/// `data` must point to `len` readable bytes; `source_path` must be a valid
/// NUL-terminated string or null; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_sbom_parse(
    data: *const u8,
    len: usize,
    source_path: *const c_char,
    out: *mut *mut ScSbom,
) -> ScStatus {
    if data.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    let raw = std::slice::from_raw_parts(data, len);
    let path = if source_path.is_null() {
        "<memory>".to_string()
    } else {
        CStr::from_ptr(source_path).to_string_lossy().into_owned()
    };
    match parse_sbom(raw, &path) {
        Ok(parsed) => {
            let handle = Box::new(ScSbom { doc: parsed.doc, enriched: None });
            *out = Box::into_raw(handle);
            ScStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            *out = ptr::null_mut();
            ScStatus::ParseError
        }
    }
}

/// # Safety
/// `sbom` must be a live handle from `sc_sbom_parse`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_sbom_component_count(
    sbom: *const ScSbom,
    out: *mut usize,
) -> ScStatus {
    if sbom.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    *out = (*sbom).doc.components.len();
    ScStatus::Ok
}

/// # Safety
/// `sbom` must be a live handle from `sc_sbom_parse`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_sbom_dependency_count(
    sbom: *const ScSbom,
    out: *mut usize,
) -> ScStatus {
    if sbom.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    *out = (*sbom).doc.dependencies.len();
    ScStatus::Ok
}

/// Validation findings as a JSON array (owned by the caller).
///
/// # Safety
/// `sbom` must be a live handle; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_sbom_validate(
    sbom: *const ScSbom,
    out_json: *mut *mut c_char,
) -> ScStatus {
    if sbom.is_null() || out_json.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    let findings = validate_sbom(&(*sbom).doc);
    match serde_json::to_string(&findings) {
        Ok(json) => out_string(json, out_json),
        Err(e) => {
            set_error(&e.to_string());
            ScStatus::Internal
        }
    }
}

/// Enrich from a local advisory fixture directory (no network).
///
/// # Safety
/// `sbom` must be a live mutable handle; `fixtures_dir` must be a valid
/// NUL-terminated path.
#[no_mangle]
pub unsafe extern "C" fn sc_sbom_enrich_offline(
    sbom: *mut ScSbom,
    fixtures_dir: *const c_char,
    strict: i32,
) -> ScStatus {
    if sbom.is_null() || fixtures_dir.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    let dir = PathBuf::from(CStr::from_ptr(fixtures_dir).to_string_lossy().into_owned());
    let source = VulnSource::Fixtures(dir);
    match enrich_sbom(&(*sbom).doc, &source, strict != 0) {
        Ok(outcome) => {
            (*sbom).enriched = Some(outcome.enriched);
            ScStatus::Ok
        }
        Err(e @ EnrichError::SourceUnavailable(_)) => {
            set_error(&e.to_string());
            ScStatus::SourceUnavailable
        }
        Err(e) => {
            set_error(&e.to_string());
            ScStatus::ParseError
        }
    }
}

/// Count of distinct CVEs found by enrichment; fails if `sc_sbom_enrich_offline`
/// has not run.
///
/// # Safety
/// `sbom` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_sbom_cve_count(sbom: *const ScSbom, out: *mut usize) -> ScStatus {
    if sbom.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    match &(*sbom).enriched {
        Some(enriched) => {
            *out = enriched.cves.len();
            ScStatus::Ok
        }
        None => {
            set_error("SBOM is not enriched");
            ScStatus::InvalidArgument
        }
    }
}

/// Build the heterogeneous graph from an enriched SBOM.
///
/// # Safety
/// `sbom` must be a live handle that has been enriched; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_build(
    sbom: *const ScSbom,
    out: *mut *mut ScGraph,
) -> ScStatus {
    if sbom.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    let Some(enriched) = &(*sbom).enriched else {
        set_error("SBOM is not enriched");
        return ScStatus::InvalidArgument;
    };
    let graph = build_graph(enriched, default_reference_date(enriched));
    *out = Box::into_raw(Box::new(ScGraph { graph }));
    ScStatus::Ok
}

/// # Safety
/// `graph` must be a live handle from `sc_graph_build`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_node_count(graph: *const ScGraph, out: *mut usize) -> ScStatus {
    if graph.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    *out = (*graph).graph.total_node_count();
    ScStatus::Ok
}

/// # Safety
/// `graph` must be a live handle from `sc_graph_build`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_edge_count(graph: *const ScGraph, out: *mut usize) -> ScStatus {
    if graph.is_null() || out.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    *out = (*graph).graph.total_edge_count();
    ScStatus::Ok
}

/// Graph serialized to versioned JSON (owned by the caller).
///
/// # Safety
/// `graph` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_to_json(
    graph: *const ScGraph,
    out_json: *mut *mut c_char,
) -> ScStatus {
    if graph.is_null() || out_json.is_null() {
        set_error("null pointer argument");
        return ScStatus::InvalidArgument;
    }
    out_string(graph::to_json(&(*graph).graph), out_json)
}

/// Release a string returned through an out-parameter.
///
/// # Safety
/// `s` must be a pointer previously returned by this library (or null).
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `sbom` must be a handle from `sc_sbom_parse` (or null); it must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sc_sbom_free(sbom: *mut ScSbom) {
    if !sbom.is_null() {
        drop(Box::from_raw(sbom));
    }
}

/// # Safety
/// `graph` must be a handle from `sc_graph_build` (or null); it must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_free(graph: *mut ScGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

#ifndef SBOMCASCADE_H
#define SBOMCASCADE_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every FFI entry point.
 */
typedef enum ScStatus {
  SC_STATUS_OK = 0,
  /**
   * a required pointer was null or an argument was out of range
   */
  SC_STATUS_INVALID_ARGUMENT = 1,
  /**
   * the input could not be parsed
   */
  SC_STATUS_PARSE_ERROR = 2,
  /**
   * the advisory source could not be reached
   */
  SC_STATUS_SOURCE_UNAVAILABLE = 3,
  /**
   * unexpected internal failure
   */
  SC_STATUS_INTERNAL = 4,
} ScStatus;

/**
 * Materialized heterogeneous graph.
 */
typedef struct ScGraph ScGraph;

/**
 * Parsed SBOM, optionally enriched with advisory data.
 */
typedef struct ScSbom ScSbom;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread. The pointer stays valid
 * until the next failing call on the same thread; do not free it.
 */
const char *sc_last_error(void);

/**
 * Parse a CycloneDX JSON document. On success `*out` owns a new handle.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `source_path` must be a valid
 * NUL-terminated string or null; `out` must be a valid pointer.
 */
enum ScStatus sc_sbom_parse(const uint8_t *data,
                            uintptr_t len,
                            const char *source_path,
                            struct ScSbom **out);

/**
 * # Safety
 * `sbom` must be a live handle from `sc_sbom_parse`; `out` must be valid.
 */
enum ScStatus sc_sbom_component_count(const struct ScSbom *sbom, uintptr_t *out);

/**
 * # Safety
 * `sbom` must be a live handle from `sc_sbom_parse`; `out` must be valid.
 */
enum ScStatus sc_sbom_dependency_count(const struct ScSbom *sbom, uintptr_t *out);

/**
 * Validation findings as a JSON array (owned by the caller).
 *
 * # Safety
 * `sbom` must be a live handle; `out_json` must be a valid pointer.
 */
enum ScStatus sc_sbom_validate(const struct ScSbom *sbom, char **out_json);

/**
 * Enrich from a local advisory fixture directory (no network).
 *
 * # Safety
 * `sbom` must be a live mutable handle; `fixtures_dir` must be a valid
 * NUL-terminated path.
 */
enum ScStatus sc_sbom_enrich_offline(struct ScSbom *sbom, const char *fixtures_dir, int32_t strict);

/**
 * Count of distinct CVEs found by enrichment; fails if `sc_sbom_enrich_offline`
 * has not run.
 *
 * # Safety
 * `sbom` must be a live handle; `out` must be valid.
 */
enum ScStatus sc_sbom_cve_count(const struct ScSbom *sbom, uintptr_t *out);

/**
 * Build the heterogeneous graph from an enriched SBOM.
 *
 * # Safety
 * `sbom` must be a live handle that has been enriched; `out` must be valid.
 */
enum ScStatus sc_graph_build(const struct ScSbom *sbom, struct ScGraph **out);

/**
 * # Safety
 * `graph` must be a live handle from `sc_graph_build`; `out` must be valid.
 */
enum ScStatus sc_graph_node_count(const struct ScGraph *graph, uintptr_t *out);

/**
 * # Safety
 * `graph` must be a live handle from `sc_graph_build`; `out` must be valid.
 */
enum ScStatus sc_graph_edge_count(const struct ScGraph *graph, uintptr_t *out);

/**
 * Graph serialized to versioned JSON (owned by the caller).
 *
 * # Safety
 * `graph` must be a live handle; `out_json` must be valid.
 */
enum ScStatus sc_graph_to_json(const struct ScGraph *graph, char **out_json);

/**
 * Release a string returned through an out-parameter.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library (or null).
 */
void sc_string_free(char *s);

/**
 * # Safety
 * `sbom` must be a handle from `sc_sbom_parse` (or null); it must not be
 * used afterwards.
 */
void sc_sbom_free(struct ScSbom *sbom);

/**
 * # Safety
 * `graph` must be a handle from `sc_graph_build` (or null); it must not be
 * used afterwards.
 */
void sc_graph_free(struct ScGraph *graph);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SBOMCASCADE_H */

#ifndef NETCLOSURE_H
#define NETCLOSURE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum NcStatus {
  NC_STATUS_OK = 0,
  NC_STATUS_NULL_POINTER = 1,
  NC_STATUS_INVALID_UTF8 = 2,
  NC_STATUS_PARSE = 3,
  NC_STATUS_TOO_LARGE = 4,
  NC_STATUS_INVALID_ARGUMENT = 5,
  /**
   * Input violates a structural rule such as network shape or strong connectivity.
   */
  NC_STATUS_DOMAIN = 6,
  NC_STATUS_PANIC = 7,
} NcStatus;

/**
 * A closure operator on at most 16 elements.
 */
typedef struct NcClosure NcClosure;

/**
 * A digraph on at most 24 vertices.
 */
typedef struct NcDigraph NcDigraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *nc_last_error(void);

/**
 * Parses the `digraph <n>` text format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum NcStatus nc_digraph_parse(const char *text_, struct NcDigraph **out);

/**
 * # Safety
 * `d` must come from this library and not be used afterwards; null is ignored.
 */
void nc_digraph_free(struct NcDigraph *d);

/**
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
enum NcStatus nc_digraph_order(const struct NcDigraph *d, size_t *out);

/**
 * Maximum induced acyclic subgraph size.
 *
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
enum NcStatus nc_digraph_mias(const struct NcDigraph *d, size_t *out);

/**
 * Minimum feedback vertex set size, which is the rank of the D-closure.
 *
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
enum NcStatus nc_digraph_rank(const struct NcDigraph *d, size_t *out);

/**
 * Removes the useless part of a strongly connected digraph and reports the
 * surviving vertices as a mask.
 *
 * # Safety
 * `d` must be a live handle and `kept` a valid pointer.
 */
enum NcStatus nc_digraph_reduce(const struct NcDigraph *d, uint32_t *kept);

/**
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
enum NcStatus nc_closure_from_digraph(const struct NcDigraph *d, struct NcClosure **out);

/**
 * Parses the `closure <n>` text format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum NcStatus nc_closure_parse(const char *text_, struct NcClosure **out);

/**
 * # Safety
 * `cl` must come from this library and not be used afterwards; null is ignored.
 */
void nc_closure_free(struct NcClosure *cl);

/**
 * # Safety
 * `cl` must be a live handle and `out` a valid pointer.
 */
enum NcStatus nc_closure_order(const struct NcClosure *cl, size_t *out);

/**
 * # Safety
 * `cl` must be a live handle and `out` a valid pointer.
 */
enum NcStatus nc_closure_rank(const struct NcClosure *cl, size_t *out);

/**
 * Closure of the set with mask `set`.
 *
 * # Safety
 * `cl` must be a live handle and `out` a valid pointer.
 */
enum NcStatus nc_closure_apply(const struct NcClosure *cl, uint32_t set, uint32_t *out);

/**
 * Independence number of the solvability graph over `q` symbols.
 *
 * # Safety
 * `cl` must be a live handle and `out` a valid pointer.
 */
enum NcStatus nc_alpha(const struct NcClosure *cl, size_t q, uint64_t *out);

/**
 * # Safety
 * `cl` must be a live handle and `out` a valid pointer.
 */
enum NcStatus nc_is_solvable(const struct NcClosure *cl, size_t q, bool *out);

/**
 * Solves a network given as JSON and returns the certificate JSON, to be
 * released with [`nc_string_free`].
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum NcStatus nc_solve_network_json(const char *json, size_t q, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards; null is ignored.
 */
void nc_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* NETCLOSURE_H */

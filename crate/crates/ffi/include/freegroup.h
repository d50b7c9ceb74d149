#ifndef FREEGROUP_H
#define FREEGROUP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FgStatus {
  FG_STATUS_OK = 0,
  FG_STATUS_NULL_POINTER = 1,
  FG_STATUS_INVALID_UTF8 = 2,
  FG_STATUS_PARSE = 3,
  FG_STATUS_INVALID = 4,
  FG_STATUS_PANIC = 5,
} FgStatus;

/**
 * Opaque subgroup graph.
 */
typedef struct FgGraph FgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *fg_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fg_string_free(char *s);

/**
 * Freely reduces `word` over `F_k`.
 *
 * # Safety
 * `word` must be a nul-terminated string and `out` a valid pointer.
 */
enum FgStatus fg_reduce(uintptr_t k, const char *word, char **out);

/**
 * Minimal cyclic length of `word` over its automorphism orbit.
 *
 * # Safety
 * `word` must be a nul-terminated string and `out` a valid pointer.
 */
enum FgStatus fg_minimal_length(uintptr_t k, const char *word, uintptr_t *out);

/**
 * Stallings graph of the subgroup generated by `count` words.
 *
 * # Safety
 * `gens` must point to `count` nul-terminated strings and `out` be valid.
 */
enum FgStatus fg_graph_from_generators(uintptr_t k,
                                       const char *const *gens,
                                       uintptr_t count,
                                       struct FgGraph **out);

/**
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum FgStatus fg_graph_from_json(const char *json, struct FgGraph **out);

/**
 * # Safety
 * `g` must be a live graph and `out` a valid pointer.
 */
enum FgStatus fg_graph_to_json(const struct FgGraph *g, char **out);

/**
 * # Safety
 * `g` must come from this library and not have been freed.
 */
void fg_graph_free(struct FgGraph *g);

/**
 * # Safety
 * `g` must be a live graph and `out` a valid pointer.
 */
enum FgStatus fg_graph_rank(const struct FgGraph *g, uintptr_t *out);

/**
 * # Safety
 * `g` must be a live graph and `out` a valid pointer.
 */
enum FgStatus fg_graph_num_vertices(const struct FgGraph *g, uintptr_t *out);

/**
 * Membership of `word` in the subgroup.
 *
 * # Safety
 * `g` must be a live graph, `word` nul-terminated and `out` valid.
 */
enum FgStatus fg_graph_contains(const struct FgGraph *g, const char *word, bool *out);

/**
 * # Safety
 * `g` must be a live graph and `out` a valid pointer.
 */
enum FgStatus fg_graph_is_malnormal(const struct FgGraph *g, bool *out);

/**
 * Graph of the intersection of two subgroups.
 *
 * # Safety
 * `a` and `b` must be live graphs and `out` a valid pointer.
 */
enum FgStatus fg_graph_intersect(const struct FgGraph *a,
                                 const struct FgGraph *b,
                                 struct FgGraph **out);

/**
 * Runs the certificate with default parameters; writes the JSON report and
 * the verdict.
 *
 * # Safety
 * `gens` must point to `count` nul-terminated strings; `report` and
 * `certified` must be valid pointers.
 */
enum FgStatus fg_certify(uintptr_t k,
                         const char *const *gens,
                         uintptr_t count,
                         char **report,
                         bool *certified);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FREEGROUP_H */

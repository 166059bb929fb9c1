#ifndef PBPO_H
#define PBPO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PbpoStatus {
  PBPO_STATUS_OK = 0,
  PBPO_STATUS_NULL_ARGUMENT = 1,
  PBPO_STATUS_INVALID_UTF8 = 2,
  PBPO_STATUS_PARSE = 3,
  PBPO_STATUS_VALIDATION = 4,
  PBPO_STATUS_NOT_FOUND = 5,
  PBPO_STATUS_OUT_OF_RANGE = 6,
  PBPO_STATUS_REWRITE = 7,
  PBPO_STATUS_INTERNAL = 8,
} PbpoStatus;

/**
 * A labeled graph.
 */
typedef struct PbpoGraph PbpoGraph;

/**
 * A validated rewrite rule.
 */
typedef struct PbpoRule PbpoRule;

/**
 * A loaded interchange workspace.
 */
typedef struct PbpoWorkspace PbpoWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *pbpo_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void pbpo_string_free(char *s);

/**
 * Parses a workspace document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum PbpoStatus pbpo_workspace_load_json(const char *json, struct PbpoWorkspace **out);

/**
 * Loads a workspace file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum PbpoStatus pbpo_workspace_load_file(const char *path, struct PbpoWorkspace **out);

/**
 * # Safety
 * `ws` must be null or a workspace from this library, not yet freed.
 */
void pbpo_workspace_free(struct PbpoWorkspace *ws);

/**
 * Copies out the named graph.
 *
 * # Safety
 * `ws` must be a live workspace, `name` a NUL-terminated string, `out` writable.
 */
enum PbpoStatus pbpo_workspace_graph(const struct PbpoWorkspace *ws,
                                     const char *name,
                                     struct PbpoGraph **out);

/**
 * Copies out the named rule.
 *
 * # Safety
 * `ws` must be a live workspace, `name` a NUL-terminated string, `out` writable.
 */
enum PbpoStatus pbpo_workspace_rule(const struct PbpoWorkspace *ws,
                                    const char *name,
                                    struct PbpoRule **out);

/**
 * # Safety
 * `g` must be null or a graph from this library, not yet freed.
 */
void pbpo_graph_free(struct PbpoGraph *g);

/**
 * # Safety
 * `r` must be null or a rule from this library, not yet freed.
 */
void pbpo_rule_free(struct PbpoRule *r);

/**
 * Number of nodes, or 0 for a null graph.
 *
 * # Safety
 * `g` must be null or a live graph.
 */
size_t pbpo_graph_node_count(const struct PbpoGraph *g);

/**
 * Number of edges, or 0 for a null graph.
 *
 * # Safety
 * `g` must be null or a live graph.
 */
size_t pbpo_graph_edge_count(const struct PbpoGraph *g);

/**
 * Serializes `g` as a workspace document holding one graph named `name`.
 *
 * # Safety
 * `g` must be a live graph, `name` a NUL-terminated string, `out` writable.
 */
enum PbpoStatus pbpo_graph_to_json(const struct PbpoGraph *g, const char *name, char **out);

/**
 * Renders `g` as a Graphviz digraph.
 *
 * # Safety
 * `g` must be a live graph, `name` a NUL-terminated string, `out` writable.
 */
enum PbpoStatus pbpo_graph_to_dot(const struct PbpoGraph *g, const char *name, char **out);

/**
 * Writes whether `a` and `b` are isomorphic.
 *
 * # Safety
 * `a`, `b` must be live graphs and `out` writable.
 */
enum PbpoStatus pbpo_graph_is_isomorphic(const struct PbpoGraph *a,
                                         const struct PbpoGraph *b,
                                         bool *out);

/**
 * The complete decision tree of a truth table such as `"0001"` over `"p,q"`.
 *
 * # Safety
 * `table` and `vars` must be NUL-terminated strings; `out` writable.
 */
enum PbpoStatus pbpo_bdd_build(const char *table, const char *vars, struct PbpoGraph **out);

/**
 * Builds the decision tree and reduces it by rewriting. `steps` may be null.
 *
 * # Safety
 * `table` and `vars` must be NUL-terminated strings; `out` writable; `steps`
 * null or writable.
 */
enum PbpoStatus pbpo_bdd_reduce(const char *table,
                                const char *vars,
                                struct PbpoGraph **out,
                                size_t *steps);

/**
 * The reduced diagram built directly with a unique table.
 *
 * # Safety
 * `table` and `vars` must be NUL-terminated strings; `out` writable.
 */
enum PbpoStatus pbpo_bdd_oracle(const char *table, const char *vars, struct PbpoGraph **out);

/**
 * Number of strong matches of `rule` in `g`.
 *
 * # Safety
 * `rule` and `g` must be live handles; `out` writable.
 */
enum PbpoStatus pbpo_match_count(const struct PbpoRule *rule,
                                 const struct PbpoGraph *g,
                                 size_t *out);

/**
 * Applies `rule` at match number `index` (in enumeration order).
 *
 * # Safety
 * `rule` and `g` must be live handles; `out` writable.
 */
enum PbpoStatus pbpo_apply(const struct PbpoRule *rule,
                           const struct PbpoGraph *g,
                           size_t index,
                           struct PbpoGraph **out);

/**
 * Rewrites with the first applicable rule at its first match until no
 * rule applies or `max_steps` steps were taken. `steps` and `fixpoint` may
 * be null.
 *
 * # Safety
 * `rules` must point to `count` live rule handles; `g` must be live; `out`
 * writable; `steps` and `fixpoint` null or writable.
 */
enum PbpoStatus pbpo_normalize(const struct PbpoRule *const *rules,
                               size_t count,
                               const struct PbpoGraph *g,
                               size_t max_steps,
                               struct PbpoGraph **out,
                               size_t *steps,
                               bool *fixpoint);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PBPO_H */

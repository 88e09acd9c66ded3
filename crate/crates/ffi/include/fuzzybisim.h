/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef FUZZYBISIM_H
#define FUZZYBISIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define FB_LATTICE_GODEL 0

#define FB_LATTICE_LUKASIEWICZ 1

#define FB_LATTICE_PRODUCT 2

#define FB_KIND_SIMULATION 0

#define FB_KIND_BISIMULATION 1

// Result of every fallible call.
typedef enum FbStatus {
  FB_STATUS_OK = 0,
  // The call ran but the checked property does not hold.
  FB_STATUS_PROPERTY_FAILED = 1,
  FB_STATUS_INVALID_INPUT = 2,
  FB_STATUS_NOT_CONVERGED = 3,
  FB_STATUS_NULL_POINTER = 4,
  // Approximate relations were requested over a non-Gödel lattice.
  FB_STATUS_NOT_HEYTING = 5,
  FB_STATUS_PANIC = 6,
} FbStatus;

// Opaque automaton handle.
typedef struct FbAutomaton FbAutomaton;

// Opaque relation handle.
typedef struct FbRelation FbRelation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread; empty after a
// successful call. Valid until the next library call on the same thread.
const char *fb_last_error(void);

// Library version as a static string.
const char *fb_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void fb_string_free(char *s);

// Parses an automaton from its JSON description.
//
// # Safety
// `json` must be a valid C string; `out` must be writable.
enum FbStatus fb_automaton_from_json(const char *json, struct FbAutomaton **out);

// # Safety
// `a` must come from `fb_automaton_from_json` and not have been freed.
void fb_automaton_free(struct FbAutomaton *a);

// Parses a relation from its JSON array form.
//
// # Safety
// `json` must be a valid C string; `out` must be writable.
enum FbStatus fb_relation_from_json(const char *json, struct FbRelation **out);

// # Safety
// `r` must come from `fb_relation_from_json` and not have been freed.
void fb_relation_free(struct FbRelation *r);

// Degree to which `a` accepts `word` (symbols separated by spaces or
// commas), written to `out` as a rational string.
//
// # Safety
// Pointers must be valid; `out` receives a string to free with
// `fb_string_free`.
enum FbStatus fb_lang_degree(uint32_t lattice_code,
                             const struct FbAutomaton *a,
                             const char *word,
                             char **out);

// Checks whether `r` is a fuzzy simulation or bisimulation (or, with
// `crisp` set, a crisp one). Returns `Ok` when it is and `PropertyFailed`
// when it is not.
//
// # Safety
// Pointers must be valid handles.
enum FbStatus fb_check(uint32_t lattice_code,
                       uint32_t kind_code,
                       const struct FbAutomaton *a,
                       const struct FbAutomaton *b,
                       const struct FbRelation *r,
                       bool crisp);

// Checks whether `r` is a λ-approximate simulation or bisimulation, with
// `lambda` a rational string. Gödel lattice only.
//
// # Safety
// Pointers must be valid.
enum FbStatus fb_check_approx(uint32_t lattice_code,
                              uint32_t kind_code,
                              const struct FbAutomaton *a,
                              const struct FbAutomaton *b,
                              const struct FbRelation *r,
                              const char *lambda);

// Computes the greatest fuzzy simulation or bisimulation and writes the
// JSON report (relation, norm, iterations, converged) to `out`. The report
// is written even when the status is `NotConverged`.
//
// # Safety
// Pointers must be valid; `out` receives a string to free with
// `fb_string_free`.
enum FbStatus fb_greatest(uint32_t lattice_code,
                          uint32_t kind_code,
                          const struct FbAutomaton *a,
                          const struct FbAutomaton *b,
                          size_t max_iters,
                          char **out);

// Norm of `r` as a simulation or bisimulation, as a rational string.
//
// # Safety
// Pointers must be valid; `out` receives a string to free with
// `fb_string_free`.
enum FbStatus fb_norm(uint32_t lattice_code,
                      uint32_t kind_code,
                      const struct FbAutomaton *a,
                      const struct FbAutomaton *b,
                      const struct FbRelation *r,
                      char **out);

// Largest λ admitting a λ-approximate simulation or bisimulation.
//
// # Safety
// Pointers must be valid; `out` receives a string to free with
// `fb_string_free`.
enum FbStatus fb_max_lambda(uint32_t lattice_code,
                            uint32_t kind_code,
                            const struct FbAutomaton *a,
                            const struct FbAutomaton *b,
                            size_t max_iters,
                            char **out);

// Evaluates a formula on every state; writes a JSON object mapping state
// names to degrees (states with degree 0 are omitted).
//
// # Safety
// Pointers must be valid; `out` receives a string to free with
// `fb_string_free`.
enum FbStatus fb_eval_formula(uint32_t lattice_code,
                              const struct FbAutomaton *a,
                              const char *formula,
                              char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUZZYBISIM_H */

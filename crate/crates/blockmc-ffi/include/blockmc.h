#ifndef BLOCKMC_H
#define BLOCKMC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every FFI call.
 */
typedef enum {
  BLOCKMC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BLOCKMC_STATUS_NULL_ARGUMENT = 1,
  /**
   * An input string was not valid UTF-8.
   */
  BLOCKMC_STATUS_INVALID_UTF8 = 2,
  /**
   * The input parsed but violated a schema or a mathematical invariant,
   * or a label was unknown.
   */
  BLOCKMC_STATUS_INVALID_INPUT = 3,
  /**
   * Unexpected internal failure.
   */
  BLOCKMC_STATUS_INTERNAL = 4,
} BlockmcStatus;

/**
 * Opaque: a joint measure together with its tree.
 */
typedef struct BlockmcMeasure BlockmcMeasure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. The returned string must be
 * freed with `blockmc_string_free`.
 */
char *blockmc_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by this library and
 * not yet freed.
 */
void blockmc_string_free(char *s);

/**
 * Releases a measure handle.
 *
 * # Safety
 * `m` must be null or a handle previously returned by this library and not
 * yet freed.
 */
void blockmc_measure_free(BlockmcMeasure *m);

/**
 * Parses a full measure file (JSON).
 *
 * # Safety
 * `json` must be a valid NUL-terminated C string and `out` a valid pointer.
 */
BlockmcStatus blockmc_measure_from_json(const char *json, BlockmcMeasure **out);

/**
 * Parses a block Markov spec file (JSON) and realizes it.
 *
 * # Safety
 * `json` must be a valid NUL-terminated C string and `out` a valid pointer.
 */
BlockmcStatus blockmc_measure_from_bmc_json(const char *json, BlockmcMeasure **out);

/**
 * Embeds a chain file into a tree file; the chain JSON must carry a
 * `time_map`.
 *
 * # Safety
 * Both strings must be valid NUL-terminated C strings and `out` a valid
 * pointer.
 */
BlockmcStatus blockmc_measure_from_chain_json(const char *chain_json,
                                              const char *tree_json,
                                              BlockmcMeasure **out);

/**
 * Loads a built-in fixture: "counterexample", "path3" or "binary2".
 *
 * # Safety
 * `name` must be a valid NUL-terminated C string and `out` a valid pointer.
 */
BlockmcStatus blockmc_measure_from_fixture(const char *name, BlockmcMeasure **out);

/**
 * Serializes the measure back to its JSON file format.
 *
 * # Safety
 * `m` must be a live handle and `out_json` a valid pointer.
 */
BlockmcStatus blockmc_measure_to_json(const BlockmcMeasure *m, char **out_json);

/**
 * Runs the full classification and returns the JSON report.
 * `max_subtree_size` caps the Markov-chain subtree sweep; pass 0 for no cap.
 *
 * # Safety
 * `m` must be a live handle and `out_json` a valid pointer.
 */
BlockmcStatus blockmc_classify(const BlockmcMeasure *m,
                               uintptr_t max_subtree_size,
                               char **out_json);

/**
 * Checks the block Markov property from `root_label` (or the stored root
 * when null) and returns the JSON verdict.
 *
 * # Safety
 * `m` must be a live handle, `root_label` null or a valid C string, and
 * `out_json` a valid pointer.
 */
BlockmcStatus blockmc_check_obmc(const BlockmcMeasure *m, const char *root_label, char **out_json);

/**
 * Exact cylinder probability of a partial configuration given as a
 * `{"label": symbol, ...}` JSON object; the result is a `"num/den"` string.
 *
 * # Safety
 * `m` must be a live handle, `config_json` a valid C string and `out_ratio`
 * a valid pointer.
 */
BlockmcStatus blockmc_cylinder_probability(const BlockmcMeasure *m,
                                           const char *config_json,
                                           char **out_ratio);

/**
 * Exact conditional probability `P[target | given]` of two disjoint
 * configurations, as a `"num/den"` string.
 *
 * # Safety
 * `m` must be a live handle, both configuration strings valid C strings and
 * `out_ratio` a valid pointer.
 */
BlockmcStatus blockmc_conditional_probability(const BlockmcMeasure *m,
                                              const char *target_json,
                                              const char *given_json,
                                              char **out_ratio);

/**
 * The four exact conditionals of the built-in counter-example, as JSON.
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
BlockmcStatus blockmc_counterexample_values(char **out_json);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BLOCKMC_H */

#ifndef ROMLIFT_H
#define ROMLIFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum RlStatus {
  RL_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  RL_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  RL_STATUS_UTF8 = 2,
  /**
   * Input text failed to parse (oracle file, circuit JSON, name syntax).
   */
  RL_STATUS_PARSE = 3,
  /**
   * An exact enumeration would exceed the configured budget.
   */
  RL_STATUS_BUDGET = 4,
  /**
   * No built-in object has the requested name.
   */
  RL_STATUS_UNKNOWN_NAME = 5,
  /**
   * The inputs are structurally valid but inconsistent (signature
   * mismatch, bad parameters, failed contract).
   */
  RL_STATUS_INVALID = 6,
  /**
   * The library panicked; this is a bug worth reporting.
   */
  RL_STATUS_PANIC = 7,
} RlStatus;

/**
 * A quantum query circuit handle.
 */
typedef struct RlCircuit RlCircuit;

/**
 * An oracle handle: a total function on a small bit-string domain.
 */
typedef struct RlOracle RlOracle;

/**
 * A built-in classical PRG handle.
 */
typedef struct RlPrg RlPrg;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The library version as a static string; do not free.
 */
const char *rl_version(void);

/**
 * The message for the most recent error on this thread, or null. The
 * caller owns the returned string and must free it with
 * [`rl_string_free`].
 */
char *rl_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `ptr` must be null or a pointer previously returned by a `char **`
 * out-parameter or [`rl_last_error`], and must not be used afterwards.
 */
void rl_string_free(char *ptr);

/**
 * Parse an oracle from the line-oriented text format
 * (`n=<int> m=<int>` header, then `x_bits -> y_bits` lines covering every
 * point).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be a valid
 * pointer.
 */
enum RlStatus rl_oracle_parse(const char *text, struct RlOracle **out);

/**
 * Render an oracle in the text format.
 *
 * # Safety
 * `oracle` must be a live handle from [`rl_oracle_parse`]; `out` must be a
 * valid pointer.
 */
enum RlStatus rl_oracle_format(const struct RlOracle *oracle, char **out);

/**
 * Release an oracle handle.
 *
 * # Safety
 * `oracle` must be null or a live handle, and must not be used afterwards.
 */
void rl_oracle_free(struct RlOracle *oracle);

/**
 * Parse a circuit from the JSON format.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be a valid
 * pointer.
 */
enum RlStatus rl_circuit_parse_json(const char *json, struct RlCircuit **out);

/**
 * Render a circuit as JSON.
 *
 * # Safety
 * `circuit` must be a live handle; `out` must be a valid pointer.
 */
enum RlStatus rl_circuit_to_json(const struct RlCircuit *circuit, char **out);

/**
 * Release a circuit handle.
 *
 * # Safety
 * `circuit` must be null or a live handle, and must not be used afterwards.
 */
void rl_circuit_free(struct RlCircuit *circuit);

/**
 * Look up a built-in classical PRG (`g_id`, `g_xp2`, `g_const`).
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `out` must be a valid
 * pointer.
 */
enum RlStatus rl_prg_by_name(const char *name, struct RlPrg **out);

/**
 * Release a PRG handle.
 *
 * # Safety
 * `prg` must be null or a live handle, and must not be used afterwards.
 */
void rl_prg_free(struct RlPrg *prg);

/**
 * Exact measurement distribution of a circuit run against an oracle, as a
 * JSON object mapping output bit strings to probabilities.
 *
 * # Safety
 * `circuit` and `oracle` must be live handles; `out` must be a valid
 * pointer.
 */
enum RlStatus rl_output_distribution_json(const struct RlCircuit *circuit,
                                          const struct RlOracle *oracle,
                                          char **out);

/**
 * Exact distinguishing advantage of a built-in distinguisher against a
 * PRG handle.
 *
 * # Safety
 * `prg` must be a live handle; `distinguisher` a valid string; `out` a
 * valid pointer.
 */
enum RlStatus rl_prg_advantage(const struct RlPrg *prg,
                               const char *distinguisher,
                               uint64_t budget,
                               double *out);

/**
 * Full lifting report for a PRG handle and a built-in distinguisher, as
 * JSON. Pass a negative `eps` to tune against the measured quantum
 * advantage.
 *
 * # Safety
 * `prg` must be a live handle; `distinguisher` a valid string; `out` a
 * valid pointer.
 */
enum RlStatus rl_lift_report_json(const struct RlPrg *prg,
                                  const char *distinguisher,
                                  double eps,
                                  uint64_t budget,
                                  char **out);

/**
 * Simulate a circuit's oracle dependence classically: learn enough of the
 * oracle to reproduce the canonical output. Returns JSON with the query
 * count, the per-stage trace and the simulated oracle.
 *
 * # Safety
 * `circuit` and `oracle` must be live handles; `out` must be a valid
 * pointer.
 */
enum RlStatus rl_sim_oracle_json(const struct RlCircuit *circuit,
                                 const struct RlOracle *oracle,
                                 double delta,
                                 char **out);

/**
 * Run a named verification suite (`lemmas`, `lift`, `pseudodet`, `all`)
 * and return its checks as JSON. `passed` is set to 1 when every check
 * passed.
 *
 * # Safety
 * `suite` must be a valid NUL-terminated string; `out` and `passed` must
 * be valid pointers.
 */
enum RlStatus rl_verify_suite_json(const char *suite,
                                   uint64_t seed,
                                   uint64_t trials,
                                   uint64_t budget,
                                   int32_t *passed,
                                   char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROMLIFT_H */

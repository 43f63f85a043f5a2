/* timelot C ABI — audit models of intertemporal choice under risk. */

#ifndef TIMELOT_H
#define TIMELOT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum TimelotStatus {
  /**
   * Success.
   */
  TIMELOT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TIMELOT_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  TIMELOT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or an unknown key/kind/family.
   */
  TIMELOT_STATUS_PARSE = 3,
  /**
   * Parameters or coordinates violate a model constraint.
   */
  TIMELOT_STATUS_INVALID_INPUT = 4,
  /**
   * The operation is not defined for this model or lottery shape.
   */
  TIMELOT_STATUS_UNSUPPORTED = 5,
  /**
   * A solver failed to bracket or converge.
   */
  TIMELOT_STATUS_SOLVER = 6,
  /**
   * No indifference prize exists for the requested shift.
   */
  TIMELOT_STATUS_NO_SOLUTION = 7,
  /**
   * A panic was caught at the boundary; state is unspecified.
   */
  TIMELOT_STATUS_PANIC = 8,
} TimelotStatus;

/**
 * Opaque model handle.
 */
typedef struct TimelotModel TimelotModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a model from its JSON description and hand back an owned handle.
 */
enum TimelotStatus timelot_model_from_json(const char *json, struct TimelotModel **out_model);

/**
 * Release a model handle. Null is a no-op.
 */
void timelot_model_free(struct TimelotModel *model);

/**
 * Serialize the model back to its canonical JSON form.
 */
enum TimelotStatus timelot_model_to_json(const struct TimelotModel *model, char **out_json);

/**
 * V(δ_(x,t)).
 */
enum TimelotStatus timelot_eval_outcome(const struct TimelotModel *model,
                                        double x,
                                        double t,
                                        double *out_value);

/**
 * V(p) for a lottery given as JSON atoms over the model's domain.
 */
enum TimelotStatus timelot_eval_lottery_json(const struct TimelotModel *model,
                                             const char *lottery_json,
                                             double *out_value);

/**
 * Run the full axiom audit and return the report as a JSON document.
 * `grid_n` and `sample_n` of zero select the scale-aware defaults.
 */
enum TimelotStatus timelot_audit_json(const struct TimelotModel *model,
                                      uint64_t seed,
                                      uint32_t grid_n,
                                      uint32_t sample_n,
                                      char **out_json);

/**
 * Solve δ_(y, t−τ) ∼ δ_(x, t) for y < x. Returns `NoSolution` when even
 * the worst prize at the earlier date is strictly preferred.
 */
enum TimelotStatus timelot_indifferent_prize(const struct TimelotModel *model,
                                             double x,
                                             double t,
                                             double tau,
                                             double *out_y);

/**
 * Radius s > 0 such that indifference prizes exist for every τ in (0, s).
 */
enum TimelotStatus timelot_local_radius(const struct TimelotModel *model,
                                        double x,
                                        double t,
                                        double *out_radius);

/**
 * Time certainty equivalent of a time lottery given as JSON.
 */
enum TimelotStatus timelot_time_certainty_equivalent(const struct TimelotModel *model,
                                                     const char *lottery_json,
                                                     double *out_t_star);

/**
 * Last error message on this thread; empty until a call fails. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *timelot_last_error_message(void);

/**
 * Release a string returned by this library. Null is a no-op.
 */
void timelot_string_free(char *s);

/**
 * Library version as a static string; do not free.
 */
const char *timelot_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TIMELOT_H */

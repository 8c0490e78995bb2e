#ifndef SPHOLE_H
#define SPHOLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpholeStatus {
  SPHOLE_STATUS_OK = 0,
  SPHOLE_STATUS_NULL_POINTER = 1,
  SPHOLE_STATUS_INVALID_CONFIG = 2,
  SPHOLE_STATUS_DOMAIN = 3,
  SPHOLE_STATUS_UNREACHABLE = 4,
  SPHOLE_STATUS_INTERNAL = 5,
  SPHOLE_STATUS_PANIC = 6,
} SpholeStatus;

/**
 * Network configuration handle.
 */
typedef struct SpholeConfig SpholeConfig;

/**
 * Quadrature tables for one geometry; evaluates many intensities cheaply.
 */
typedef struct SpholeEvaluator SpholeEvaluator;

typedef struct SpholeBounds {
  /**
   * 1, 2 or 3.
   */
  int32_t case_label;
  double lower;
  double upper;
  double second_case;
  double quad_error;
} SpholeBounds;

typedef struct SpholeEstimate {
  uint64_t trials;
  uint64_t hits;
  double p_hat;
  double std_error;
  double ci_low;
  double ci_high;
} SpholeEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sphole_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sphole_version(void);

/**
 * Creates a configuration: sphere radius, sensing and communication radii,
 * node intensity per unit area.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum SpholeStatus sphole_config_new(double radius,
                                    double sensing_radius,
                                    double comm_radius,
                                    double intensity,
                                    struct SpholeConfig **out);

/**
 * # Safety
 * `cfg` must be null or a handle from [`sphole_config_new`] not yet freed.
 */
void sphole_config_free(struct SpholeConfig *cfg);

/**
 * # Safety
 * `cfg` must be null or a live configuration handle.
 */
enum SpholeStatus sphole_config_set_intensity(struct SpholeConfig *cfg, double intensity);

/**
 * Writes 1, 2 or 3 to `out_case`.
 *
 * # Safety
 * `cfg` must be a live handle; `out_case` valid for writing.
 */
enum SpholeStatus sphole_classify(const struct SpholeConfig *cfg, int32_t *out_case);

/**
 * Largest communication radius for which the Rips complex has no holes.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum SpholeStatus sphole_rips_threshold(double sensing_radius, double radius, double *out);

/**
 * Bounds at the configuration's intensity, `order` Gauss-Legendre nodes
 * per level (refined at twice that).
 *
 * # Safety
 * `cfg` must be a live handle; `out` valid for writing.
 */
enum SpholeStatus sphole_bounds(const struct SpholeConfig *cfg,
                                double second_case,
                                uint32_t order,
                                struct SpholeBounds *out);

/**
 * Builds reusable quadrature tables for the geometry of `cfg`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` valid for writing one pointer.
 */
enum SpholeStatus sphole_evaluator_new(const struct SpholeConfig *cfg,
                                       uint32_t order,
                                       struct SpholeEvaluator **out);

/**
 * # Safety
 * `eval` must be a live evaluator handle; `out` valid for writing.
 */
enum SpholeStatus sphole_evaluator_eval(const struct SpholeEvaluator *eval,
                                        double intensity,
                                        double second_case,
                                        struct SpholeBounds *out);

/**
 * # Safety
 * `eval` must be null or a handle from [`sphole_evaluator_new`] not yet freed.
 */
void sphole_evaluator_free(struct SpholeEvaluator *eval);

/**
 * Monte Carlo estimates of the hole and second-case probabilities.
 * Either output pointer may be null.
 *
 * # Safety
 * `cfg` must be a live handle; non-null outputs valid for writing.
 */
enum SpholeStatus sphole_estimate(const struct SpholeConfig *cfg,
                                  uint64_t trials,
                                  uint64_t seed,
                                  struct SpholeEstimate *hole,
                                  struct SpholeEstimate *second_case);

/**
 * Smallest intensity whose upper bound keeps the uncovered fraction at or
 * below `1 - coverage_target`. `out_upper` may be null.
 *
 * # Safety
 * `cfg` must be a live handle; `out_intensity` valid for writing.
 */
enum SpholeStatus sphole_required_intensity(const struct SpholeConfig *cfg,
                                            double coverage_target,
                                            double second_case,
                                            uint32_t order,
                                            double *out_intensity,
                                            double *out_upper);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHOLE_H */

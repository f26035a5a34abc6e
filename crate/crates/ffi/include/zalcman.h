#ifndef ZALCMAN_H
#define ZALCMAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZalcmanExtremal {
  ZALCMAN_EXTREMAL_SINGLE_ATOM = 0,
  ZALCMAN_EXTREMAL_ROTATION_MIX = 1,
} ZalcmanExtremal;

typedef enum ZalcmanRegime {
  ZALCMAN_REGIME_LARGE_LAMBDA = 0,
  ZALCMAN_REGIME_SMALL_LAMBDA = 1,
  ZALCMAN_REGIME_BOUNDARY = 2,
} ZalcmanRegime;

typedef enum ZalcmanStatus {
  ZALCMAN_STATUS_OK = 0,
  ZALCMAN_STATUS_NULL_POINTER = 1,
  ZALCMAN_STATUS_INVALID_ALPHA = 2,
  ZALCMAN_STATUS_INVALID_LAMBDA = 3,
  ZALCMAN_STATUS_INVALID_ORDER = 4,
  ZALCMAN_STATUS_INVALID_MEASURE = 5,
  ZALCMAN_STATUS_INVALID_CONFIG = 6,
  ZALCMAN_STATUS_DOMAIN = 7,
  ZALCMAN_STATUS_INVALID_ARGUMENT = 8,
  ZALCMAN_STATUS_PANIC = 9,
} ZalcmanStatus;

/**
 * Opaque discrete measure.
 */
typedef struct ZalcmanMeasure ZalcmanMeasure;

/**
 * Opaque search outcome.
 */
typedef struct ZalcmanSearch ZalcmanSearch;

typedef struct ZalcmanBound {
  double alpha;
  double lambda;
  size_t n;
  double a_n;
  double a_2n1;
  double c_n;
  double value;
  enum ZalcmanRegime regime;
  enum ZalcmanExtremal extremal;
} ZalcmanBound;

/**
 * `atoms == 0` selects the default of `2n − 2`.
 */
typedef struct ZalcmanSearchConfig {
  size_t atoms;
  size_t starts;
  size_t max_iters;
  double tol_converge;
  uint64_t seed;
} ZalcmanSearchConfig;

typedef struct ZalcmanSearchSummary {
  double best_modulus;
  double bound;
  double gap;
  double seeded_modulus;
  size_t starts_used;
  size_t iterations;
  size_t violations;
  bool converged;
} ZalcmanSearchSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *zalcman_last_error(void);

/**
 * Static, nul-terminated crate version.
 */
const char *zalcman_version(void);

/**
 * `A_n(α)` for `n ≥ 1`.
 *
 * # Safety
 *
 * `out` must be null or valid for writes.
 */
enum ZalcmanStatus zalcman_an(double alpha, size_t n, double *out);

/**
 * `C_n(α) = 2A_{2n−1}/A_n²` for `n ≥ 3`.
 *
 * # Safety
 *
 * `out` must be null or valid for writes.
 */
enum ZalcmanStatus zalcman_cn(double alpha, size_t n, double *out);

/**
 * Sharp bound of `|λ a_n² − a_{2n−1}|` for `n ≥ 3`.
 *
 * # Safety
 *
 * `out` must be null or valid for writes.
 */
enum ZalcmanStatus zalcman_sharp_bound(double alpha,
                                       double lambda,
                                       size_t n,
                                       struct ZalcmanBound *out);

/**
 * Measure with atoms at `thetas[i]` carrying `weights[i]`; weights must
 * sum to 1.
 *
 * # Safety
 *
 * `thetas` and `weights` must point to `len` readable doubles; `out` must
 * be null or valid for writes.
 */
enum ZalcmanStatus zalcman_measure_new(const double *thetas,
                                       const double *weights,
                                       size_t len,
                                       struct ZalcmanMeasure **out);

/**
 * Measure from the JSON literal `[{"theta": .., "w": ..}, ..]`.
 *
 * # Safety
 *
 * `json` must be null or a nul-terminated string; `out` must be null or
 * valid for writes.
 */
enum ZalcmanStatus zalcman_measure_from_json(const char *json, struct ZalcmanMeasure **out);

/**
 * Number of atoms, or 0 for a null handle.
 *
 * # Safety
 *
 * `m` must be null or a live handle.
 */
size_t zalcman_measure_len(const struct ZalcmanMeasure *m);

/**
 * Copies atom `index` into `theta` and `w`.
 *
 * # Safety
 *
 * `m` must be null or a live handle; `theta` and `w` must be null or valid
 * for writes.
 */
enum ZalcmanStatus zalcman_measure_atom(const struct ZalcmanMeasure *m,
                                        size_t index,
                                        double *theta,
                                        double *w);

/**
 * # Safety
 *
 * `m` must be null or a handle not yet freed.
 */
void zalcman_measure_free(struct ZalcmanMeasure *m);

/**
 * `λ a_n² − a_{2n−1}` for the member built from `measure`.
 *
 * # Safety
 *
 * `measure` must be null or a live handle; `re` and `im` must be null or
 * valid for writes.
 */
enum ZalcmanStatus zalcman_phi(double alpha,
                               double lambda,
                               size_t n,
                               const struct ZalcmanMeasure *measure,
                               double *re,
                               double *im);

/**
 * Default search settings.
 */
struct ZalcmanSearchConfig zalcman_search_config_default(void);

/**
 * Multi-start maximization of `|Φ|`; a null `config` uses the defaults.
 *
 * # Safety
 *
 * `config` must be null or readable; `out` must be null or valid for
 * writes.
 */
enum ZalcmanStatus zalcman_search(double alpha,
                                  double lambda,
                                  size_t n,
                                  const struct ZalcmanSearchConfig *config,
                                  struct ZalcmanSearch **out);

/**
 * # Safety
 *
 * `s` must be null or a live handle; `out` must be null or valid for
 * writes.
 */
enum ZalcmanStatus zalcman_search_summary(const struct ZalcmanSearch *s,
                                          struct ZalcmanSearchSummary *out);

/**
 * New handle holding a copy of the best measure found.
 *
 * # Safety
 *
 * `s` must be null or a live handle; `out` must be null or valid for
 * writes.
 */
enum ZalcmanStatus zalcman_search_best_measure(const struct ZalcmanSearch *s,
                                               struct ZalcmanMeasure **out);

/**
 * # Safety
 *
 * `s` must be null or a handle not yet freed.
 */
void zalcman_search_free(struct ZalcmanSearch *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZALCMAN_H */

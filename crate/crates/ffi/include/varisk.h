#ifndef VARISK_H
#define VARISK_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result of every fallible call. Zero is success.
 */
typedef enum {
  VARISK_STATUS_OK = 0,
  /*
   A required pointer argument was NULL.
   */
  VARISK_STATUS_NULL_POINTER = 1,
  /*
   A string argument was not valid UTF-8 or could not be parsed.
   */
  VARISK_STATUS_INVALID_ARGUMENT = 2,
  VARISK_STATUS_DOMAIN = 3,
  VARISK_STATUS_INVALID_PARAMETER = 4,
  VARISK_STATUS_PREMISE_VIOLATED = 5,
  VARISK_STATUS_OUT_OF_RANGE = 6,
  VARISK_STATUS_NON_CONVERGENCE = 7,
  /*
   An output buffer was too small; the required length was still written.
   */
  VARISK_STATUS_BUFFER_TOO_SMALL = 8,
  /*
   The library panicked. This is a bug.
   */
  VARISK_STATUS_PANIC = 9,
} VariskStatus;

/*
 Values for [`VariskReport::verdict`].
 */
typedef enum {
  VARISK_VERDICT_BENEFICIAL = 0,
  VARISK_VERDICT_NEUTRAL = 1,
  VARISK_VERDICT_HARMFUL = 2,
} VariskVerdict;

/*
 Values for the `dependence` arguments.
 */
typedef enum {
  VARISK_DEPENDENCE_COMONOTONE = 0,
  VARISK_DEPENDENCE_INDEPENDENT = 1,
} VariskDependence;

/*
 Opaque handle to a validated distribution.
 */
typedef struct VariskDistribution VariskDistribution;

/*
 Numerical knobs of the convolution. Start from [`varisk_settings_default`].
 */
typedef struct {
  double abs_tolerance;
  double truncation_epsilon;
  size_t max_subdivisions;
  /*
   Use closed forms for the Pareto(1,1), Exponential and Normal pairs.
   */
  bool use_fast_paths;
} VariskSettings;

typedef struct {
  double alpha;
  double var_of_sum;
  double sum_of_vars;
  /*
   `var_of_sum - sum_of_vars`.
   */
  double delta;
  VariskVerdict verdict;
  double tolerance;
} VariskReport;

typedef struct {
  uint64_t n;
  double theta1;
  double theta2;
  double p_loss_single;
  double p_loss_split;
  double expected_single;
  double expected_split;
  bool single_trip_prefers_split;
  bool long_run_prefers_split;
} VariskEggsReport;

typedef struct {
  double estimate;
  double ci_lower;
  double ci_upper;
  double ci_halfwidth;
  size_t samples;
} VariskMcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Version of the library, e.g. "0.1.0".
 */
const char *varisk_version(void);

/*
 The default convolution settings.
 */
VariskSettings varisk_settings_default(void);

/*
 Pareto with scale `beta` and tail index `delta`.

 # Safety
 `out` must be NULL or point to writable storage for a handle pointer.
 */
VariskStatus varisk_distribution_pareto(double beta, double delta, VariskDistribution **out);

/*
 # Safety
 As for [`varisk_distribution_pareto`].
 */
VariskStatus varisk_distribution_normal(double mu, double sigma, VariskDistribution **out);

/*
 # Safety
 As for [`varisk_distribution_pareto`].
 */
VariskStatus varisk_distribution_exponential(double rate, VariskDistribution **out);

/*
 # Safety
 As for [`varisk_distribution_pareto`].
 */
VariskStatus varisk_distribution_gamma(double shape, double rate, VariskDistribution **out);

/*
 `scale * inner + offset`. `inner` is copied, not consumed.

 # Safety
 `inner` must be NULL or a live handle; `out` as for [`varisk_distribution_pareto`].
 */
VariskStatus varisk_distribution_affine(const VariskDistribution *inner,
                                        double scale,
                                        double offset,
                                        VariskDistribution **out);

/*
 Parses `family:p1,p2` (pareto, normal, exp, gamma) or a JSON object.

 # Safety
 `text` must be NULL or a NUL-terminated string; `out` as for
 [`varisk_distribution_pareto`].
 */
VariskStatus varisk_distribution_parse(const char *text, VariskDistribution **out);

/*
 Releases a handle. NULL is ignored.

 # Safety
 `d` must be NULL or a handle from this library that has not been freed.
 */
void varisk_distribution_free(VariskDistribution *d);

/*
 Distribution function at `x`.

 # Safety
 `d` must be NULL or a live handle; `out` NULL or writable.
 */
VariskStatus varisk_cdf(const VariskDistribution *d, double x, double *out);

/*
 Survival function `1 - F(x)` at `x`.

 # Safety
 `d` must be NULL or a live handle; `out` NULL or writable.
 */
VariskStatus varisk_sf(const VariskDistribution *d, double x, double *out);

/*
 Density at `x`; zero outside the support.

 # Safety
 `d` must be NULL or a live handle; `out` NULL or writable.
 */
VariskStatus varisk_pdf(const VariskDistribution *d, double x, double *out);

/*
 Quantile at `u` in (0, 1).

 # Safety
 `d` must be NULL or a live handle; `out` NULL or writable.
 */
VariskStatus varisk_quantile(const VariskDistribution *d, double u, double *out);

/*
 VaR at level `alpha` in (0, 1).

 # Safety
 `d` must be NULL or a live handle; `out` NULL or writable.
 */
VariskStatus varisk_var(const VariskDistribution *d, double alpha, double *out);

/*
 VaR at `alpha` minus the median.

 # Safety
 `d` must be NULL or a live handle; `out` NULL or writable.
 */
VariskStatus varisk_excess_var(const VariskDistribution *d, double alpha, double *out);

/*
 # Safety
 `d` must be NULL or a live handle; `out` NULL or writable.
 */
VariskStatus varisk_median(const VariskDistribution *d, double *out);

/*
 Fails with `Domain` when the mean is infinite.

 # Safety
 `d` must be NULL or a live handle; `out` NULL or writable.
 */
VariskStatus varisk_mean(const VariskDistribution *d, double *out);

/*
 VaR of the comonotone sum of `count >= 2` components.

 # Safety
 `components` must point to `count` live handles; `out` NULL or writable.
 */
VariskStatus varisk_comonotone_var(const VariskDistribution *const *components,
                                   size_t count,
                                   double alpha,
                                   double *out);

/*
 `P(X + Y <= s)` for independent `X` and `Y`.

 # Safety
 `x`, `y` live handles; `settings` NULL or readable; `out` NULL or writable.
 */
VariskStatus varisk_independent_cdf(const VariskDistribution *x,
                                    const VariskDistribution *y,
                                    double s,
                                    const VariskSettings *settings,
                                    double *out);

/*
 VaR of `X + Y` for independent `X` and `Y`.

 # Safety
 As for [`varisk_independent_cdf`].
 */
VariskStatus varisk_independent_var(const VariskDistribution *x,
                                    const VariskDistribution *y,
                                    double alpha,
                                    const VariskSettings *settings,
                                    double *out);

/*
 VaR of the sum against the sum of VaRs. `dependence` is a
 [`VariskDependence`] value; `tolerance` sets the neutral band.

 # Safety
 As for [`varisk_independent_cdf`].
 */
VariskStatus varisk_compare(const VariskDistribution *x,
                            const VariskDistribution *y,
                            int32_t dependence,
                            double alpha,
                            const VariskSettings *settings,
                            double tolerance,
                            VariskReport *out);

/*
 Levels where VaR of the independent sum equals the sum of VaRs.

 Writes up to `capacity` roots to `roots` and the number found to `count`.
 If more were found than fit, returns `BufferTooSmall` with `count` set.

 # Safety
 `x`, `y` live handles; `settings` NULL or readable; `roots` writable for
 `capacity` doubles (may be NULL when `capacity` is 0); `count` writable.
 */
VariskStatus varisk_crossover(const VariskDistribution *x,
                              const VariskDistribution *y,
                              const VariskSettings *settings,
                              double *roots,
                              size_t capacity,
                              size_t *count);

/*
 One basket of `2n` eggs (failure probability `theta1`) against two of `n`
 (failure probability `theta2` each).

 # Safety
 `out` NULL or writable.
 */
VariskStatus varisk_eggs(uint64_t n, double theta1, double theta2, VariskEggsReport *out);

/*
 Monte Carlo VaR of a sum with a 99% order-statistic interval.
 Deterministic for a given `seed`; `samples` must be at least 10000.

 # Safety
 `components` must point to `count` live handles; `out` NULL or writable.
 */
VariskStatus varisk_mc_var(const VariskDistribution *const *components,
                           size_t count,
                           int32_t dependence,
                           double alpha,
                           size_t samples,
                           uint64_t seed,
                           VariskMcEstimate *out);

/*
 Message of the last failed call on this thread, or NULL if none failed yet.

 The pointer stays valid until the next failing call on the same thread.
 */
const char *varisk_last_error_message(void);

/*
 Static, NUL-terminated name of a status code; "Unknown" for other values.
 */
const char *varisk_status_name(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VARISK_H */

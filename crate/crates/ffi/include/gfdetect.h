#ifndef GFDETECT_H
#define GFDETECT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define GFD_TAIL_GAUSSIAN 0

#define GFD_TAIL_EXACT_CHI_SQUARE 1

#define GFD_XCORR_PAPER_UNIT 0

#define GFD_XCORR_TRUE_ZC 1

#define GFD_PROBE_SMALLEST 0

#define GFD_PROBE_LARGEST 1

#define GFD_MODE_MODEL_FAITHFUL 0

#define GFD_MODE_WAVEFORM 1

typedef enum GfdStatus {
  GFD_STATUS_OK = 0,
  GFD_STATUS_INVALID_ARGUMENT = 1,
  GFD_STATUS_DOMAIN = 2,
  GFD_STATUS_CAPACITY_EXCEEDED = 3,
  GFD_STATUS_CONFIG = 4,
  GFD_STATUS_IO = 5,
  GFD_STATUS_INTERNAL = 6,
  GFD_STATUS_NULL_POINTER = 7,
  GFD_STATUS_PANIC = 8,
} GfdStatus;

/**
 * Opaque system configuration.
 */
typedef struct GfdConfig GfdConfig;

typedef struct GfdThreshold {
  double omega;
  double achieved_miss;
  double analytic_pfa;
  size_t probe_group_size;
} GfdThreshold;

typedef struct GfdTrialReport {
  double empirical_pd;
  double empirical_pfa;
  double pd_ci_low;
  double pd_ci_high;
  double pfa_ci_low;
  double pfa_ci_high;
  uint64_t detections;
  uint64_t false_alarms;
  uint64_t pd_trials;
  uint64_t pfa_trials;
  size_t probe_user;
  size_t probe_group_size;
} GfdTrialReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *gfd_last_error_message(void);

/**
 * New config with default SNR (15 dB), noise variance `L`, Gaussian tail,
 * unit cross-correlation and the smallest probe group. Not validated here.
 */
struct GfdConfig *gfd_config_new(size_t antennas,
                                 size_t pilot_length,
                                 size_t users,
                                 double arrival_rate,
                                 double target_detection,
                                 double outage);

/**
 * # Safety
 * `config` must be null or a handle from [`gfd_config_new`] not yet freed.
 */
void gfd_config_free(struct GfdConfig *config);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum GfdStatus gfd_config_set_snr_db(struct GfdConfig *config, double snr_db);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum GfdStatus gfd_config_set_noise_variance(struct GfdConfig *config, double variance);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum GfdStatus gfd_config_set_users(struct GfdConfig *config, size_t users);

/**
 * `tail` is one of the `GFD_TAIL_*` constants.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum GfdStatus gfd_config_set_tail(struct GfdConfig *config, uint32_t tail);

/**
 * `model` is one of the `GFD_XCORR_*` constants.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum GfdStatus gfd_config_set_crosscorr(struct GfdConfig *config, uint32_t model);

/**
 * `group` is one of the `GFD_PROBE_*` constants.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum GfdStatus gfd_config_set_probe_group(struct GfdConfig *config, uint32_t group);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum GfdStatus gfd_config_validate(const struct GfdConfig *config);

/**
 * Threshold for the config's target detection probability.
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum GfdStatus gfd_solve_threshold(const struct GfdConfig *config, struct GfdThreshold *out);

/**
 * `P(Z ≤ omega | probe active)`.
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum GfdStatus gfd_miss_probability(const struct GfdConfig *config, double omega, double *out);

/**
 * `P(Z > omega | probe idle)`.
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum GfdStatus gfd_false_alarm_probability(const struct GfdConfig *config,
                                           double omega,
                                           double *out);

/**
 * Largest user group whose overload probability stays within `outage`.
 * Writes 0 when no group is feasible.
 *
 * # Safety
 * `out` must be writable.
 */
enum GfdStatus gfd_max_scheduling_size(size_t antennas,
                                       double arrival_rate,
                                       double outage,
                                       size_t *out);

/**
 * Smallest prime `L` with `L² − L ≥ kmax`.
 */
size_t gfd_min_pilot_length(size_t kmax);

/**
 * Writes the Zadoff-Chu sequence of `(length, root, shift)` into `re` and
 * `im`, each holding `capacity` doubles; `capacity` must be at least `length`.
 *
 * # Safety
 * `re` and `im` must each be writable for `capacity` doubles.
 */
enum GfdStatus gfd_zc_generate(size_t length,
                               size_t root,
                               size_t shift,
                               double *re,
                               double *im,
                               size_t capacity);

/**
 * Monte Carlo estimate at threshold `omega`. `mode` is a `GFD_MODE_*`
 * constant; `probe_user` is 1-based, or 0 for the config's probe group.
 *
 * # Safety
 * `config` must be a live handle and `out` writable.
 */
enum GfdStatus gfd_simulate(const struct GfdConfig *config,
                            uint32_t mode,
                            uint64_t trials,
                            uint64_t seed,
                            size_t probe_user,
                            double omega,
                            struct GfdTrialReport *out);

/**
 * Standard normal upper tail `Q(x)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GfdStatus gfd_q_function(double x, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GFDETECT_H */

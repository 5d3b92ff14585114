#ifndef DACR_H
#define DACR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum DacrStatus {
  DACR_STATUS_OK = 0,
  DACR_STATUS_NULL_POINTER = 1,
  DACR_STATUS_INVALID_ARGUMENT = 2,
  DACR_STATUS_EMPTY_SAMPLE = 3,
  DACR_STATUS_UNDEFINED_KAPPA = 4,
  DACR_STATUS_CONFIG_ERROR = 5,
  DACR_STATUS_INVALID_UTF8 = 6,
  DACR_STATUS_PANIC = 7,
} DacrStatus;

// Opaque experiment configuration.
typedef struct DacrConfig DacrConfig;

// Opaque experiment report.
typedef struct DacrReport DacrReport;

// Summary statistics of one strategy across replications.
typedef struct DacrStrategyStats {
  double mean_accuracy;
  // Sample variance (denominator k - 1) of the replication accuracies.
  double accuracy_variance;
  double average_grades;
  double grades_per_request;
  double in_conflict_rate;
} DacrStrategyStats;

// Latent-accuracy estimate from two duplicate projects.
typedef struct DacrLiemEstimate {
  uint64_t n;
  uint64_t matches;
  double y_hat;
  double mu_hat;
  double variance_bound;
  double band;
  double mu_low;
  double mu_high;
} DacrLiemEstimate;

typedef struct DacrKappa {
  double pr_a;
  double pr_e;
  double kappa;
} DacrKappa;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or NULL.
//
// The pointer stays valid until the next call into this library on the
// same thread. Do not free it.
const char *dacr_last_error_message(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and must not be used afterwards.
void dacr_string_free(char *s);

// A config holding the reference defaults. Never NULL.
struct DacrConfig *dacr_config_default(void);

// Parses config text (NUL-terminated UTF-8) into a new handle.
//
// # Safety
// `text` must be a valid C string and `out_config` a valid pointer.
enum DacrStatus dacr_config_parse(const char *text, struct DacrConfig **out_config);

// Releases a config handle. NULL is ignored.
//
// # Safety
// `config` must come from this library and must not be used afterwards.
void dacr_config_free(struct DacrConfig *config);

// # Safety
// `config` must be a live handle.
enum DacrStatus dacr_config_set_seed(struct DacrConfig *config, uint64_t master_seed);

// # Safety
// `config` must be a live handle.
enum DacrStatus dacr_config_set_replications(struct DacrConfig *config, uint32_t replications);

// # Safety
// `config` must be a live handle.
enum DacrStatus dacr_config_set_requests(struct DacrConfig *config, uint32_t requests);

// Canonical text form of a config; free with [`dacr_string_free`].
// Returns NULL if `config` is NULL.
//
// # Safety
// `config` must be NULL or a live handle.
char *dacr_config_render(const struct DacrConfig *config);

// Runs every configured strategy for the configured number of replications.
//
// # Safety
// `config` must be a live handle and `out_report` a valid pointer.
enum DacrStatus dacr_run_replications(const struct DacrConfig *config,
                                      struct DacrReport **out_report);

// Releases a report handle. NULL is ignored.
//
// # Safety
// `report` must come from this library and must not be used afterwards.
void dacr_report_free(struct DacrReport *report);

// Number of strategies in a report (0 for NULL).
//
// # Safety
// `report` must be NULL or a live handle.
size_t dacr_report_strategy_count(const struct DacrReport *report);

// Identifier of strategy `index` (e.g. `dacr-2-5`); free with
// [`dacr_string_free`]. NULL when out of range.
//
// # Safety
// `report` must be NULL or a live handle.
char *dacr_report_strategy_id(const struct DacrReport *report, size_t index);

// # Safety
// `report` must be a live handle and `out_stats` a valid pointer.
enum DacrStatus dacr_report_stats(const struct DacrReport *report,
                                  size_t index,
                                  struct DacrStrategyStats *out_stats);

// Expected agreement of two independent processes with accuracies `p`, `q`
// over `m` labels. `approximate` selects the `p * q` form.
//
// # Safety
// `out_value` must be a valid pointer.
enum DacrStatus dacr_expected_consistency(double p,
                                          double q,
                                          uint32_t m,
                                          bool approximate,
                                          double *out_value);

// # Safety
// `out_value` must be a valid pointer.
enum DacrStatus dacr_bhatia_davis_bound(double mu, double upper, double lower, double *out_value);

// # Safety
// `out_value` must be a valid pointer.
enum DacrStatus dacr_consistency_variance_bound(size_t n, double *out_value);

// Latent-accuracy estimate from two final-label arrays of length `len`.
// With `exclude_conflicts`, pairs involving `-1` are dropped instead of
// counted as mismatches.
//
// # Safety
// `labels_a` and `labels_b` must point to `len` readable values and
// `out_estimate` must be a valid pointer.
enum DacrStatus dacr_liem_estimate(const int64_t *labels_a,
                                   const int64_t *labels_b,
                                   size_t len,
                                   bool exclude_conflicts,
                                   struct DacrLiemEstimate *out_estimate);

// Cohen's kappa between two raters over `m` labels; `-1` entries form their
// own "in conflict" category.
//
// # Safety
// `labels_a` and `labels_b` must point to `len` readable values and
// `out_kappa` must be a valid pointer.
enum DacrStatus dacr_cohen_kappa(const int64_t *labels_a,
                                 const int64_t *labels_b,
                                 size_t len,
                                 uint32_t m,
                                 struct DacrKappa *out_kappa);

// Label held by more than half of `labels`, or `-1` if there is none.
//
// # Safety
// `labels` must point to `len` readable values and `out_label` must be a
// valid pointer.
enum DacrStatus dacr_strict_majority(const uint32_t *labels, size_t len, int64_t *out_label);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DACR_H */

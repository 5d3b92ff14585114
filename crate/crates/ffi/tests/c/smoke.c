#include <math.h>
#include <stdio.h>
#include <string.h>

#include "dacr.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  double v = 0.0;
  CHECK(dacr_bhatia_davis_bound(0.5, 1.0, 0.0, &v) == DACR_STATUS_OK && v == 0.25);
  CHECK(dacr_consistency_variance_bound(100, &v) == DACR_STATUS_OK && fabs(v - 5.15625e-3) < 1e-12);
  CHECK(dacr_expected_consistency(1.0, 1.0, 60, false, &v) == DACR_STATUS_OK && v == 1.0);

  CHECK(dacr_consistency_variance_bound(0, &v) == DACR_STATUS_INVALID_ARGUMENT);
  CHECK(dacr_last_error_message() != NULL);

  int64_t a[] = {0, 1, 2, -1};
  int64_t b[] = {0, 1, 3, 2};
  DacrLiemEstimate est;
  CHECK(dacr_liem_estimate(a, b, 4, false, &est) == DACR_STATUS_OK);
  CHECK(est.n == 4 && est.matches == 2 && est.y_hat == 0.5);
  CHECK(dacr_liem_estimate(a, b, 4, true, &est) == DACR_STATUS_OK && est.n == 3);

  uint32_t grades[] = {4, 7, 4};
  int64_t winner = 0;
  CHECK(dacr_strict_majority(grades, 3, &winner) == DACR_STATUS_OK && winner == 4);
  CHECK(dacr_strict_majority(grades, 2, &winner) == DACR_STATUS_OK && winner == -1);

  const char *text = "[experiment]\nreplications = 3\n[batch]\nrequests = 200\n";
  DacrConfig *cfg = NULL;
  CHECK(dacr_config_parse(text, &cfg) == DACR_STATUS_OK && cfg != NULL);
  CHECK(dacr_config_set_seed(cfg, 11) == DACR_STATUS_OK);
  char *rendered = dacr_config_render(cfg);
  CHECK(rendered != NULL && strstr(rendered, "master_seed = 11") != NULL);
  dacr_string_free(rendered);

  DacrReport *report = NULL;
  CHECK(dacr_run_replications(cfg, &report) == DACR_STATUS_OK);
  CHECK(dacr_report_strategy_count(report) == 5);
  for (size_t i = 0; i < 5; i++) {
    DacrStrategyStats stats;
    CHECK(dacr_report_stats(report, i, &stats) == DACR_STATUS_OK);
    CHECK(stats.mean_accuracy > 0.5 && stats.mean_accuracy <= 1.0);
    char *id = dacr_report_strategy_id(report, i);
    CHECK(id != NULL);
    printf("%s %.4f %.1f\n", id, stats.mean_accuracy, stats.average_grades);
    dacr_string_free(id);
  }
  DacrStrategyStats stats;
  CHECK(dacr_report_stats(report, 5, &stats) == DACR_STATUS_INVALID_ARGUMENT);
  dacr_report_free(report);
  dacr_config_free(cfg);

  CHECK(dacr_config_parse("[batch]\nlabels = 1\n", &cfg) == DACR_STATUS_CONFIG_ERROR && cfg == NULL);
  printf("ok\n");
  return 0;
}

/* SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <stdio.h>
#include <string.h>

#include "cafeen/cafeen.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static int progress_calls = 0;

static void on_progress(const cafeen_run_summary* run, void* user) {
  (void)user;
  EXPECT(run->status == CAFEEN_RUN_OK);
  ++progress_calls;
}

static void check_errors(void) {
  cafeen_config* cfg = NULL;
  const char* bad[] = {"traffic.pri=0.1"};
  EXPECT(cafeen_config_load(NULL, bad, 1, &cfg) == CAFEEN_ERR_CONFIG);
  EXPECT(cfg == NULL);
  EXPECT(strstr(cafeen_last_error(), "traffic.pir") != NULL);

  const char* odd[] = {"router.vcs_per_port=3"};
  EXPECT(cafeen_config_load(NULL, odd, 1, &cfg) == CAFEEN_ERR_CONFIG);
  EXPECT(strcmp(cafeen_last_error(), "vcs_per_port must be even for VC partitioning") == 0);

  EXPECT(cafeen_config_load("/nonexistent/cafeen.json", NULL, 0, &cfg) != CAFEEN_OK);
  EXPECT(cafeen_config_load(NULL, NULL, 0, NULL) == CAFEEN_ERR_ARGUMENT);
  EXPECT(cafeen_results_count(NULL) == 0);
  EXPECT(cafeen_run(NULL, 1, NULL, NULL, NULL) == CAFEEN_ERR_ARGUMENT);
}

static void check_run(void) {
  const char* overrides[] = {"mesh.rows=4", "mesh.cols=4", "traffic.total_packets=300",
                             "run.policies=NoPg,CafeenFull", "traffic.pir=0.02"};
  cafeen_config* cfg = NULL;
  EXPECT(cafeen_config_load("", overrides, 5, &cfg) == CAFEEN_OK);
  EXPECT(cafeen_config_set(cfg, "pg.fine_t_idle=1") == CAFEEN_OK);
  EXPECT(cafeen_config_set(cfg, "pg.nope=1") == CAFEEN_ERR_CONFIG);

  char* warnings = NULL;
  EXPECT(cafeen_config_warnings(cfg, &warnings) == CAFEEN_OK);
  EXPECT(strstr(warnings, "pg.fine_t_idle") != NULL);
  cafeen_free_string(warnings);

  char* json = NULL;
  EXPECT(cafeen_config_json(cfg, &json) == CAFEEN_OK);
  EXPECT(strstr(json, "\"rows\": 4") != NULL);
  cafeen_free_string(json);

  cafeen_results* res = NULL;
  EXPECT(cafeen_run(cfg, 2, on_progress, NULL, &res) == CAFEEN_OK);
  EXPECT(progress_calls == 2);
  EXPECT(cafeen_results_count(res) == 2);
  EXPECT(cafeen_results_exit_code(res) == 0);

  cafeen_run_summary s;
  EXPECT(cafeen_results_get(res, 0, &s) == CAFEEN_OK);
  EXPECT(strcmp(s.policy, "NoPg") == 0);
  EXPECT(strcmp(s.pattern, "uniform_random") == 0);
  EXPECT(s.packets_ejected == 300);
  EXPECT(s.coarse_wakes == 0 && s.fine_wakes == 0);
  EXPECT(cafeen_results_get(res, 1, &s) == CAFEEN_OK);
  EXPECT(strcmp(s.policy, "CafeenFull") == 0);
  EXPECT(s.energy_total > 0.0);
  EXPECT(cafeen_results_get(res, 2, &s) == CAFEEN_ERR_RANGE);

  char* results = NULL;
  EXPECT(cafeen_results_json(res, &results) == CAFEEN_OK);
  EXPECT(strstr(results, "\"runs\"") != NULL);
  cafeen_free_string(results);

  cafeen_results_free(res);
  cafeen_config_free(cfg);
}

static void check_timeout(void) {
  const char* overrides[] = {"mesh.rows=4", "mesh.cols=4", "traffic.pir=0.3", "traffic.total_packets=100000",
                             "run.max_cycles=200", "run.policies=NoPg"};
  cafeen_config* cfg = NULL;
  cafeen_results* res = NULL;
  EXPECT(cafeen_config_load(NULL, overrides, 6, &cfg) == CAFEEN_OK);
  EXPECT(cafeen_run(cfg, 1, NULL, NULL, &res) == CAFEEN_OK);
  cafeen_run_summary s;
  EXPECT(cafeen_results_get(res, 0, &s) == CAFEEN_OK);
  EXPECT(s.status == CAFEEN_RUN_TIMEOUT);
  EXPECT(strlen(s.message) > 0);
  EXPECT(cafeen_results_exit_code(res) == 3);
  cafeen_results_free(res);
  cafeen_config_free(cfg);
}

int main(void) {
  EXPECT(strlen(cafeen_version()) > 0);
  check_errors();
  check_run();
  check_timeout();
  if (failures) {
    fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}

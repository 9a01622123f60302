/*
 * SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

/* C interface to the cafeen-noc mesh simulator. */

#ifndef CAFEEN_CAFEEN_H
#define CAFEEN_CAFEEN_H

#include <stddef.h>

#if defined(_WIN32)
#define CAFEEN_API __declspec(dllexport)
#elif defined(__GNUC__)
#define CAFEEN_API __attribute__((visibility("default")))
#else
#define CAFEEN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cafeen_status {
  CAFEEN_OK = 0,
  CAFEEN_ERR_ARGUMENT = 1, /* null handle or bad argument */
  CAFEEN_ERR_CONFIG = 2,   /* config parse or validation error */
  CAFEEN_ERR_IO = 3,
  CAFEEN_ERR_INTERNAL = 4,
  CAFEEN_ERR_RANGE = 5 /* index out of range */
} cafeen_status;

/* Outcome of one simulation run. */
typedef enum cafeen_run_status {
  CAFEEN_RUN_OK = 0,
  CAFEEN_RUN_DEADLOCK = 1,
  CAFEEN_RUN_TIMEOUT = 2,
  CAFEEN_RUN_FAILED = 3
} cafeen_run_status;

typedef struct cafeen_config cafeen_config;
typedef struct cafeen_results cafeen_results;

typedef struct cafeen_run_summary {
  const char* policy;
  const char* pattern;
  double pir;
  cafeen_run_status status;
  const char* message; /* empty on success */
  long long cycles;
  unsigned long long packets_ejected;
  double avg_latency;
  double p99_latency;
  double energy_total;
  unsigned long long fine_wakes;
  unsigned long long coarse_wakes;
} cafeen_run_summary;

typedef void (*cafeen_progress_fn)(const cafeen_run_summary* run, void* user);
typedef void (*cafeen_verify_fn)(int id, int passed, const char* line, void* user);

CAFEEN_API const char* cafeen_version(void);

/* Message for the most recent failing call on this thread. */
CAFEEN_API const char* cafeen_last_error(void);

CAFEEN_API void cafeen_free_string(char* s);

/* Loads a JSON config (path may be NULL or empty for defaults) and applies
 * `key=value` overrides with dotted keys. */
CAFEEN_API cafeen_status cafeen_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                                            cafeen_config** out);
CAFEEN_API cafeen_status cafeen_config_set(cafeen_config* cfg, const char* key_value);
CAFEEN_API void cafeen_config_free(cafeen_config* cfg);

/* Fully resolved config as JSON. Free with cafeen_free_string. */
CAFEEN_API cafeen_status cafeen_config_json(const cafeen_config* cfg, char** out);

/* Newline-separated warnings, empty if none. Free with cafeen_free_string. */
CAFEEN_API cafeen_status cafeen_config_warnings(const cafeen_config* cfg, char** out);

/* Output directory named by the config (run.out_dir). */
CAFEEN_API const char* cafeen_config_out_dir(const cafeen_config* cfg);

/* Runs every (policy, pattern, pir) point. Run failures are reported in the
 * results, not as an error status. */
CAFEEN_API cafeen_status cafeen_run(const cafeen_config* cfg, int jobs, cafeen_progress_fn progress, void* user,
                                    cafeen_results** out);

CAFEEN_API size_t cafeen_results_count(const cafeen_results* res);
CAFEEN_API cafeen_status cafeen_results_get(const cafeen_results* res, size_t index, cafeen_run_summary* out);

/* Writes results.json and results.csv into dir. */
CAFEEN_API cafeen_status cafeen_results_write(const cafeen_results* res, const char* dir);
CAFEEN_API cafeen_status cafeen_results_json(const cafeen_results* res, char** out);

/* 0 all runs ok, 2 a deadlock, 3 a timeout, 1 any other failure. */
CAFEEN_API int cafeen_results_exit_code(const cafeen_results* res);
CAFEEN_API void cafeen_results_free(cafeen_results* res);

/* Runs the first Q-learning sweep point and writes qtables-<cycle>.csv into
 * dir every `interval` cycles. */
CAFEEN_API cafeen_status cafeen_dump_qtables(const cafeen_config* cfg, long long interval, const char* dir,
                                             int* files_written);

/* Runs the built-in acceptance criteria (all when only == 0). */
CAFEEN_API cafeen_status cafeen_verify(int only, cafeen_verify_fn callback, void* user, int* failed);

#ifdef __cplusplus
}
#endif

#endif

// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "cafeen/cafeen.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "acceptance.hpp"
#include "results.hpp"

struct cafeen_config {
  cafeen::Experiment experiment;
  std::string out_dir;
};

struct cafeen_results {
  cafeen::Experiment experiment;
  std::vector<cafeen::RunResult> runs;
};

namespace {

thread_local std::string g_last_error;

cafeen_status fail(cafeen_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename F>
cafeen_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const cafeen::ConfigError& e) {
    return fail(CAFEEN_ERR_CONFIG, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(CAFEEN_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(CAFEEN_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

cafeen_run_status run_status(cafeen::RunStatus s) {
  switch (s) {
    case cafeen::RunStatus::Ok: return CAFEEN_RUN_OK;
    case cafeen::RunStatus::Deadlock: return CAFEEN_RUN_DEADLOCK;
    case cafeen::RunStatus::Timeout: return CAFEEN_RUN_TIMEOUT;
    case cafeen::RunStatus::Failed: break;
  }
  return CAFEEN_RUN_FAILED;
}

void summarize(const cafeen::RunResult& r, cafeen_run_summary* out) {
  out->policy = cafeen::to_string(r.config.policy);
  out->pattern = cafeen::to_string(r.config.traffic.pattern);
  out->pir = r.config.traffic.pir;
  out->status = run_status(r.status);
  out->message = r.message.c_str();
  out->cycles = r.metrics.cycles;
  out->packets_ejected = r.metrics.packets_ejected;
  out->avg_latency = r.metrics.avg_latency;
  out->p99_latency = r.metrics.p99_latency;
  out->energy_total = r.metrics.energy.total();
  out->fine_wakes = r.metrics.fine_wakes;
  out->coarse_wakes = r.metrics.coarse_wakes;
}

}  // namespace

extern "C" {

const char* cafeen_version(void) { return cafeen::version_string(); }

const char* cafeen_last_error(void) { return g_last_error.c_str(); }

void cafeen_free_string(char* s) { std::free(s); }

cafeen_status cafeen_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                                 cafeen_config** out) {
  if (!out || (n_overrides && !overrides)) return fail(CAFEEN_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::string> ov;
    for (size_t i = 0; i < n_overrides; ++i) {
      if (!overrides[i]) return fail(CAFEEN_ERR_ARGUMENT, "null override");
      ov.emplace_back(overrides[i]);
    }
    auto* c = new cafeen_config{cafeen::load_experiment_file(path ? path : "", ov), {}};
    c->out_dir = c->experiment.out_dir;
    *out = c;
    return CAFEEN_OK;
  });
}

cafeen_status cafeen_config_set(cafeen_config* cfg, const char* key_value) {
  if (!cfg || !key_value) return fail(CAFEEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->experiment = cafeen::load_experiment(cafeen::to_json(cfg->experiment), {key_value});
    cfg->out_dir = cfg->experiment.out_dir;
    return CAFEEN_OK;
  });
}

void cafeen_config_free(cafeen_config* cfg) { delete cfg; }

cafeen_status cafeen_config_json(const cafeen_config* cfg, char** out) {
  if (!cfg || !out) return fail(CAFEEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(cafeen::to_json(cfg->experiment).dump(2));
    return CAFEEN_OK;
  });
}

cafeen_status cafeen_config_warnings(const cafeen_config* cfg, char** out) {
  if (!cfg || !out) return fail(CAFEEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::string text;
    for (const std::string& w : cfg->experiment.base.warnings()) text += w + "\n";
    *out = dup(text);
    return CAFEEN_OK;
  });
}

const char* cafeen_config_out_dir(const cafeen_config* cfg) { return cfg ? cfg->out_dir.c_str() : ""; }

cafeen_status cafeen_run(const cafeen_config* cfg, int jobs, cafeen_progress_fn progress, void* user,
                         cafeen_results** out) {
  if (!cfg || !out) return fail(CAFEEN_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* res = new cafeen_results{cfg->experiment, {}};
    res->runs = cafeen::run_sweep(cfg->experiment, jobs, [&](const cafeen::RunResult& r) {
      if (!progress) return;
      cafeen_run_summary s;
      summarize(r, &s);
      progress(&s, user);
    });
    *out = res;
    return CAFEEN_OK;
  });
}

size_t cafeen_results_count(const cafeen_results* res) { return res ? res->runs.size() : 0; }

cafeen_status cafeen_results_get(const cafeen_results* res, size_t index, cafeen_run_summary* out) {
  if (!res || !out) return fail(CAFEEN_ERR_ARGUMENT, "null argument");
  if (index >= res->runs.size()) return fail(CAFEEN_ERR_RANGE, "result index out of range");
  summarize(res->runs[index], out);
  return CAFEEN_OK;
}

cafeen_status cafeen_results_write(const cafeen_results* res, const char* dir) {
  if (!res || !dir) return fail(CAFEEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    cafeen::write_results(dir, res->experiment, res->runs);
    return CAFEEN_OK;
  });
}

cafeen_status cafeen_results_json(const cafeen_results* res, char** out) {
  if (!res || !out) return fail(CAFEEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(cafeen::results_json(res->experiment, res->runs).dump(2));
    return CAFEEN_OK;
  });
}

int cafeen_results_exit_code(const cafeen_results* res) { return res ? cafeen::exit_code(res->runs) : 1; }

void cafeen_results_free(cafeen_results* res) { delete res; }

cafeen_status cafeen_dump_qtables(const cafeen_config* cfg, long long interval, const char* dir,
                                  int* files_written) {
  if (!cfg || !dir) return fail(CAFEEN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const cafeen::Experiment& e = cfg->experiment;
    for (cafeen::Policy p : e.policies) {
      if (!cafeen::traits(p).marl) continue;
      const int n = cafeen::dump_qtables(e.point(p, e.patterns.front(), e.pirs.front()), interval, dir);
      if (files_written) *files_written = n;
      return CAFEEN_OK;
    }
    return fail(CAFEEN_ERR_CONFIG, "no Q-tables under this policy");
  });
}

cafeen_status cafeen_verify(int only, cafeen_verify_fn callback, void* user, int* failed) {
  if (only < 0 || only > cafeen::kNumCriteria)
    return fail(CAFEEN_ERR_ARGUMENT, "criterion must be between 1 and " + std::to_string(cafeen::kNumCriteria));
  return guarded([&] {
    cafeen::AcceptanceOptions opts;
    opts.only = only;
    int n_failed = 0;
    cafeen::run_acceptance(opts, [&](const cafeen::CriterionResult& r) {
      if (!r.passed) ++n_failed;
      if (callback) callback(r.id, r.passed ? 1 : 0, cafeen::format_criterion(r).c_str(), user);
    });
    if (failed) *failed = n_failed;
    return CAFEEN_OK;
  });
}

}  // extern "C"

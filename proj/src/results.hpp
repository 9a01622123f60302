// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "config_io.hpp"
#include "engine.hpp"

namespace cafeen {

struct RunResult {
  SimConfig config;
  RunStatus status = RunStatus::Ok;
  std::string message;
  Metrics metrics;
};

/// Runs one resolved configuration, turning failures into a status.
RunResult run_one(const SimConfig& cfg);

/// Runs every sweep point, pattern-major then PIR then policy. Results come
/// back in that order whatever `jobs` is.
std::vector<RunResult> run_sweep(const Experiment& e, int jobs,
                                 const std::function<void(const RunResult&)>& on_done = {});

Json metrics_json(const Metrics& m);
/// Full results document: version, seed, resolved config and every run.
Json results_json(const Experiment& e, const std::vector<RunResult>& runs);

/// Flat table normalized to the NoPg run of each (pattern, pir) group, or to
/// the group's first run when NoPg is absent.
std::string results_csv(const std::vector<RunResult>& runs);

/// Writes results.json and results.csv into `dir`, creating it if needed.
void write_results(const std::string& dir, const Experiment& e, const std::vector<RunResult>& runs);

/// Process exit code for a set of runs: 0 ok, 2 deadlock, 3 timeout.
int exit_code(const std::vector<RunResult>& runs);

/// Q-tables of every router as CSV rows `router,state_key,action,q_value`.
std::string qtable_csv(const std::vector<Router>& routers);

/// Runs `cfg` and writes qtables-<cycle>.csv into `dir` every `interval`
/// cycles, starting at cycle 0. Returns the number of files written.
/// Throws ConfigError if the policy keeps no Q-tables.
int dump_qtables(const SimConfig& cfg, Cycle interval, const std::string& dir, RunResult* result = nullptr);

const char* version_string();

}  // namespace cafeen

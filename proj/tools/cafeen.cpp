// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C API.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "cafeen/cafeen.h"

namespace {

constexpr int kExitValidation = 1;

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out_dir;
  long long seed = -1;
  int jobs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "JSON config file (defaults when omitted)");
  cmd->add_option("--set", c.sets, "Override a config key, e.g. --set traffic.pir=0.01,0.05")->take_all();
  cmd->add_option("-o,--out-dir", c.out_dir, "Output directory (run.out_dir)");
  cmd->add_option("--seed", c.seed, "Master seed (traffic.seed)")->check(CLI::NonNegativeNumber);
}

using ConfigPtr = std::unique_ptr<cafeen_config, decltype(&cafeen_config_free)>;
using ResultsPtr = std::unique_ptr<cafeen_results, decltype(&cafeen_results_free)>;

ConfigPtr load(const Common& c) {
  std::vector<std::string> all = c.sets;
  if (c.seed >= 0) all.push_back("traffic.seed=" + std::to_string(c.seed));
  if (!c.out_dir.empty()) {
    std::string quoted = "\"";
    for (char ch : c.out_dir) {
      if (ch == '"' || ch == '\\') quoted += '\\';
      quoted += ch;
    }
    all.push_back("run.out_dir=" + quoted + "\"");
  }
  std::vector<const char*> argv;
  for (const std::string& s : all) argv.push_back(s.c_str());
  cafeen_config* cfg = nullptr;
  if (cafeen_config_load(c.config.c_str(), argv.data(), argv.size(), &cfg) != CAFEEN_OK) {
    std::fprintf(stderr, "error: %s\n", cafeen_last_error());
    return ConfigPtr(nullptr, cafeen_config_free);
  }
  char* warnings = nullptr;
  if (cafeen_config_warnings(cfg, &warnings) == CAFEEN_OK && warnings && *warnings)
    std::fprintf(stderr, "warning: %s", warnings);
  cafeen_free_string(warnings);
  return ConfigPtr(cfg, cafeen_config_free);
}

void print_progress(const cafeen_run_summary* r, void*) {
  if (r->status == CAFEEN_RUN_OK) {
    std::fprintf(stderr, "%-15s %-15s pir=%-8g cycles=%-9lld latency=%-9.3f energy=%.6g\n", r->policy, r->pattern,
                 r->pir, r->cycles, r->avg_latency, r->energy_total);
  } else {
    std::fprintf(stderr, "%-15s %-15s pir=%-8g FAILED: %s\n", r->policy, r->pattern, r->pir, r->message);
  }
}

ResultsPtr run_and_write(cafeen_config* cfg, int jobs, int& exit_code) {
  cafeen_results* res = nullptr;
  if (cafeen_run(cfg, jobs, print_progress, nullptr, &res) != CAFEEN_OK) {
    std::fprintf(stderr, "error: %s\n", cafeen_last_error());
    exit_code = kExitValidation;
    return ResultsPtr(nullptr, cafeen_results_free);
  }
  ResultsPtr owned(res, cafeen_results_free);
  const char* dir = cafeen_config_out_dir(cfg);
  if (cafeen_results_write(res, dir) != CAFEEN_OK) {
    std::fprintf(stderr, "error: %s\n", cafeen_last_error());
    exit_code = kExitValidation;
    return owned;
  }
  std::fprintf(stderr, "wrote %s/results.json and %s/results.csv\n", dir, dir);
  exit_code = cafeen_results_exit_code(res);
  return owned;
}

int cmd_run(const Common& c, bool print_config) {
  ConfigPtr cfg = load(c);
  if (!cfg) return kExitValidation;
  if (print_config) {
    char* json = nullptr;
    cafeen_config_json(cfg.get(), &json);
    std::printf("%s\n", json);
    cafeen_free_string(json);
    return 0;
  }
  int code = 0;
  run_and_write(cfg.get(), c.jobs, code);
  return code;
}

int cmd_compare(const Common& c) {
  Common all = c;
  bool has_policies = false;
  for (const std::string& s : c.sets) has_policies = has_policies || s.rfind("run.policies=", 0) == 0;
  if (!has_policies) all.sets.insert(all.sets.begin(), "run.policies=NoPg,ConvXy,TootCoarse,CafeenFineOnly,CafeenFull");
  ConfigPtr cfg = load(all);
  if (!cfg) return kExitValidation;
  int code = 0;
  ResultsPtr res = run_and_write(cfg.get(), c.jobs, code);
  if (!res) return code;

  std::vector<cafeen_run_summary> rows(cafeen_results_count(res.get()));
  for (std::size_t i = 0; i < rows.size(); ++i) cafeen_results_get(res.get(), i, &rows[i]);
  std::map<std::tuple<std::string, double>, const cafeen_run_summary*> base;
  for (const cafeen_run_summary& r : rows) {
    auto key = std::make_tuple(std::string(r.pattern), r.pir);
    if (!base.count(key) || std::string(r.policy) == "NoPg") base[key] = &r;
  }
  std::printf("%-15s %-15s %-8s %12s %10s %10s %10s\n", "pattern", "policy", "pir", "energy", "norm_E", "latency",
              "norm_lat");
  for (const cafeen_run_summary& r : rows) {
    const cafeen_run_summary* b = base[std::make_tuple(std::string(r.pattern), r.pir)];
    const double ne = b->energy_total > 0 ? r.energy_total / b->energy_total : 0;
    const double nl = b->avg_latency > 0 ? r.avg_latency / b->avg_latency : 0;
    std::printf("%-15s %-15s %-8g %12.6g %10.4f %10.3f %10.4f%s\n", r.pattern, r.policy, r.pir, r.energy_total, ne,
                r.avg_latency, nl, r.status == CAFEEN_RUN_OK ? "" : "  (failed)");
  }
  return code;
}

int cmd_dump(const Common& c, long long interval) {
  ConfigPtr cfg = load(c);
  if (!cfg) return kExitValidation;
  const std::string dir = cafeen_config_out_dir(cfg.get());
  int files = 0;
  if (cafeen_dump_qtables(cfg.get(), interval, dir.c_str(), &files) != CAFEEN_OK) {
    std::fprintf(stderr, "error: %s\n", cafeen_last_error());
    return kExitValidation;
  }
  std::fprintf(stderr, "wrote %d Q-table snapshots to %s\n", files, dir.c_str());
  return 0;
}

void print_criterion(int, int, const char* line, void*) {
  std::printf("%s\n", line);
  std::fflush(stdout);
}

int cmd_verify(int only) {
  int failed = 0;
  if (cafeen_verify(only, print_criterion, nullptr, &failed) != CAFEEN_OK) {
    std::fprintf(stderr, "error: %s\n", cafeen_last_error());
    return kExitValidation;
  }
  std::printf("%s\n", failed == 0 ? "all criteria passed" : (std::to_string(failed) + " criteria failed").c_str());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-driven 2D-mesh NoC simulator with adaptive power gating"};
  app.set_version_flag("--version", cafeen_version());
  app.require_subcommand(1);

  Common common;
  bool print_config = false;
  auto* run = app.add_subcommand("run", "Run every (policy, pattern, pir) point and write results");
  add_common(run, common);
  run->add_option("-j,--jobs", common.jobs, "Parallel simulations")->check(CLI::PositiveNumber);
  run->add_flag("--print-config", print_config, "Print the resolved config and exit");

  auto* compare = app.add_subcommand("compare", "Run all policies and print a table normalized to NoPg");
  add_common(compare, common);
  compare->add_option("-j,--jobs", common.jobs, "Parallel simulations")->check(CLI::PositiveNumber);

  long long interval = 1000;
  auto* dump = app.add_subcommand("dump-qtables", "Write Q-table snapshots at a fixed cycle interval");
  add_common(dump, common);
  dump->add_option("-i,--interval", interval, "Cycles between snapshots")->check(CLI::PositiveNumber);

  int only = 0;
  auto* verify = app.add_subcommand("verify", "Run the built-in acceptance criteria");
  verify->add_option("--criterion", only, "Run a single criterion")->check(CLI::Range(1, 10));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (*run) return cmd_run(common, print_config);
  if (*compare) return cmd_compare(common);
  if (*dump) return cmd_dump(common, interval);
  return cmd_verify(only);
}

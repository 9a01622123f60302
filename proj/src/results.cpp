// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "results.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace cafeen {

const char* version_string() { return CAFEEN_VERSION; }

RunResult run_one(const SimConfig& cfg) {
  RunResult r;
  r.config = cfg;
  try {
    Simulation sim(cfg);
    r.metrics = sim.run();
  } catch (const SimulationError& e) {
    r.status = e.status();
    r.message = e.what();
    r.metrics = e.partial();
  } catch (const std::exception& e) {
    r.status = RunStatus::Failed;
    r.message = e.what();
  }
  r.metrics.status = r.status;
  r.metrics.message = r.message;
  return r;
}

std::vector<RunResult> run_sweep(const Experiment& e, int jobs,
                                 const std::function<void(const RunResult&)>& on_done) {
  std::vector<SimConfig> points;
  for (Pattern t : e.patterns)
    for (double pir : e.pirs)
      for (Policy p : e.policies) points.push_back(e.point(p, t, pir));

  std::vector<RunResult> out(points.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      out[i] = run_one(points[i]);
      if (on_done) {
        std::lock_guard<std::mutex> lock(report);
        on_done(out[i]);
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(points.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

Json metrics_json(const Metrics& m) {
  Json j;
  j["status"] = to_string(m.status);
  j["message"] = m.message;
  j["cycles"] = m.cycles;
  j["packets_created"] = m.packets_created;
  j["packets_ejected"] = m.packets_ejected;
  j["packets_measured"] = m.packets_measured;
  j["latency"] = {{"avg", m.avg_latency}, {"p50", m.p50_latency}, {"p95", m.p95_latency},
                  {"p99", m.p99_latency}, {"max", m.max_latency}};
  j["avg_hops"] = m.avg_hops;
  j["avg_wake_wait"] = m.avg_wake_wait;
  j["fine_wakes"] = m.fine_wakes;
  j["coarse_wakes"] = m.coarse_wakes;
  j["mode_switches"] = m.mode_switches;
  j["epochs"] = m.epochs;
  j["single_active_buffer_share"] = m.single_active_buffer_share();
  j["active_buffer_hist"] = m.active_buffer_hist;
  j["powered_buffer_hist"] = m.powered_buffer_hist;
  Json turns = Json::object();
  for (const auto& [k, v] : m.turns_per_epoch_hist) turns[std::to_string(k)] = v;
  j["turns_per_epoch_hist"] = turns;
  j["coarse_residency"] = m.coarse_residency;

  Json energy;
  energy["total"] = m.energy.total();
  Json cats = Json::object();
  Json comps = Json::object();
  for (int c = 0; c < kEnergyCategories; ++c)
    cats[to_string(static_cast<EnergyCategory>(c))] = m.energy.total(static_cast<EnergyCategory>(c));
  for (int c = 0; c < kEnergyComponents; ++c)
    comps[to_string(static_cast<EnergyComponent>(c))] = m.energy.total(static_cast<EnergyComponent>(c));
  energy["by_category"] = cats;
  energy["by_component"] = comps;
  const auto table = m.energy.totals();
  Json matrix = Json::object();
  for (int c = 0; c < kEnergyCategories; ++c) {
    Json row = Json::object();
    for (int k = 0; k < kEnergyComponents; ++k)
      row[to_string(static_cast<EnergyComponent>(k))] =
          table[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
    matrix[to_string(static_cast<EnergyCategory>(c))] = row;
  }
  energy["matrix"] = matrix;
  Json per_router = Json::array();
  for (int r = 0; r < m.energy.routers(); ++r) per_router.push_back(m.energy.router_total(r));
  energy["per_router"] = per_router;
  j["energy"] = energy;
  return j;
}

Json results_json(const Experiment& e, const std::vector<RunResult>& runs) {
  Json root;
  root["artifact"] = "cafeen-noc";
  root["version"] = version_string();
  root["seed"] = e.base.seed;
  root["config"] = to_json(e);
  Json list = Json::array();
  for (const RunResult& r : runs) {
    Json j;
    j["policy"] = to_string(r.config.policy);
    j["pattern"] = to_string(r.config.traffic.pattern);
    j["pir"] = r.config.traffic.pir;
    j["metrics"] = metrics_json(r.metrics);
    list.push_back(j);
  }
  root["runs"] = list;
  return root;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

double ratio(double a, double b) { return b > 0 ? a / b : 0.0; }

}  // namespace

std::string results_csv(const std::vector<RunResult>& runs) {
  std::ostringstream os;
  os << "policy,pattern,pir,status,cycles,packets_ejected,avg_latency,p50_latency,p95_latency,p99_latency,"
        "max_latency,avg_hops,avg_wake_wait,fine_wakes,coarse_wakes,mode_switches,epochs,energy_total,"
        "energy_static,energy_dynamic,energy_wakeup,energy_overhead,baseline,norm_energy,norm_latency,"
        "norm_exec_time\n";
  for (const RunResult& r : runs) {
    const RunResult* base = nullptr;
    for (const RunResult& c : runs) {
      if (c.config.traffic.pattern != r.config.traffic.pattern || c.config.traffic.pir != r.config.traffic.pir)
        continue;
      if (!base) base = &c;
      if (c.config.policy == Policy::NoPg) {
        base = &c;
        break;
      }
    }
    const Metrics& m = r.metrics;
    const Metrics& b = base->metrics;
    os << to_string(r.config.policy) << ',' << to_string(r.config.traffic.pattern) << ',' << num(r.config.traffic.pir)
       << ',' << to_string(r.status) << ',' << m.cycles << ',' << m.packets_ejected << ',' << num(m.avg_latency)
       << ',' << num(m.p50_latency) << ',' << num(m.p95_latency) << ',' << num(m.p99_latency) << ','
       << m.max_latency << ',' << num(m.avg_hops) << ',' << num(m.avg_wake_wait) << ',' << m.fine_wakes << ','
       << m.coarse_wakes << ',' << m.mode_switches << ',' << m.epochs << ',' << num(m.energy.total()) << ','
       << num(m.energy.total(EnergyCategory::Static)) << ',' << num(m.energy.total(EnergyCategory::Dynamic)) << ','
       << num(m.energy.total(EnergyCategory::Wakeup)) << ',' << num(m.energy.total(EnergyCategory::Overhead))
       << ',' << to_string(base->config.policy) << ',' << num(ratio(m.energy.total(), b.energy.total())) << ','
       << num(ratio(m.avg_latency, b.avg_latency)) << ','
       << num(ratio(static_cast<double>(m.cycles), static_cast<double>(b.cycles))) << '\n';
  }
  return os.str();
}

void write_results(const std::string& dir, const Experiment& e, const std::vector<RunResult>& runs) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  {
    std::ofstream out(root / "results.json");
    if (!out) throw ConfigError("cannot write " + (root / "results.json").string());
    out << results_json(e, runs).dump(2) << '\n';
  }
  std::ofstream out(root / "results.csv");
  if (!out) throw ConfigError("cannot write " + (root / "results.csv").string());
  out << results_csv(runs);
}

std::string qtable_csv(const std::vector<Router>& routers) {
  std::ostringstream os;
  os << "router,state_key,action,q_value\n";
  for (const Router& r : routers) {
    const QTable& q = r.qtable();
    for (int s = 0; s < q.num_states(); ++s) {
      const StateKey key = q.key_at(s);
      for (RouteAction a : {RouteAction::XY, RouteAction::YX})
        os << r.id() << ',' << key.name() << ',' << to_string(a) << ',' << num(q.get(key, a)) << '\n';
    }
  }
  return os.str();
}

int dump_qtables(const SimConfig& cfg, Cycle interval, const std::string& dir, RunResult* result) {
  if (!traits(cfg.policy).marl) throw ConfigError("no Q-tables under this policy");
  if (interval < 1) throw ConfigError("dump interval must be >= 1");
  std::filesystem::create_directories(dir);
  int files = 0;
  Simulation sim(cfg);
  sim.observe_qtables(interval, [&](Cycle now, const std::vector<Router>& routers) {
    const auto path = std::filesystem::path(dir) / ("qtables-" + std::to_string(now) + ".csv");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << qtable_csv(routers);
    ++files;
  });
  RunResult r;
  r.config = cfg;
  try {
    r.metrics = sim.run();
  } catch (const SimulationError& e) {
    r.status = e.status();
    r.message = e.what();
    r.metrics = e.partial();
  }
  r.metrics.status = r.status;
  r.metrics.message = r.message;
  if (result) *result = std::move(r);
  return files;
}

int exit_code(const std::vector<RunResult>& runs) {
  auto any = [&](RunStatus s) {
    return std::any_of(runs.begin(), runs.end(), [s](const RunResult& r) { return r.status == s; });
  };
  if (any(RunStatus::Deadlock)) return 2;
  if (any(RunStatus::Timeout)) return 3;
  if (any(RunStatus::Failed)) return 1;
  return 0;
}

}  // namespace cafeen

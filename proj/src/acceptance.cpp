// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "results.hpp"

namespace cafeen {

namespace {

constexpr std::uint64_t kSeed = 2026;

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

SimConfig synthetic(Policy policy, Pattern pattern, double pir, std::uint64_t packets) {
  SimConfig c;
  c.policy = policy;
  c.traffic.pattern = pattern;
  c.traffic.pir = pir;
  c.traffic.total_packets = packets;
  c.seed = kSeed;
  return c;
}

std::string status_note(const RunResult& r) {
  return r.status == RunStatus::Ok ? "" : std::string(" [") + to_string(r.status) + ": " + r.message + "]";
}

// ---------------------------------------------------------------- 1

CriterionResult q_update_arithmetic() {
  CriterionResult res{1, "q-update arithmetic", true, "", 0};
  Rng rng(kSeed, "acceptance.q_update", 0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double q = rng.uniform() * 40.0 - 20.0;
    const double alpha = 1.0 - rng.uniform();
    const double r = rng.uniform() * 40.0 - 20.0;
    const double expected = q - alpha * q + alpha * r;
    QTable t(2, 2);
    t.set(StateKey::col(1), RouteAction::YX, q);
    t.update(StateKey::col(1), RouteAction::YX, r, alpha);
    worst = std::max({worst, std::abs(q_update(q, alpha, r) - expected),
                      std::abs(t.get(StateKey::col(1), RouteAction::YX) - expected)});
  }
  if (worst > 1e-12) res.passed = false;

  // Constant reward: |Q_n - r| = (1 - alpha)^n |Q_0 - r|.
  const double alpha = 0.01;
  const double reward = 5.0;
  double q = 0.0;
  double worst_geo = 0;
  bool shrinking = true;
  double prev_gap = std::abs(q - reward);
  for (int n = 1; n <= 2000; ++n) {
    q = q_update(q, alpha, reward);
    const double gap = std::abs(q - reward);
    const double predicted = std::pow(1.0 - alpha, n) * reward;
    worst_geo = std::max(worst_geo, std::abs(gap - predicted) / reward);
    shrinking = shrinking && gap < prev_gap;
    prev_gap = gap;
  }
  if (worst_geo > 1e-9 || !shrinking) res.passed = false;
  res.detail = "max |error| " + fmt(worst) + " over 1000 triples; geometric convergence error " + fmt(worst_geo) +
               ", final gap " + fmt(prev_gap);
  return res;
}

// ---------------------------------------------------------------- 2

struct Flow {
  Coord src;
  Coord dst;
};

Coord turn_of(const Flow& f, RouteAction a) {
  return *turning_router(f.src, f.dst, a);
}

// Routers woken by turns alone: distinct turning routers that are not also a
// flow destination, since those wake for ejection under either assignment.
int turn_wakes(const std::vector<Flow>& flows, unsigned mask, const MeshConfig& mesh) {
  std::set<int> dests;
  for (const Flow& f : flows) dests.insert(mesh.flat(f.dst));
  std::set<int> turns;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const int t = mesh.flat(turn_of(flows[i], (mask >> i) & 1u ? RouteAction::YX : RouteAction::XY));
    if (!dests.count(t)) turns.insert(t);
  }
  return static_cast<int>(turns.size());
}

std::string assignment(unsigned mask, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (mask >> i) & 1u ? 'Y' : 'X';
  return s;
}

CriterionResult oracle_optimality() {
  CriterionResult res{2, "learned routing matches the wake-count optimum", false, "", 0};
  const MeshConfig mesh(4, 4);
  constexpr int kCases = 20;
  constexpr Cycle kTrain = 200'000;
  constexpr double kFlowRate = 0.02;
  int optimal = 0;
  int within_one = 0;
  std::ostringstream misses;

  for (int cs = 0; cs < kCases; ++cs) {
    Rng rng(kSeed, "acceptance.flows", static_cast<std::uint64_t>(cs));
    const int f_count = 3 + static_cast<int>(rng.below(8));
    std::vector<Flow> flows;
    while (static_cast<int>(flows.size()) < f_count) {
      const Coord s = mesh.coord(static_cast<int>(rng.below(16)));
      const Coord d = mesh.coord(static_cast<int>(rng.below(16)));
      if (s.row == d.row || s.col == d.col) continue;
      if (std::any_of(flows.begin(), flows.end(), [&](const Flow& f) { return f.src == s && f.dst == d; }))
        continue;
      flows.push_back({s, d});
    }

    Rng inj(kSeed, "acceptance.flow_traffic", static_cast<std::uint64_t>(cs));
    std::vector<Packet> packets;
    for (Cycle c = 0; c < kTrain; ++c) {
      for (const Flow& f : flows) {
        if (!inj.bernoulli(kFlowRate)) continue;
        Packet p;
        p.src = f.src;
        p.dst = f.dst;
        p.length = 5;
        p.inject_cycle = c;
        packets.push_back(p);
      }
    }

    SimConfig cfg;
    cfg.rows = cfg.cols = 4;
    cfg.policy = Policy::CafeenFull;
    cfg.traffic.pattern = Pattern::Trace;
    cfg.seed = kSeed + static_cast<std::uint64_t>(cs);
    cfg.pg.mode_up_threshold = 1;  // keep loaded routers in the cooperative mode
    Simulation sim(cfg, std::move(packets));
    try {
      sim.run();
    } catch (const SimulationError& e) {
      misses << "\n    case " << cs << ": training run failed: " << e.what();
      continue;
    }

    unsigned learned = 0;
    for (std::size_t i = 0; i < flows.size(); ++i)
      if (greedy_action(flows[i].src, flows[i].dst, sim.router(flows[i].src).qtable()) == RouteAction::YX)
        learned |= 1u << i;
    unsigned best_mask = 0;
    int best = 1 << 30;
    for (unsigned m = 0; m < (1u << flows.size()); ++m) {
      const int w = turn_wakes(flows, m, mesh);
      if (w < best) {
        best = w;
        best_mask = m;
      }
    }
    const int got = turn_wakes(flows, learned, mesh);
    if (got == best) ++optimal;
    if (got <= best + 1) ++within_one;
    if (got != best) {
      misses << "\n    case " << cs << " (F=" << flows.size() << "): learned " << assignment(learned, flows.size())
             << " wakes " << got << ", optimal " << assignment(best_mask, flows.size()) << " wakes " << best;
    }
  }
  res.passed = optimal >= 18 && within_one == kCases;
  res.detail = std::to_string(optimal) + "/20 optimal, " + std::to_string(within_one) +
               "/20 within one router (need >= 18 and 20)" + misses.str();
  return res;
}

// ---------------------------------------------------------------- 3

CriterionResult fine_opportunity() {
  CriterionResult res{3, "single active buffer share", false, "", 0};
  const RunResult r = run_one(synthetic(Policy::CafeenFineOnly, Pattern::Transpose, 0.005, 20'000));
  const double share = r.metrics.single_active_buffer_share();
  res.passed = r.status == RunStatus::Ok && share >= 0.80;
  res.detail = "share " + fmt(share) + " (need >= 0.8)" + status_note(r);
  return res;
}

// ---------------------------------------------------------------- 4

struct WakeScenario {
  std::vector<Cycle> arrivals;
  std::vector<long long> waits;
  std::uint64_t fine_wakes = 0;
  std::uint64_t coarse_wakes = 0;
};

WakeScenario wake_scenario(Policy policy) {
  SimConfig cfg;
  cfg.rows = cfg.cols = 4;
  cfg.policy = policy;
  cfg.traffic.pattern = Pattern::Trace;
  cfg.run.event_log = true;
  cfg.run.check_invariants = true;
  auto pk = [](Coord s, Coord d, Cycle at) {
    Packet p;
    p.src = s;
    p.dst = d;
    p.length = 5;
    p.inject_cycle = at;
    return p;
  };
  // Two turns (from East and West) and one ejection (from North) at (1,1).
  const Coord target{1, 1};
  Simulation sim(cfg, {pk({1, 3}, {0, 1}, 10), pk({1, 0}, {2, 1}, 12), pk({0, 1}, {1, 1}, 12)});
  sim.run();
  WakeScenario s;
  const int t = sim.mesh().flat(target);
  for (const EventLogEntry& e : sim.event_log()) {
    if (e.router != t) continue;
    if (e.kind == "arrive") s.arrivals.push_back(e.cycle);
    if (e.kind == "write_after_wake") s.waits.push_back(e.detail);
  }
  std::sort(s.waits.begin(), s.waits.end());
  s.fine_wakes = sim.router(target).power().fine_wakes();
  s.coarse_wakes = sim.router(target).power().coarse_wakes();
  return s;
}

std::string join(const std::vector<long long>& v) {
  std::string s;
  for (long long x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "{" + s + "}";
}

CriterionResult wake_masking() {
  CriterionResult res{4, "wake latency masking", false, "", 0};
  const PgParams pg;
  const WakeScenario coarse = wake_scenario(Policy::TootCoarse);
  const WakeScenario fine = wake_scenario(Policy::CafeenFineOnly);
  auto simultaneous = [](const WakeScenario& s) {
    return s.arrivals.size() == 3 && s.arrivals.front() == s.arrivals.back();
  };
  const std::vector<long long> coarse_expect(3, pg.coarse_t_on);
  const std::vector<long long> fine_expect{pg.fine_t_on, 2LL * pg.fine_t_on, 3LL * pg.fine_t_on};
  res.passed = simultaneous(coarse) && simultaneous(fine) && coarse.waits == coarse_expect &&
               coarse.coarse_wakes == 1 && fine.waits == fine_expect && fine.fine_wakes == 3;
  res.detail = "coarse: waits " + join(coarse.waits) + " with " + std::to_string(coarse.coarse_wakes) +
               " router wake (expect " + join(coarse_expect) + ", 1); fine: waits " + join(fine.waits) + " with " +
               std::to_string(fine.fine_wakes) + " buffer wakes (expect " + join(fine_expect) + ", 3)";
  return res;
}

// ---------------------------------------------------------------- 5

CriterionResult low_load_energy() {
  CriterionResult res{5, "energy ordering at low load", false, "", 0};
  std::vector<double> e;
  std::string notes;
  for (Policy p : kAllPolicies) {
    const RunResult r = run_one(synthetic(p, Pattern::UniformRandom, 0.002, 100'000));
    e.push_back(r.metrics.energy.total());
    notes += status_note(r);
  }
  const bool ordered = e[0] > e[1] && e[1] > e[2] && e[2] > e[3];
  const double gap = std::abs(e[4] - e[3]) / e[3];
  res.passed = notes.empty() && ordered && gap <= 0.02;
  res.detail = "NoPg " + fmt(e[0], 6) + " > ConvXy " + fmt(e[1], 6) + " > TootCoarse " + fmt(e[2], 6) +
               " > CafeenFineOnly " + fmt(e[3], 6) + (ordered ? " holds" : " violated") + "; CafeenFull " +
               fmt(e[4], 6) + " differs by " + fmt(100 * gap, 3) + "% (need <= 2%)" + notes;
  return res;
}

// ---------------------------------------------------------------- 6

CriterionResult high_load_energy() {
  CriterionResult res{6, "adaptive benefit at high load", false, "", 0};
  const RunResult full = run_one(synthetic(Policy::CafeenFull, Pattern::Transpose, 0.05, 20'000));
  const RunResult toot = run_one(synthetic(Policy::TootCoarse, Pattern::Transpose, 0.05, 20'000));
  const RunResult full_ur = run_one(synthetic(Policy::CafeenFull, Pattern::UniformRandom, 0.1, 20'000));
  const RunResult toot_ur = run_one(synthetic(Policy::TootCoarse, Pattern::UniformRandom, 0.1, 20'000));
  const double a = full.metrics.energy.total();
  const double b = toot.metrics.energy.total();
  const double c = full_ur.metrics.energy.total();
  const double d = toot_ur.metrics.energy.total();
  const std::string notes = status_note(full) + status_note(toot) + status_note(full_ur) + status_note(toot_ur);
  res.passed = notes.empty() && a < b;
  res.detail = "transpose 0.05: CafeenFull " + fmt(a, 6) + " vs TootCoarse " + fmt(b, 6) +
               "; uniform_random 0.1 (either order allowed): CafeenFull " + fmt(c, 6) + " vs TootCoarse " +
               fmt(d, 6) + notes;
  return res;
}

// ---------------------------------------------------------------- 7

CriterionResult deadlock_freedom() {
  CriterionResult res{7, "deadlock freedom at saturation", false, "", 0};
  int ok = 0;
  std::uint64_t min_ejected = ~0ull;
  std::string failures;
  for (Policy p : kAllPolicies) {
    for (Pattern t : {Pattern::UniformRandom, Pattern::Transpose, Pattern::BitReversal, Pattern::Shuffle}) {
      SimConfig c = synthetic(p, t, 0.2, 1'000'000'000ull);
      c.run.mode = RunMode::Fixed;
      c.run.cycles = 200'000;
      c.run.check_invariants = true;
      const RunResult r = run_one(c);
      if (r.status == RunStatus::Ok) {
        ++ok;
        min_ejected = std::min(min_ejected, r.metrics.packets_ejected);
      } else {
        failures += std::string("\n    ") + to_string(p) + "/" + to_string(t) + ": " + r.message.substr(0, 400);
      }
    }
  }
  res.passed = ok == 20;
  res.detail = std::to_string(ok) + "/20 runs of 200000 cycles finished with invariants checked every cycle" +
               (ok ? ", fewest packets ejected " + std::to_string(min_ejected) : "") + failures;
  return res;
}

// ---------------------------------------------------------------- 8

CriterionResult determinism() {
  CriterionResult res{8, "determinism", false, "", 0};
  Experiment e;
  e.base = synthetic(Policy::NoPg, Pattern::Transpose, 0.005, 5'000);
  e.policies = {Policy::NoPg, Policy::CafeenFineOnly, Policy::CafeenFull};
  e.patterns = {Pattern::Transpose, Pattern::UniformRandom};
  e.pirs = {0.005};
  const std::string first = results_json(e, run_sweep(e, 1)).dump(2);
  const std::string second = results_json(e, run_sweep(e, 1)).dump(2);
  const std::string parallel = results_json(e, run_sweep(e, 2)).dump(2);
  res.passed = first == second && first == parallel;
  res.detail = "results.json of 6 runs: repeat " + std::string(first == second ? "identical" : "DIFFERS") +
               ", two workers " + (first == parallel ? "identical" : "DIFFERS") + " (" +
               std::to_string(first.size()) + " bytes)";
  return res;
}

// ---------------------------------------------------------------- 9

CriterionResult latency_sanity() {
  CriterionResult res{9, "latency overhead at low load", false, "", 0};
  const RunResult base = run_one(synthetic(Policy::NoPg, Pattern::Transpose, 0.005, 20'000));
  const RunResult fine = run_one(synthetic(Policy::CafeenFineOnly, Pattern::Transpose, 0.005, 20'000));
  const RunResult full = run_one(synthetic(Policy::CafeenFull, Pattern::Transpose, 0.005, 20'000));
  const double b = base.metrics.avg_latency;
  const double f = fine.metrics.avg_latency;
  const double a = full.metrics.avg_latency;
  const std::string notes = status_note(base) + status_note(fine) + status_note(full);
  res.passed = notes.empty() && b > 0 && f <= 1.25 * b && a <= 1.25 * b;
  res.detail = "avg latency NoPg " + fmt(b) + ", CafeenFineOnly " + fmt(f) + " (" + fmt(f / b, 3) +
               "x), CafeenFull " + fmt(a) + " (" + fmt(a / b, 3) + "x), limit 1.25x" + notes;
  return res;
}

// ---------------------------------------------------------------- 10

CriterionResult state_space() {
  CriterionResult res{10, "Q-table state space", true, "", 0};
  for (int r = 2; r <= 12 && res.passed; ++r) {
    for (int c = 2; c <= 12; ++c) {
      const QTable q(r, c);
      std::set<std::pair<int, int>> seen;
      for (int s = 0; s < q.num_states(); ++s) {
        const StateKey k = q.key_at(s);
        seen.insert({k.kind == StateKey::Kind::Row ? 0 : 1, k.index});
      }
      if (q.num_states() != r + c || QTable::num_actions() != 2 || static_cast<int>(seen.size()) != r + c) {
        res.passed = false;
        res.detail = "mesh " + std::to_string(r) + "x" + std::to_string(c) + " has " +
                     std::to_string(q.num_states()) + " states; ";
        break;
      }
    }
  }
  SimConfig cfg;
  cfg.policy = Policy::CafeenFull;
  cfg.traffic.pattern = Pattern::Trace;
  Simulation sim(cfg);
  const QTable& q = sim.routers().front().qtable();
  const bool eight = q.num_states() == 16 && QTable::num_actions() == 2;
  res.passed = res.passed && eight;
  res.detail += "8x8 router table: " + std::to_string(q.num_states()) + " states x " +
                std::to_string(QTable::num_actions()) + " actions; R x C meshes up to 12x12 have R+C states";
  return res;
}

}  // namespace

std::string format_criterion(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << ": " << r.detail << " (" << fmt(r.seconds, 3)
     << " s)";
  return os.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_done) {
  using Fn = CriterionResult (*)();
  static constexpr Fn kCriteria[kNumCriteria] = {q_update_arithmetic, oracle_optimality, fine_opportunity,
                                                 wake_masking,        low_load_energy,   high_load_energy,
                                                 deadlock_freedom,    determinism,       latency_sanity,
                                                 state_space};
  std::vector<CriterionResult> out;
  for (int i = 0; i < kNumCriteria; ++i) {
    if (opts.only != 0 && opts.only != i + 1) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = kCriteria[i]();
    } catch (const std::exception& e) {
      r.id = i + 1;
      r.name = "criterion " + std::to_string(i + 1);
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_done) on_done(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace cafeen

// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "energy.hpp"
#include "router.hpp"
#include "traffic.hpp"

namespace cafeen {

enum class RunStatus : std::uint8_t { Ok, Deadlock, Timeout, Failed };
const char* to_string(RunStatus s);

struct Metrics {
  RunStatus status = RunStatus::Ok;
  std::string message;

  Cycle cycles = 0;  // execution time: last ejection in drain runs, run length otherwise
  std::uint64_t packets_created = 0;
  std::uint64_t packets_ejected = 0;
  std::uint64_t packets_measured = 0;
  double avg_latency = 0;
  double p50_latency = 0;
  double p95_latency = 0;
  double p99_latency = 0;
  Cycle max_latency = 0;
  double avg_hops = 0;
  double avg_wake_wait = 0;

  std::uint64_t fine_wakes = 0;
  std::uint64_t coarse_wakes = 0;
  std::uint64_t mode_switches = 0;
  std::vector<double> coarse_residency;  // per router, fraction of cycles in Coarse
  std::array<std::uint64_t, kNumPorts + 1> active_buffer_hist{};
  std::array<std::uint64_t, kNumPorts + 1> powered_buffer_hist{};
  std::map<int, std::uint64_t> turns_per_epoch_hist;
  std::uint64_t epochs = 0;

  EnergyLedger energy;

  /// Among router-cycles with at least one Active input buffer, the share with exactly one.
  double single_active_buffer_share() const;
};

/// Run failure carrying the partial metrics gathered so far.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(RunStatus status, const std::string& what, Metrics partial)
      : std::runtime_error(what), status_(status), partial_(std::move(partial)) {}
  RunStatus status() const { return status_; }
  const Metrics& partial() const { return partial_; }

 private:
  RunStatus status_;
  Metrics partial_;
};

/// Deterministic cycle-driven simulation of one configuration.
///
/// Each cycle runs, in order: injection into source queues, power and mode
/// ticks, reward delivery and Q updates, router steps, credit commit, epoch
/// bookkeeping, energy charging and metrics. Routers only read frozen state
/// from neighbors; their cross-router writes land in the credit-commit phase
/// or carry a future arrival cycle.
class Simulation {
 public:
  using QTableObserver = std::function<void(Cycle, const std::vector<Router>&)>;

  /// `packets` overrides the traffic source when the pattern is Trace; if it
  /// is empty and traffic.trace_path is set, the trace file is loaded.
  explicit Simulation(const SimConfig& cfg, std::vector<Packet> packets = {});

  /// Runs to completion. Throws SimulationError on deadlock or timeout.
  Metrics run();

  /// Advances one cycle. Throws SimulationError on watchdog or invariant failure.
  void step();
  bool finished() const;

  Cycle now() const { return now_; }
  const MeshConfig& mesh() const { return mesh_; }
  const SimConfig& config() const { return cfg_; }
  const std::vector<Router>& routers() const { return routers_; }
  Router& router(Coord c) { return routers_[static_cast<std::size_t>(mesh_.flat(c))]; }
  const EnergyLedger& ledger() const { return metrics_.energy; }
  const std::vector<EventLogEntry>& event_log() const { return log_; }
  std::uint64_t packets_in_network() const { return entered_ - metrics_.packets_ejected; }

  void observe_qtables(Cycle interval, QTableObserver observer);

  /// Credit conservation for every (link, VC); throws InvariantError.
  void check_credits() const;

  Metrics snapshot_metrics() const;

 private:
  void inject_phase();
  void power_phase();
  void reward_phase();
  void router_phase();
  void epoch_phase();
  void energy_phase();
  void metrics_phase();
  void broadcast(Coord turning_router, int reward);
  std::string dump_blocked() const;

  SimConfig cfg_;
  MeshConfig mesh_;
  PolicyTraits traits_;
  std::vector<Router> routers_;
  PacketPool pool_;
  std::optional<SyntheticTraffic> synthetic_;
  std::vector<Packet> trace_;
  std::size_t trace_pos_ = 0;
  std::uint64_t target_ = 0;

  Cycle now_ = 0;
  Cycle last_move_ = 0;
  Cycle last_eject_ = 0;
  std::uint64_t entered_ = 0;
  bool done_ = false;

  std::vector<CreditReturn> credit_returns_;
  std::vector<WakeEvent> wakes_;
  std::vector<TurnEvent> turns_;
  std::vector<Ejection> ejections_;
  std::vector<int> regated_;
  std::vector<std::vector<RewardDelivery>> reward_wheel_;
  std::vector<EventLogEntry> log_;

  std::vector<Cycle> latencies_;
  double hop_sum_ = 0;
  double wake_wait_sum_ = 0;
  std::vector<std::uint64_t> coarse_cycles_;
  Metrics metrics_;

  Cycle observe_interval_ = 0;
  QTableObserver observer_;
};

}  // namespace cafeen

// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace cafeen {

/// Abstract energy units. With the defaults a buffer breaks even after
/// 2 gated cycles, and a router with one busy buffer after 12 / (1 + 2) = 4.
struct EnergyCoefficients {
  double static_buffer_per_cycle = 1.0;
  double static_router_misc_per_cycle = 2.0;
  double static_bypass_per_cycle = 0.1;
  double static_qtable_per_cycle = 0.2;
  double dyn_buffer_rw_per_flit = 0.5;
  double dyn_xbar_per_flit = 0.3;
  double dyn_link_per_flit = 0.2;
  double dyn_bypass_per_flit = 0.1;
  double dyn_reward_flit_per_hop = 0.05;
  double wake_buffer = 2.0;
  double wake_router = 12.0;

  void validate() const;
};

enum class EnergyCategory : std::uint8_t { Static, Dynamic, Wakeup, Overhead };
inline constexpr int kEnergyCategories = 4;

enum class EnergyComponent : std::uint8_t { Buffer, RouterMisc, Crossbar, Link, Bypass, QTable, RewardChannel };
inline constexpr int kEnergyComponents = 7;

const char* to_string(EnergyCategory c);
const char* to_string(EnergyComponent c);

enum class EnergyEvent : std::uint8_t {
  BufferWrite,
  BufferRead,
  CrossbarTraversal,
  LinkTraversal,
  BypassTraversal,
  RewardFlitHop,
  FineWake,
  CoarseWake,
};

/// Static power snapshot of one router for one cycle.
struct RouterPowerSnapshot {
  int powered_buffers = 0;
  bool misc_powered = false;
  bool qtable_powered = false;
};

/// Record of one charge call, for replay checks.
struct EnergyLogEntry {
  std::int64_t cycle;
  int router;
  bool is_event;
  EnergyEvent event;
  RouterPowerSnapshot snapshot;
  std::uint32_t count;
};

class EnergyLedger {
 public:
  using Table = std::array<std::array<double, kEnergyComponents>, kEnergyCategories>;

  EnergyLedger() = default;
  EnergyLedger(int routers, const EnergyCoefficients& coeffs, bool keep_log = false);

  /// Static charges for one cycle; the bypass latch and controller are always on.
  void charge_cycle(int router, const RouterPowerSnapshot& s, std::int64_t cycle = 0);
  void charge_event(int router, EnergyEvent e, std::uint32_t count = 1, std::int64_t cycle = 0);

  double total() const;
  double total(EnergyCategory c) const;
  double total(EnergyComponent c) const;
  double router_total(int router) const;
  const Table& router_table(int router) const { return per_router_[static_cast<std::size_t>(router)]; }
  Table totals() const;
  int routers() const { return static_cast<int>(per_router_.size()); }

  const std::vector<EnergyLogEntry>& log() const { return log_; }
  /// Rebuilds a ledger by replaying a charge log.
  static EnergyLedger replay(int routers, const EnergyCoefficients& coeffs, const std::vector<EnergyLogEntry>& log);

 private:
  void add(int router, EnergyCategory cat, EnergyComponent comp, double amount);

  EnergyCoefficients coeffs_;
  std::vector<Table> per_router_;
  bool keep_log_ = false;
  std::vector<EnergyLogEntry> log_;
};

}  // namespace cafeen

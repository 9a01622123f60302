// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <vector>

#include "topology.hpp"

namespace cafeen {

enum class PowerKind : std::uint8_t { Active, Gated, Waking };

struct PowerState {
  PowerKind kind = PowerKind::Active;
  int remaining = 0;  // only meaningful while Waking

  static PowerState active() { return {PowerKind::Active, 0}; }
  static PowerState gated() { return {PowerKind::Gated, 0}; }
  static PowerState waking(int cycles) { return {PowerKind::Waking, cycles}; }

  bool is_active() const { return kind == PowerKind::Active; }
  bool is_gated() const { return kind == PowerKind::Gated; }
  bool is_waking() const { return kind == PowerKind::Waking; }
  /// Drawing supply current; Waking components are charged full static power.
  bool powered() const { return kind != PowerKind::Gated; }

  friend bool operator==(const PowerState&, const PowerState&) = default;
};

struct PgParams {
  int fine_t_idle = 2;
  int fine_t_on = 2;
  int coarse_t_idle = 4;
  int coarse_t_on = 8;
  int mode_up_threshold = 2;
  int mode_window = 32;
  int mode_quiet = 128;

  void validate() const;
};

enum class PgMode : std::uint8_t { Fine, Coarse };
const char* to_string(PgMode m);

/// One gateable component with its idle counter.
struct GatedUnit {
  PowerState state = PowerState::active();
  int idle_cycles = 0;
};

/// Idle-threshold step for a single component. Returns true when the unit
/// transitioned Active -> Gated on this call. Occupied storage never gates.
bool step_idle_gate(GatedUnit& unit, bool busy, int t_idle);

/// Waking countdown. Returns true when the unit became Active on this call.
bool step_wake(GatedUnit& unit);

/// Outcome of asking the controller to power an input buffer.
enum class WakeOutcome : std::uint8_t {
  AlreadyPowered,  // buffer is Active or Waking; nothing to do
  Queued,          // fine mode, another buffer is mid-wake
  FineStarted,     // this buffer began Waking(fine_t_on)
  CoarseStarted,   // whole router began Waking(coarse_t_on)
};

struct TickReport {
  std::uint8_t gated_mask = 0;     // buffers that gated this tick
  std::uint8_t activated_mask = 0; // buffers that finished waking this tick
  std::uint8_t fine_wakes_started = 0;  // queued fine wakes started by this tick
  bool router_fully_gated = false;      // every buffer became Gated on this tick
  bool mode_changed = false;
};

/// Per-router power management: five input-buffer units, the fine and coarse
/// gating machines, and the fine/coarse mode controller.
///
/// Crossbar and allocators are not tracked separately; they are powered
/// whenever any input buffer is powered.
class RouterPower {
 public:
  enum class Policy : std::uint8_t { AlwaysOn, FineOnly, CoarseOnly, Adaptive };

  RouterPower() = default;
  RouterPower(const PgParams& params, Policy policy);

  /// Phase-2 update. `busy_mask` marks ports whose buffers hold or expect
  /// buffered flits as of the end of the previous cycle.
  TickReport tick(std::uint8_t busy_mask);

  /// Called when a flit needs buffer `port` and finds it Gated.
  WakeOutcome request_wake(Port port);

  const PowerState& buffer(Port p) const { return units_[p].state; }
  bool buffer_active(Port p) const { return units_[p].state.is_active(); }
  int powered_buffers() const;
  int active_buffers() const;
  bool misc_powered() const { return powered_buffers() > 0; }
  bool fully_gated() const { return powered_buffers() == 0; }

  PgMode mode() const { return mode_; }
  Policy policy() const { return policy_; }
  std::uint64_t fine_wakes() const { return fine_wakes_; }
  std::uint64_t coarse_wakes() const { return coarse_wakes_; }

  /// Distinct ports with wake requests inside the current mode window.
  int window_distinct() const;

  /// Forces every unit to a state; used for initial conditions and tests.
  void set_all(PowerState s);

 private:
  bool start_next_fine_wake();
  void mode_tick();

  PgParams params_;
  Policy policy_ = Policy::AlwaysOn;
  PgMode mode_ = PgMode::Fine;
  std::array<GatedUnit, kNumPorts> units_{};
  int coarse_idle_ = 0;
  std::deque<Port> fine_queue_;
  // Mode window: one request mask per cycle, plus per-port hit counts.
  std::vector<std::uint8_t> window_;
  std::size_t window_pos_ = 0;
  std::array<int, kNumPorts> window_hits_{};
  std::uint8_t requests_this_cycle_ = 0;
  int quiet_ = 0;
  std::uint64_t fine_wakes_ = 0;
  std::uint64_t coarse_wakes_ = 0;
};

/// Cycles a component must stay gated before the saved leakage pays for the
/// transition: ceil(e_transition / p_static).
std::int64_t break_even_time(double e_transition, double p_static);

}  // namespace cafeen

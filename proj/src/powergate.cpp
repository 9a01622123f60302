// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "powergate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cafeen {

const char* to_string(PgMode m) { return m == PgMode::Fine ? "fine" : "coarse"; }

void PgParams::validate() const {
  auto need = [](int v, const char* name) {
    if (v < 1) throw ConfigError(std::string("pg.") + name + " must be >= 1");
  };
  need(fine_t_idle, "fine_t_idle");
  need(fine_t_on, "fine_t_on");
  need(coarse_t_idle, "coarse_t_idle");
  need(coarse_t_on, "coarse_t_on");
  need(mode_up_threshold, "mode_up_threshold");
  need(mode_window, "mode_window");
  need(mode_quiet, "mode_quiet");
  if (mode_up_threshold > kNumPorts)
    throw ConfigError("pg.mode_up_threshold cannot exceed the port count (5)");
}

bool step_idle_gate(GatedUnit& unit, bool busy, int t_idle) {
  if (!unit.state.is_active()) return false;
  if (busy) {
    unit.idle_cycles = 0;
    return false;
  }
  if (++unit.idle_cycles < t_idle) return false;
  unit.state = PowerState::gated();
  unit.idle_cycles = 0;
  return true;
}

bool step_wake(GatedUnit& unit) {
  if (!unit.state.is_waking()) return false;
  if (--unit.state.remaining > 0) return false;
  unit.state = PowerState::active();
  unit.idle_cycles = 0;
  return true;
}

RouterPower::RouterPower(const PgParams& params, Policy policy)
    : params_(params), policy_(policy) {
  mode_ = policy == Policy::CoarseOnly ? PgMode::Coarse : PgMode::Fine;
  window_.assign(static_cast<std::size_t>(params.mode_window), 0);
  set_all(policy == Policy::AlwaysOn ? PowerState::active() : PowerState::gated());
}

void RouterPower::set_all(PowerState s) {
  for (auto& u : units_) {
    u.state = s;
    u.idle_cycles = 0;
  }
  fine_queue_.clear();
  coarse_idle_ = 0;
}

int RouterPower::powered_buffers() const {
  int n = 0;
  for (const auto& u : units_) n += u.state.powered() ? 1 : 0;
  return n;
}

int RouterPower::active_buffers() const {
  int n = 0;
  for (const auto& u : units_) n += u.state.is_active() ? 1 : 0;
  return n;
}

int RouterPower::window_distinct() const {
  return static_cast<int>(std::count_if(window_hits_.begin(), window_hits_.end(),
                                        [](int h) { return h > 0; }));
}

void RouterPower::mode_tick() {
  if (window_.empty()) return;
  const std::uint8_t old = window_[window_pos_];
  for (int p = 0; p < kNumPorts; ++p) {
    if (old & (1u << p)) --window_hits_[p];
    if (requests_this_cycle_ & (1u << p)) ++window_hits_[p];
  }
  window_[window_pos_] = requests_this_cycle_;
  window_pos_ = (window_pos_ + 1) % window_.size();

  const int distinct = window_distinct();
  if (mode_ == PgMode::Fine) {
    if (distinct >= params_.mode_up_threshold) {
      mode_ = PgMode::Coarse;
      // Heads still waiting re-request every cycle and get a coarse wake.
      fine_queue_.clear();
      coarse_idle_ = 0;
      quiet_ = 0;
    }
  } else {
    quiet_ = distinct < params_.mode_up_threshold ? quiet_ + 1 : 0;
    if (quiet_ >= params_.mode_quiet) {
      mode_ = PgMode::Fine;
      quiet_ = 0;
    }
  }
}

bool RouterPower::start_next_fine_wake() {
  while (!fine_queue_.empty()) {
    const Port p = fine_queue_.front();
    fine_queue_.pop_front();
    if (!units_[p].state.is_gated()) continue;
    units_[p].state = PowerState::waking(params_.fine_t_on);
    ++fine_wakes_;
    return true;
  }
  return false;
}

TickReport RouterPower::tick(std::uint8_t busy_mask) {
  TickReport r;
  if (policy_ == Policy::AlwaysOn) return r;

  const bool was_fully_gated = fully_gated();
  if (policy_ == Policy::Adaptive) {
    const PgMode before = mode_;
    mode_tick();
    r.mode_changed = before != mode_;
  }
  requests_this_cycle_ = 0;

  bool any_waking = false;
  for (int p = 0; p < kNumPorts; ++p) {
    if (step_wake(units_[p])) r.activated_mask |= static_cast<std::uint8_t>(1u << p);
    any_waking = any_waking || units_[p].state.is_waking();
  }

  if (mode_ == PgMode::Fine) {
    // The controller wakes one buffer at a time.
    if (!any_waking && start_next_fine_wake()) r.fine_wakes_started = 1;
    for (int p = 0; p < kNumPorts; ++p)
      if (step_idle_gate(units_[p], (busy_mask >> p) & 1u, params_.fine_t_idle))
        r.gated_mask |= static_cast<std::uint8_t>(1u << p);
  } else if (!any_waking && active_buffers() > 0) {
    coarse_idle_ = busy_mask == 0 ? coarse_idle_ + 1 : 0;
    if (coarse_idle_ >= params_.coarse_t_idle) {
      for (int p = 0; p < kNumPorts; ++p) {
        if (units_[p].state.is_active()) {
          units_[p].state = PowerState::gated();
          r.gated_mask |= static_cast<std::uint8_t>(1u << p);
        }
        units_[p].idle_cycles = 0;
      }
      coarse_idle_ = 0;
    }
  }
  r.router_fully_gated = !was_fully_gated && fully_gated();
  return r;
}

WakeOutcome RouterPower::request_wake(Port port) {
  if (policy_ == Policy::AlwaysOn || !units_[port].state.is_gated())
    return WakeOutcome::AlreadyPowered;
  requests_this_cycle_ |= static_cast<std::uint8_t>(1u << port);

  if (mode_ == PgMode::Coarse) {
    for (auto& u : units_) {
      if (u.state.is_gated()) {
        u.state = PowerState::waking(params_.coarse_t_on);
        u.idle_cycles = 0;
      }
    }
    coarse_idle_ = 0;
    ++coarse_wakes_;
    return WakeOutcome::CoarseStarted;
  }

  const bool busy = !fine_queue_.empty() ||
                    std::any_of(units_.begin(), units_.end(),
                                [](const GatedUnit& u) { return u.state.is_waking(); });
  if (busy) {
    if (std::find(fine_queue_.begin(), fine_queue_.end(), port) == fine_queue_.end())
      fine_queue_.push_back(port);
    return WakeOutcome::Queued;
  }
  units_[port].state = PowerState::waking(params_.fine_t_on);
  units_[port].idle_cycles = 0;
  ++fine_wakes_;
  return WakeOutcome::FineStarted;
}

std::int64_t break_even_time(double e_transition, double p_static) {
  if (!(p_static > 0.0)) throw std::invalid_argument("break_even_time: static power must be > 0");
  if (e_transition <= 0.0) return 0;
  return static_cast<std::int64_t>(std::ceil(e_transition / p_static));
}

}  // namespace cafeen

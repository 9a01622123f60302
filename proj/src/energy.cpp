// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "energy.hpp"

#include <string>

#include "topology.hpp"

namespace cafeen {

void EnergyCoefficients::validate() const {
  const double all[] = {static_buffer_per_cycle, static_router_misc_per_cycle, static_bypass_per_cycle,
                        static_qtable_per_cycle, dyn_buffer_rw_per_flit,       dyn_xbar_per_flit,
                        dyn_link_per_flit,       dyn_bypass_per_flit,          dyn_reward_flit_per_hop,
                        wake_buffer,             wake_router};
  for (double v : all)
    if (!(v >= 0.0)) throw ConfigError("energy coefficients must be >= 0");
}

const char* to_string(EnergyCategory c) {
  switch (c) {
    case EnergyCategory::Static: return "static";
    case EnergyCategory::Dynamic: return "dynamic";
    case EnergyCategory::Wakeup: return "wakeup";
    case EnergyCategory::Overhead: return "overhead";
  }
  return "?";
}

const char* to_string(EnergyComponent c) {
  switch (c) {
    case EnergyComponent::Buffer: return "buffer";
    case EnergyComponent::RouterMisc: return "router_misc";
    case EnergyComponent::Crossbar: return "crossbar";
    case EnergyComponent::Link: return "link";
    case EnergyComponent::Bypass: return "bypass";
    case EnergyComponent::QTable: return "qtable";
    case EnergyComponent::RewardChannel: return "reward_channel";
  }
  return "?";
}

EnergyLedger::EnergyLedger(int routers, const EnergyCoefficients& coeffs, bool keep_log)
    : coeffs_(coeffs), per_router_(static_cast<std::size_t>(routers), Table{}), keep_log_(keep_log) {}

void EnergyLedger::add(int router, EnergyCategory cat, EnergyComponent comp, double amount) {
  per_router_[static_cast<std::size_t>(router)][static_cast<int>(cat)][static_cast<int>(comp)] += amount;
}

void EnergyLedger::charge_cycle(int router, const RouterPowerSnapshot& s, std::int64_t cycle) {
  if (keep_log_) log_.push_back({cycle, router, false, EnergyEvent::BufferWrite, s, 1});
  if (s.powered_buffers > 0)
    add(router, EnergyCategory::Static, EnergyComponent::Buffer, coeffs_.static_buffer_per_cycle * s.powered_buffers);
  if (s.misc_powered)
    add(router, EnergyCategory::Static, EnergyComponent::RouterMisc, coeffs_.static_router_misc_per_cycle);
  add(router, EnergyCategory::Overhead, EnergyComponent::Bypass, coeffs_.static_bypass_per_cycle);
  if (s.qtable_powered)
    add(router, EnergyCategory::Overhead, EnergyComponent::QTable, coeffs_.static_qtable_per_cycle);
}

void EnergyLedger::charge_event(int router, EnergyEvent e, std::uint32_t count, std::int64_t cycle) {
  if (keep_log_) log_.push_back({cycle, router, true, e, {}, count});
  const double n = count;
  switch (e) {
    case EnergyEvent::BufferWrite:
    case EnergyEvent::BufferRead:
      add(router, EnergyCategory::Dynamic, EnergyComponent::Buffer, coeffs_.dyn_buffer_rw_per_flit * n);
      break;
    case EnergyEvent::CrossbarTraversal:
      add(router, EnergyCategory::Dynamic, EnergyComponent::Crossbar, coeffs_.dyn_xbar_per_flit * n);
      break;
    case EnergyEvent::LinkTraversal:
      add(router, EnergyCategory::Dynamic, EnergyComponent::Link, coeffs_.dyn_link_per_flit * n);
      break;
    case EnergyEvent::BypassTraversal:
      add(router, EnergyCategory::Overhead, EnergyComponent::Bypass, coeffs_.dyn_bypass_per_flit * n);
      break;
    case EnergyEvent::RewardFlitHop:
      add(router, EnergyCategory::Overhead, EnergyComponent::RewardChannel, coeffs_.dyn_reward_flit_per_hop * n);
      break;
    case EnergyEvent::FineWake:
      add(router, EnergyCategory::Wakeup, EnergyComponent::Buffer, coeffs_.wake_buffer * n);
      break;
    case EnergyEvent::CoarseWake:
      add(router, EnergyCategory::Wakeup, EnergyComponent::RouterMisc, coeffs_.wake_router * n);
      break;
    default:
      throw InvariantError("unknown energy event");
  }
}

EnergyLedger::Table EnergyLedger::totals() const {
  Table t{};
  for (const auto& r : per_router_)
    for (int c = 0; c < kEnergyCategories; ++c)
      for (int k = 0; k < kEnergyComponents; ++k) t[c][k] += r[c][k];
  return t;
}

double EnergyLedger::router_total(int router) const {
  double s = 0;
  for (const auto& row : per_router_[static_cast<std::size_t>(router)])
    for (double v : row) s += v;
  return s;
}

double EnergyLedger::total() const {
  double s = 0;
  for (int r = 0; r < routers(); ++r) s += router_total(r);
  return s;
}

double EnergyLedger::total(EnergyCategory c) const {
  const Table t = totals();
  double s = 0;
  for (double v : t[static_cast<int>(c)]) s += v;
  return s;
}

double EnergyLedger::total(EnergyComponent c) const {
  const Table t = totals();
  double s = 0;
  for (int cat = 0; cat < kEnergyCategories; ++cat) s += t[cat][static_cast<int>(c)];
  return s;
}

EnergyLedger EnergyLedger::replay(int routers, const EnergyCoefficients& coeffs,
                                  const std::vector<EnergyLogEntry>& log) {
  EnergyLedger l(routers, coeffs);
  for (const auto& e : log) {
    if (e.is_event)
      l.charge_event(e.router, e.event, e.count, e.cycle);
    else
      l.charge_cycle(e.router, e.snapshot, e.cycle);
  }
  return l;
}

}  // namespace cafeen

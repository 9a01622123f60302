// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

namespace cafeen {

const char* to_string(Policy p) {
  switch (p) {
    case Policy::NoPg: return "NoPg";
    case Policy::ConvXy: return "ConvXy";
    case Policy::TootCoarse: return "TootCoarse";
    case Policy::CafeenFineOnly: return "CafeenFineOnly";
    case Policy::CafeenFull: return "CafeenFull";
  }
  return "?";
}

Policy parse_policy(const std::string& name) {
  for (Policy p : kAllPolicies)
    if (name == to_string(p)) return p;
  throw ConfigError("unknown policy '" + name +
                    "' (expected NoPg, ConvXy, TootCoarse, CafeenFineOnly or CafeenFull)");
}

PolicyTraits traits(Policy p) {
  switch (p) {
    case Policy::NoPg: return {RouterPower::Policy::AlwaysOn, false, false, false};
    case Policy::ConvXy: return {RouterPower::Policy::CoarseOnly, false, false, false};
    case Policy::TootCoarse: return {RouterPower::Policy::CoarseOnly, true, false, false};
    case Policy::CafeenFineOnly: return {RouterPower::Policy::FineOnly, true, false, false};
    case Policy::CafeenFull: return {RouterPower::Policy::Adaptive, true, true, true};
  }
  throw ConfigError("bad policy");
}

void SimConfig::validate() const {
  MeshConfig mesh(rows, cols);
  if (router.vcs_per_port < 1) throw ConfigError("router.vcs_per_port must be >= 1");
  if (traits(policy).vc_partition && router.vcs_per_port % 2 != 0)
    throw ConfigError("vcs_per_port must be even for VC partitioning");
  if (router.vcs_per_port > 32) throw ConfigError("router.vcs_per_port must be <= 32");
  if (router.flits_per_vc < 1) throw ConfigError("router.flits_per_vc must be >= 1");
  if (router.flit_width < 1) throw ConfigError("router.flit_width must be >= 1");
  if (router.pipeline_depth < 4) throw ConfigError("router.pipeline_depth must be >= 4");
  if (router.link_latency < 1) throw ConfigError("router.link_latency must be >= 1");
  if (router.bypass_latency < 1) throw ConfigError("router.bypass_latency must be >= 1");
  pg.validate();
  marl.validate();
  energy.validate();
  if (!(traffic.pir >= 0.0 && traffic.pir <= 1.0)) throw ConfigError("traffic.pir must be in [0, 1]");
  if (traffic.packet_length < 1) throw ConfigError("traffic.packet_length must be >= 1");
  if (traffic.pattern != Pattern::Trace) {
    if (traffic.total_packets < 1) throw ConfigError("traffic.total_packets must be >= 1");
    pattern_bits(mesh.nodes(), traffic.pattern);
  }
  if (run.max_cycles < 1) throw ConfigError("run.max_cycles must be >= 1");
  if (run.cycles < 1) throw ConfigError("run.cycles must be >= 1");
  if (run.warmup_cycles < 0) throw ConfigError("run.warmup_cycles must be >= 0");
  if (run.watchdog_cycles < 1) throw ConfigError("run.watchdog_cycles must be >= 1");
}

std::vector<std::string> SimConfig::warnings() const {
  std::vector<std::string> w;
  const auto fine_bet = break_even_time(energy.wake_buffer, energy.static_buffer_per_cycle > 0
                                                                ? energy.static_buffer_per_cycle
                                                                : 1e-300);
  if (pg.fine_t_idle < fine_bet)
    w.push_back("pg.fine_t_idle (" + std::to_string(pg.fine_t_idle) + ") is below the buffer break-even time (" +
                std::to_string(fine_bet) + " cycles)");
  const double router_static = energy.static_buffer_per_cycle * kNumPorts + energy.static_router_misc_per_cycle;
  if (router_static > 0) {
    const auto coarse_bet = break_even_time(energy.wake_router, router_static);
    if (pg.coarse_t_idle < coarse_bet)
      w.push_back("pg.coarse_t_idle (" + std::to_string(pg.coarse_t_idle) +
                  ") is below the router break-even time (" + std::to_string(coarse_bet) + " cycles)");
  }
  return w;
}

}  // namespace cafeen

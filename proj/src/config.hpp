// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "energy.hpp"
#include "marl.hpp"
#include "powergate.hpp"
#include "traffic.hpp"

namespace cafeen {

enum class Policy : std::uint8_t { NoPg, ConvXy, TootCoarse, CafeenFineOnly, CafeenFull };

const char* to_string(Policy p);
Policy parse_policy(const std::string& name);
inline constexpr Policy kAllPolicies[] = {Policy::NoPg, Policy::ConvXy, Policy::TootCoarse,
                                          Policy::CafeenFineOnly, Policy::CafeenFull};

struct PolicyTraits {
  RouterPower::Policy power;
  bool bypass;
  bool marl;
  bool vc_partition;
};
PolicyTraits traits(Policy p);

struct RouterParams {
  int vcs_per_port = 4;
  int flits_per_vc = 4;
  int flit_width = 128;
  int pipeline_depth = 4;
  int link_latency = 1;
  int bypass_latency = 1;
};

enum class RunMode : std::uint8_t { Drain, Fixed };

struct RunParams {
  RunMode mode = RunMode::Drain;
  std::int64_t max_cycles = 20'000'000;
  std::int64_t cycles = 100'000;  // length of Fixed-mode runs
  std::int64_t warmup_cycles = 0;
  std::int64_t watchdog_cycles = 10'000;
  bool check_invariants = false;
  bool event_log = false;
};

/// One fully resolved simulation: a single policy, pattern and PIR.
struct SimConfig {
  int rows = 8;
  int cols = 8;
  RouterParams router;
  PgParams pg;
  MarlParams marl;
  EnergyCoefficients energy;
  TrafficSpec traffic;
  std::uint64_t seed = 1;
  Policy policy = Policy::CafeenFull;
  RunParams run;

  /// Throws ConfigError on any invariant violation.
  void validate() const;
  /// Human-readable warnings (idle thresholds below break-even time).
  std::vector<std::string> warnings() const;
};

}  // namespace cafeen

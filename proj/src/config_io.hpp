// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace cafeen {

using Json = nlohmann::ordered_json;

/// A sweep: the cross product of policies, patterns and PIRs over one base config.
struct Experiment {
  SimConfig base;
  std::vector<Policy> policies{Policy::CafeenFull};
  std::vector<Pattern> patterns{Pattern::UniformRandom};
  std::vector<double> pirs{0.01};
  std::string out_dir = "results";

  /// The resolved single-run config for one sweep point.
  SimConfig point(Policy policy, Pattern pattern, double pir) const;
  void validate() const;
};

/// Full config tree with every key present.
Json to_json(const Experiment& e);

/// Builds an experiment from defaults, a JSON document and `key=value`
/// overrides (dotted keys). Unknown keys raise ConfigError naming the closest
/// valid key.
Experiment load_experiment(const Json& doc, const std::vector<std::string>& overrides = {});
Experiment load_experiment_file(const std::string& path, const std::vector<std::string>& overrides = {});

/// Dotted names of every settable key, in schema order.
std::vector<std::string> config_keys();

std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace cafeen

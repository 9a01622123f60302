// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace cafeen {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  int only = 0;  // run a single criterion when nonzero
};

inline constexpr int kNumCriteria = 10;

/// Runs the built-in acceptance criteria in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_done = {});

/// One line per criterion: `[PASS] 3 name: detail`.
std::string format_criterion(const CriterionResult& r);

}  // namespace cafeen

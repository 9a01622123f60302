// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cafeen {

/// Named, reproducible random stream derived from a master seed.
///
/// Draws are computed from raw engine output rather than the std
/// distributions so sequences do not depend on the standard library vendor.
class Rng {
 public:
  Rng(std::uint64_t master_seed, std::string_view stream, std::uint64_t index = 0);

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return p >= 1.0 || (p > 0.0 && uniform() < p); }

  /// Uniform in [0, n); rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cafeen

// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rng.hpp"
#include "topology.hpp"

namespace cafeen {

using Cycle = std::int64_t;

enum class Pattern { UniformRandom, Transpose, BitReversal, Shuffle, Trace };

const char* to_string(Pattern p);
Pattern parse_pattern(const std::string& name);

struct Packet {
  std::uint64_t id = 0;
  Coord src;
  Coord dst;
  int length = 1;
  Cycle inject_cycle = 0;
  RouteAction route_action = RouteAction::XY;
};

struct TrafficSpec {
  Pattern pattern = Pattern::UniformRandom;
  double pir = 0.01;
  int packet_length = 5;
  std::uint64_t total_packets = 10000;
  std::string trace_path;
};

/// Destination of a permutation pattern; nullopt when `src_flat` is a fixed point.
/// `n_bits` is log2 of the node count.
std::optional<int> pattern_dest(int src_flat, Pattern pattern, int n_bits);

/// log2(nodes) for bit patterns; throws ConfigError if not a power of two.
int pattern_bits(int nodes, Pattern pattern);

/// Bernoulli injection for the synthetic patterns.
class SyntheticTraffic {
 public:
  SyntheticTraffic(const MeshConfig& mesh, const TrafficSpec& spec, std::uint64_t seed);

  /// Packets created this cycle, in node order. Empty once total_packets were created.
  std::vector<Packet> next_injections(Cycle cycle);

  bool exhausted() const { return generated_ >= spec_.total_packets; }
  std::uint64_t generated() const { return generated_; }

 private:
  MeshConfig mesh_;
  TrafficSpec spec_;
  Rng rng_;
  int n_bits_ = 0;
  std::vector<std::optional<int>> fixed_dest_;
  std::uint64_t generated_ = 0;
};

/// CSV trace with header `cycle,src,dst,length`. Result is sorted by cycle (stable).
std::vector<Packet> parse_trace(std::istream& in, const MeshConfig& mesh);
std::vector<Packet> load_trace(const std::string& path, const MeshConfig& mesh);

}  // namespace cafeen

// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <set>
#include <sstream>

#include "doctest.h"
#include "traffic.hpp"

using namespace cafeen;

TEST_CASE("permutation patterns on 64 nodes") {
  const int bits = pattern_bits(64, Pattern::Transpose);
  CHECK(bits == 6);
  // (row, col) -> (col, row) with 3-bit halves.
  CHECK(*pattern_dest(0b001010, Pattern::Transpose, bits) == 0b010001);
  CHECK_FALSE(pattern_dest(0b011011, Pattern::Transpose, bits));
  CHECK(*pattern_dest(0b000001, Pattern::BitReversal, bits) == 0b100000);
  CHECK(*pattern_dest(0b110100, Pattern::BitReversal, bits) == 0b001011);
  CHECK_FALSE(pattern_dest(0b100001, Pattern::BitReversal, bits));
  // Shuffle rotates left by one bit.
  CHECK(*pattern_dest(0b100000, Pattern::Shuffle, bits) == 0b000001);
  CHECK(*pattern_dest(0b010110, Pattern::Shuffle, bits) == 0b101100);
  CHECK_FALSE(pattern_dest(0, Pattern::Shuffle, bits));
  CHECK_FALSE(pattern_dest(63, Pattern::Shuffle, bits));
}

TEST_CASE("property: permutation patterns are bijections") {
  for (Pattern p : {Pattern::Transpose, Pattern::BitReversal, Pattern::Shuffle}) {
    std::set<int> seen;
    for (int s = 0; s < 64; ++s) seen.insert(pattern_dest(s, p, 6).value_or(s));
    CHECK(seen.size() == 64);
  }
}

TEST_CASE("bit patterns need a power-of-two node count") {
  CHECK_THROWS_AS(pattern_bits(48, Pattern::BitReversal), ConfigError);
  CHECK_THROWS_AS(pattern_bits(32, Pattern::Transpose), ConfigError);
  CHECK_NOTHROW(pattern_bits(48, Pattern::UniformRandom));
}

TEST_CASE("pattern names round-trip") {
  for (Pattern p : {Pattern::UniformRandom, Pattern::Transpose, Pattern::BitReversal, Pattern::Shuffle, Pattern::Trace})
    CHECK(parse_pattern(to_string(p)) == p);
  CHECK_THROWS_AS(parse_pattern("tornado"), ConfigError);
}

TEST_CASE("synthetic injection rate and destinations") {
  const MeshConfig mesh(8, 8);
  TrafficSpec spec;
  spec.pir = 0.05;
  spec.total_packets = 1'000'000;
  SyntheticTraffic t(mesh, spec, 11);
  std::uint64_t n = 0;
  std::uint64_t expected_id = 0;
  constexpr Cycle kCycles = 4000;
  for (Cycle c = 0; c < kCycles; ++c) {
    for (const Packet& p : t.next_injections(c)) {
      CHECK(p.src != p.dst);
      CHECK(p.inject_cycle == c);
      CHECK(p.length == spec.packet_length);
      CHECK(p.id == expected_id++);
      ++n;
    }
  }
  const double mean = 64.0 * kCycles * spec.pir;
  CHECK(std::abs(static_cast<double>(n) - mean) < 4.0 * std::sqrt(mean));
}

TEST_CASE("synthetic traffic stops at total_packets and is seed-determined") {
  const MeshConfig mesh(4, 4);
  TrafficSpec spec;
  spec.pir = 0.5;
  spec.total_packets = 100;
  SyntheticTraffic a(mesh, spec, 3), b(mesh, spec, 3);
  std::uint64_t n = 0;
  for (Cycle c = 0; c < 100; ++c) {
    const auto x = a.next_injections(c);
    const auto y = b.next_injections(c);
    REQUIRE(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i].dst == y[i].dst);
    n += x.size();
  }
  CHECK(n == 100);
  CHECK(a.exhausted());
}

TEST_CASE("transpose traffic never targets a fixed point") {
  const MeshConfig mesh(8, 8);
  TrafficSpec spec;
  spec.pattern = Pattern::Transpose;
  spec.pir = 1.0;
  SyntheticTraffic t(mesh, spec, 1);
  const auto ps = t.next_injections(0);
  CHECK(ps.size() == 56);
  for (const Packet& p : ps) CHECK(p.dst == Coord{p.src.col, p.src.row});
}

TEST_CASE("trace parsing") {
  const MeshConfig mesh(4, 4);
  std::istringstream in("cycle,src,dst,length\n5,0,15,5\n2,3,12,1\n");
  const auto ps = parse_trace(in, mesh);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].inject_cycle == 2);
  CHECK(ps[0].src == Coord{0, 3});
  CHECK(ps[0].id == 0);
  CHECK(ps[1].dst == Coord{3, 3});

  auto error_of = [&](const std::string& text) {
    std::istringstream s(text);
    try {
      parse_trace(s, mesh);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("cycle,src,dst\n") != "");
  CHECK(error_of("cycle,src,dst,length\n1,2,2,5\n").find("source equals destination") != std::string::npos);
  CHECK(error_of("cycle,src,dst,length\n1,2,99,5\n").find("line 2") != std::string::npos);
  CHECK(error_of("cycle,src,dst,length\n1,2,3\n") != "");
  CHECK(error_of("cycle,src,dst,length\n1,2,3,0\n") != "");
}

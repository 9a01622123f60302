// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "traffic.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace cafeen {

const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::UniformRandom: return "uniform_random";
    case Pattern::Transpose: return "transpose";
    case Pattern::BitReversal: return "bit_reversal";
    case Pattern::Shuffle: return "shuffle";
    case Pattern::Trace: return "trace";
  }
  return "?";
}

Pattern parse_pattern(const std::string& name) {
  for (Pattern p : {Pattern::UniformRandom, Pattern::Transpose, Pattern::BitReversal,
                    Pattern::Shuffle, Pattern::Trace})
    if (name == to_string(p)) return p;
  throw ConfigError("unknown traffic pattern '" + name +
                    "' (expected uniform_random, transpose, bit_reversal, shuffle or trace)");
}

int pattern_bits(int nodes, Pattern pattern) {
  int bits = 0;
  while ((1 << bits) < nodes) ++bits;
  const bool bit_pattern = pattern == Pattern::Transpose || pattern == Pattern::BitReversal ||
                           pattern == Pattern::Shuffle;
  if (bit_pattern && (1 << bits) != nodes)
    throw ConfigError(std::string(to_string(pattern)) + " requires a power-of-two node count (got " +
                      std::to_string(nodes) + ")");
  if (pattern == Pattern::Transpose && bits % 2 != 0)
    throw ConfigError("transpose requires an even number of address bits (got " +
                      std::to_string(bits) + ")");
  return bits;
}

std::optional<int> pattern_dest(int src_flat, Pattern pattern, int n_bits) {
  const unsigned mask = (1u << n_bits) - 1u;
  const unsigned s = static_cast<unsigned>(src_flat) & mask;
  unsigned d = s;
  switch (pattern) {
    case Pattern::Transpose: {
      const int half = n_bits / 2;
      const unsigned lo = s & ((1u << half) - 1u);
      d = (lo << half) | (s >> half);
      break;
    }
    case Pattern::BitReversal:
      d = 0;
      for (int i = 0; i < n_bits; ++i)
        if (s & (1u << i)) d |= 1u << (n_bits - 1 - i);
      break;
    case Pattern::Shuffle:
      d = ((s << 1) | (s >> (n_bits - 1))) & mask;
      break;
    default:
      throw std::invalid_argument("pattern_dest: not a permutation pattern");
  }
  if (d == s) return std::nullopt;
  return static_cast<int>(d);
}

SyntheticTraffic::SyntheticTraffic(const MeshConfig& mesh, const TrafficSpec& spec,
                                   std::uint64_t seed)
    : mesh_(mesh), spec_(spec), rng_(seed, "traffic") {
  if (spec.pattern == Pattern::Trace)
    throw std::invalid_argument("SyntheticTraffic cannot serve trace patterns");
  n_bits_ = pattern_bits(mesh.nodes(), spec.pattern);
  if (spec.pattern != Pattern::UniformRandom) {
    fixed_dest_.resize(static_cast<std::size_t>(mesh.nodes()));
    for (int n = 0; n < mesh.nodes(); ++n) fixed_dest_[n] = pattern_dest(n, spec.pattern, n_bits_);
  }
}

std::vector<Packet> SyntheticTraffic::next_injections(Cycle cycle) {
  std::vector<Packet> out;
  if (spec_.pir <= 0.0) return out;
  const int nodes = mesh_.nodes();
  for (int n = 0; n < nodes && !exhausted(); ++n) {
    // Every node draws once per cycle so that silent nodes do not shift the stream.
    const bool fire = rng_.bernoulli(spec_.pir);
    int dst = -1;
    if (spec_.pattern == Pattern::UniformRandom) {
      if (!fire) continue;
      dst = static_cast<int>(rng_.below(static_cast<std::uint64_t>(nodes - 1)));
      if (dst >= n) ++dst;
    } else {
      if (!fire || !fixed_dest_[n]) continue;
      dst = *fixed_dest_[n];
    }
    Packet p;
    p.id = generated_++;
    p.src = mesh_.coord(n);
    p.dst = mesh_.coord(dst);
    p.length = spec_.packet_length;
    p.inject_cycle = cycle;
    out.push_back(p);
  }
  return out;
}

namespace {

bool parse_field(std::string_view s, long long& v) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<Packet> parse_trace(std::istream& in, const MeshConfig& mesh) {
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) -> ConfigError {
    return ConfigError("trace: " + what + ", line " + std::to_string(line_no));
  };

  if (!std::getline(in, line)) return {};
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "cycle,src,dst,length") throw fail("expected header 'cycle,src,dst,length'");

  std::vector<Packet> packets;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const std::size_t comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    long long f[4];
    if (fields.size() != 4) throw fail("expected 4 fields in '" + line + "'");
    for (int i = 0; i < 4; ++i)
      if (!parse_field(fields[i], f[i])) throw fail("malformed row '" + line + "'");
    if (f[0] < 0) throw fail("negative cycle");
    if (f[1] < 0 || f[1] >= mesh.nodes() || f[2] < 0 || f[2] >= mesh.nodes())
      throw fail("node id out of range");
    if (f[3] < 1) throw fail("length must be >= 1");
    if (f[1] == f[2]) throw fail("source equals destination");
    Packet p;
    p.inject_cycle = f[0];
    p.src = mesh.coord(static_cast<int>(f[1]));
    p.dst = mesh.coord(static_cast<int>(f[2]));
    p.length = static_cast<int>(f[3]);
    packets.push_back(p);
  }
  std::stable_sort(packets.begin(), packets.end(),
                   [](const Packet& a, const Packet& b) { return a.inject_cycle < b.inject_cycle; });
  for (std::size_t i = 0; i < packets.size(); ++i) packets[i].id = i;
  return packets;
}

std::vector<Packet> load_trace(const std::string& path, const MeshConfig& mesh) {
  std::ifstream in(path);
  if (!in) throw ConfigError("trace: cannot open '" + path + "'");
  return parse_trace(in, mesh);
}

}  // namespace cafeen

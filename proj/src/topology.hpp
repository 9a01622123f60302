// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cafeen {

/// Thrown for malformed configuration or inputs.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a simulator-internal contract is broken.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Coord {
  int row = 0;
  int col = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

std::string to_string(Coord c);

enum class RouteAction : std::uint8_t { XY = 0, YX = 1 };

constexpr RouteAction opposite(RouteAction a) {
  return a == RouteAction::XY ? RouteAction::YX : RouteAction::XY;
}
const char* to_string(RouteAction a);

/// Router ports. Mesh ports first so that `port < kMeshPorts` tests for a link.
enum Port : std::uint8_t { North = 0, East = 1, South = 2, West = 3, Local = 4 };
inline constexpr int kMeshPorts = 4;
inline constexpr int kNumPorts = 5;

constexpr Port opposite(Port p) {
  switch (p) {
    case North: return South;
    case South: return North;
    case East: return West;
    case West: return East;
    default: return Local;
  }
}
const char* to_string(Port p);

class MeshConfig {
 public:
  MeshConfig(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nodes() const { return rows_ * cols_; }

  bool contains(Coord c) const {
    return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
  }
  // Flat ids are row-major and only used at the traffic boundary.
  int flat(Coord c) const { return c.row * cols_ + c.col; }
  Coord coord(int flat_id) const { return {flat_id / cols_, flat_id % cols_}; }

  /// Neighbor in direction `p`, or nullopt at the mesh edge.
  std::optional<Coord> neighbor(Coord c, Port p) const;

 private:
  int rows_;
  int cols_;
};

/// Full dimension-ordered hop sequence, src and dst included.
std::vector<Coord> path(const MeshConfig& mesh, Coord src, Coord dst, RouteAction action);

/// The router where the packet changes dimension; nullopt for aligned flows.
std::optional<Coord> turning_router(Coord src, Coord dst, RouteAction action);

/// True iff the route passes through `node` without turning or ejecting there.
bool is_straight_at(std::span<const Coord> route, Coord node);

/// Output port a dimension-ordered packet takes at `here`; Local at the destination.
Port route_output(Coord here, Coord dst, RouteAction action);

/// Direction of the hop from `from` to an adjacent `to`.
Port direction(Coord from, Coord to);

inline int hop_distance(Coord a, Coord b) {
  return (a.row > b.row ? a.row - b.row : b.row - a.row) +
         (a.col > b.col ? a.col - b.col : b.col - a.col);
}

}  // namespace cafeen

// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "topology.hpp"

#include <algorithm>

namespace cafeen {

std::string to_string(Coord c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

const char* to_string(RouteAction a) { return a == RouteAction::XY ? "XY" : "YX"; }

const char* to_string(Port p) {
  switch (p) {
    case North: return "N";
    case East: return "E";
    case South: return "S";
    case West: return "W";
    default: return "L";
  }
}

MeshConfig::MeshConfig(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 2 || cols < 2)
    throw ConfigError("mesh must be at least 2x2 (got " + std::to_string(rows) + "x" +
                      std::to_string(cols) + ")");
}

std::optional<Coord> MeshConfig::neighbor(Coord c, Port p) const {
  Coord n = c;
  switch (p) {
    case North: --n.row; break;
    case South: ++n.row; break;
    case East: ++n.col; break;
    case West: --n.col; break;
    default: return std::nullopt;
  }
  if (!contains(n)) return std::nullopt;
  return n;
}

std::vector<Coord> path(const MeshConfig& mesh, Coord src, Coord dst, RouteAction action) {
  if (!mesh.contains(src) || !mesh.contains(dst))
    throw std::invalid_argument("route endpoint outside mesh");
  if (src == dst) throw std::invalid_argument("zero-length route");

  std::vector<Coord> hops;
  hops.reserve(static_cast<std::size_t>(hop_distance(src, dst)) + 1);
  Coord cur = src;
  hops.push_back(cur);
  auto walk_cols = [&] {
    while (cur.col != dst.col) {
      cur.col += dst.col > cur.col ? 1 : -1;
      hops.push_back(cur);
    }
  };
  auto walk_rows = [&] {
    while (cur.row != dst.row) {
      cur.row += dst.row > cur.row ? 1 : -1;
      hops.push_back(cur);
    }
  };
  if (action == RouteAction::XY) {
    walk_cols();
    walk_rows();
  } else {
    walk_rows();
    walk_cols();
  }
  return hops;
}

std::optional<Coord> turning_router(Coord src, Coord dst, RouteAction action) {
  if (src == dst) throw std::invalid_argument("zero-length route");
  if (src.row == dst.row || src.col == dst.col) return std::nullopt;
  if (action == RouteAction::XY) return Coord{src.row, dst.col};
  return Coord{dst.row, src.col};
}

Port direction(Coord from, Coord to) {
  if (to.row < from.row) return North;
  if (to.row > from.row) return South;
  if (to.col > from.col) return East;
  if (to.col < from.col) return West;
  return Local;
}

bool is_straight_at(std::span<const Coord> route, Coord node) {
  auto it = std::find(route.begin(), route.end(), node);
  if (it == route.end()) throw std::invalid_argument("node " + to_string(node) + " not on route");
  if (it == route.begin() || it + 1 == route.end()) return false;
  return direction(*(it - 1), *it) == direction(*it, *(it + 1));
}

Port route_output(Coord here, Coord dst, RouteAction action) {
  if (action == RouteAction::XY) {
    if (dst.col > here.col) return East;
    if (dst.col < here.col) return West;
    if (dst.row > here.row) return South;
    if (dst.row < here.row) return North;
  } else {
    if (dst.row > here.row) return South;
    if (dst.row < here.row) return North;
    if (dst.col > here.col) return East;
    if (dst.col < here.col) return West;
  }
  return Local;
}

}  // namespace cafeen

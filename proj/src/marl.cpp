// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "marl.hpp"

#include <algorithm>
#include <cmath>

namespace cafeen {

void MarlParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("marl.alpha must be in (0, 1]");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("marl.epsilon must be in [0, 1)");
  if (t_epoch < 1) throw ConfigError("marl.t_epoch must be >= 1");
}

std::string StateKey::name() const {
  return (kind == Kind::Row ? "row" : "col") + std::to_string(index);
}

QTable::QTable(int rows, int cols, bool quantize_4bit)
    : rows_(rows), cols_(cols), quantize_(quantize_4bit),
      values_(static_cast<std::size_t>(rows + cols) * 2, 0.0) {}

std::size_t QTable::slot(StateKey key, RouteAction a) const {
  const int s = key.kind == StateKey::Kind::Row ? key.index : rows_ + key.index;
  return static_cast<std::size_t>(s) * 2 + static_cast<std::size_t>(a);
}

StateKey QTable::key_at(int state_slot) const {
  return state_slot < rows_ ? StateKey::row(state_slot) : StateKey::col(state_slot - rows_);
}

void QTable::set(StateKey key, RouteAction a, double v) {
  if (quantize_) v = std::clamp(std::round(v), 0.0, 15.0);
  values_[slot(key, a)] = v;
}

void QTable::update(StateKey key, RouteAction a, double reward, double alpha) {
  set(key, a, q_update(get(key, a), alpha, reward));
}

RouteAction greedy_action(Coord src, Coord dst, const QTable& q) {
  if (src.row == dst.row || src.col == dst.col) return RouteAction::XY;
  const double xy = q.get(StateKey::col(dst.col), RouteAction::XY);
  const double yx = q.get(StateKey::row(dst.row), RouteAction::YX);
  return yx > xy ? RouteAction::YX : RouteAction::XY;
}

RouteAction select_action(Coord src, Coord dst, const QTable& q, const MarlParams& params, Rng& rng) {
  if (src.row == dst.row || src.col == dst.col) return RouteAction::XY;
  if (params.epsilon > 0.0 && rng.uniform() < params.epsilon)
    return rng.below(2) == 0 ? RouteAction::XY : RouteAction::YX;
  return greedy_action(src, dst, q);
}

bool EpochTracker::on_router_wake_by_turn(Coord router, Cycle cycle, const MarlParams& params) {
  if (epoch_.open) return false;
  epoch_ = RewardEpoch{router, cycle, cycle + params.t_epoch, 0, true};
  return true;
}

void EpochTracker::on_turn_completed() {
  if (epoch_.open) ++epoch_.turn_count;
}

int EpochTracker::close(EpochCloseCause) {
  if (!epoch_.open) throw InvariantError("close_epoch on a router with no open epoch");
  epoch_.open = false;
  return epoch_.turn_count;
}

int broadcast_hops(const MeshConfig& mesh) { return (mesh.cols() - 1) + (mesh.rows() - 1); }

std::vector<RewardDelivery> broadcast_reward(const MeshConfig& mesh, Coord t, int reward, Cycle now,
                                             bool zero_latency) {
  std::vector<RewardDelivery> out;
  out.reserve(static_cast<std::size_t>(mesh.rows() + mesh.cols() - 1));
  auto add = [&](Coord c) {
    const Cycle delay = zero_latency ? 0 : hop_distance(c, t);
    out.push_back({c, t, reward, now + delay});
  };
  add(t);
  for (int c = 0; c < mesh.cols(); ++c)
    if (c != t.col) add({t.row, c});
  for (int r = 0; r < mesh.rows(); ++r)
    if (r != t.row) add({r, t.col});
  return out;
}

void apply_update(QTable& q, Coord agent, Coord t, double reward, double alpha) {
  const bool same_row = agent.row == t.row;
  const bool same_col = agent.col == t.col;
  if (!same_row && !same_col)
    throw InvariantError("reward for " + to_string(t) + " delivered to unrelated agent " + to_string(agent));
  if (same_row) q.update(StateKey::col(t.col), RouteAction::XY, reward, alpha);
  if (same_col) q.update(StateKey::row(t.row), RouteAction::YX, reward, alpha);
}

}  // namespace cafeen

// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rng.hpp"
#include "topology.hpp"
#include "traffic.hpp"

namespace cafeen {

struct MarlParams {
  double alpha = 0.01;
  double epsilon = 0.05;
  int t_epoch = 16;
  bool quantize_4bit = false;
  bool zero_latency_broadcast = false;
  bool count_ejects_as_turns = true;

  void validate() const;
};

/// Q-table state: a destination row or a destination column.
struct StateKey {
  enum class Kind : std::uint8_t { Row, Col };
  Kind kind = Kind::Row;
  int index = 0;

  static StateKey row(int r) { return {Kind::Row, r}; }
  static StateKey col(int c) { return {Kind::Col, c}; }
  std::string name() const;
};

/// Per-router table of (rows + cols) states x {XY, YX}.
///
/// Rows occupy state slots [0, rows), columns [rows, rows + cols).
class QTable {
 public:
  QTable(int rows, int cols, bool quantize_4bit = false);

  int num_states() const { return rows_ + cols_; }
  static constexpr int num_actions() { return 2; }

  double get(StateKey key, RouteAction a) const { return values_[slot(key, a)]; }
  void set(StateKey key, RouteAction a, double v);

  /// Q <- (1 - alpha) Q + alpha r for one entry.
  void update(StateKey key, RouteAction a, double reward, double alpha);

  StateKey key_at(int state_slot) const;
  bool quantized() const { return quantize_; }

 private:
  std::size_t slot(StateKey key, RouteAction a) const;

  int rows_;
  int cols_;
  bool quantize_;
  std::vector<double> values_;
};

/// Single-step Q-learning update: the bootstrap term vanishes because the
/// routing choice leads straight to a terminal state.
constexpr double q_update(double q, double alpha, double reward) {
  return (1.0 - alpha) * q + alpha * reward;
}

/// Epsilon-greedy XY/YX choice. Aligned flows always get XY and draw no randomness.
RouteAction select_action(Coord src, Coord dst, const QTable& q, const MarlParams& params, Rng& rng);

/// Greedy choice (epsilon = 0); ties go to XY.
RouteAction greedy_action(Coord src, Coord dst, const QTable& q);

enum class EpochCloseCause : std::uint8_t { Deadline, Regated };

struct RewardEpoch {
  Coord turning_router;
  Cycle start_cycle = 0;
  Cycle deadline = 0;
  int turn_count = 0;
  bool open = false;
};

/// Reward-epoch lifecycle for one router.
class EpochTracker {
 public:
  /// Opens an epoch at `cycle`; returns false (and changes nothing) if one is already open.
  bool on_router_wake_by_turn(Coord router, Cycle cycle, const MarlParams& params);
  void on_turn_completed();
  /// Closes the open epoch and returns its reward.
  int close(EpochCloseCause cause);

  bool open() const { return epoch_.open; }
  const RewardEpoch& epoch() const { return epoch_; }

 private:
  RewardEpoch epoch_;
};

struct RewardDelivery {
  Coord agent;
  Coord turning_router;
  int reward = 0;
  Cycle deliver_at = 0;
};

/// Reward flits fan out along the turning router's row and column at one hop
/// per cycle. The turning router itself is listed first at delay 0.
std::vector<RewardDelivery> broadcast_reward(const MeshConfig& mesh, Coord turning_router, int reward,
                                             Cycle now, bool zero_latency);

/// Link hops travelled by one broadcast: (cols - 1) + (rows - 1).
int broadcast_hops(const MeshConfig& mesh);

/// Applies a received reward to the agent's table. Throws InvariantError when
/// the agent shares neither row nor column with the turning router.
void apply_update(QTable& q, Coord agent_at, Coord turning_router, double reward, double alpha);

}  // namespace cafeen

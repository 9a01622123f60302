// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>

#include "doctest.h"
#include "marl.hpp"

using namespace cafeen;

TEST_CASE("state space is rows plus columns") {
  const QTable q(8, 8);
  CHECK(q.num_states() == 16);
  CHECK(QTable::num_actions() == 2);
  const QTable r(3, 5);
  CHECK(r.num_states() == 8);
  CHECK(r.key_at(0).name() == "row0");
  CHECK(r.key_at(2).name() == "row2");
  CHECK(r.key_at(3).name() == "col0");
  CHECK(r.key_at(7).name() == "col4");
}

TEST_CASE("fresh tables are zero and entries are independent") {
  QTable q(4, 4);
  for (int s = 0; s < q.num_states(); ++s)
    for (RouteAction a : {RouteAction::XY, RouteAction::YX}) CHECK(q.get(q.key_at(s), a) == 0.0);
  q.set(StateKey::row(2), RouteAction::YX, 3.5);
  CHECK(q.get(StateKey::row(2), RouteAction::YX) == 3.5);
  CHECK(q.get(StateKey::row(2), RouteAction::XY) == 0.0);
  CHECK(q.get(StateKey::col(2), RouteAction::YX) == 0.0);
}

TEST_CASE("update rule") {
  CHECK(q_update(0.0, 0.5, 10.0) == 5.0);
  CHECK(q_update(4.0, 0.25, 0.0) == 3.0);
  CHECK(q_update(7.0, 0.0, 100.0) == 7.0);
  CHECK(q_update(7.0, 1.0, 2.0) == 2.0);
  static_assert(q_update(2.0, 0.5, 4.0) == 3.0);
  QTable q(2, 2);
  q.set(StateKey::col(0), RouteAction::XY, 2.0);
  q.update(StateKey::col(0), RouteAction::XY, 4.0, 0.5);
  CHECK(q.get(StateKey::col(0), RouteAction::XY) == 3.0);
}

TEST_CASE("property: constant reward converges geometrically") {
  const double alpha = 0.01;
  double q = 10.0;
  const double r = 2.0;
  for (int n = 1; n <= 500; ++n) {
    q = q_update(q, alpha, r);
    CHECK(std::abs((q - r) - std::pow(1 - alpha, n) * 8.0) < 1e-9);
  }
}

TEST_CASE("4-bit quantization clamps and rounds") {
  QTable q(2, 2, true);
  q.set(StateKey::row(0), RouteAction::XY, 3.4);
  CHECK(q.get(StateKey::row(0), RouteAction::XY) == 3.0);
  q.set(StateKey::row(0), RouteAction::XY, 3.6);
  CHECK(q.get(StateKey::row(0), RouteAction::XY) == 4.0);
  q.set(StateKey::row(0), RouteAction::XY, 40);
  CHECK(q.get(StateKey::row(0), RouteAction::XY) == 15.0);
  q.set(StateKey::row(0), RouteAction::XY, -2);
  CHECK(q.get(StateKey::row(0), RouteAction::XY) == 0.0);
}

TEST_CASE("greedy choice compares the two turning routers") {
  QTable q(4, 4);
  const Coord src{0, 0}, dst{2, 3};
  CHECK(greedy_action(src, dst, q) == RouteAction::XY);  // tie
  q.set(StateKey::row(2), RouteAction::YX, 1.0);
  CHECK(greedy_action(src, dst, q) == RouteAction::YX);
  q.set(StateKey::col(3), RouteAction::XY, 1.0);
  CHECK(greedy_action(src, dst, q) == RouteAction::XY);
  q.set(StateKey::col(3), RouteAction::XY, 0.5);
  CHECK(greedy_action(src, dst, q) == RouteAction::YX);
}

TEST_CASE("aligned flows take XY without drawing randomness") {
  QTable q(4, 4);
  q.set(StateKey::row(0), RouteAction::YX, 9.0);
  MarlParams p;
  p.epsilon = 0.99;
  Rng used(5, "agent"), fresh(5, "agent");
  CHECK(select_action({0, 0}, {0, 3}, q, p, used) == RouteAction::XY);
  CHECK(select_action({0, 1}, {3, 1}, q, p, used) == RouteAction::XY);
  CHECK(used.uniform() == fresh.uniform());
}

TEST_CASE("exploration rate follows epsilon") {
  QTable q(4, 4);
  MarlParams p;
  p.epsilon = 0.2;
  Rng rng(9, "agent");
  int yx = 0;
  constexpr int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) yx += select_action({0, 0}, {2, 3}, q, p, rng) == RouteAction::YX;
  // Greedy is XY on a tie; exploration picks uniformly, so YX has probability epsilon / 2.
  CHECK(std::abs(yx / static_cast<double>(kDraws) - 0.1) < 0.01);
}

TEST_CASE("epoch lifecycle") {
  MarlParams p;
  EpochTracker e;
  CHECK_FALSE(e.open());
  CHECK_THROWS(e.close(EpochCloseCause::Deadline));
  CHECK(e.on_router_wake_by_turn({1, 1}, 100, p));
  CHECK(e.open());
  CHECK(e.epoch().deadline == 100 + p.t_epoch);
  CHECK_FALSE(e.on_router_wake_by_turn({1, 1}, 101, p));
  e.on_turn_completed();
  e.on_turn_completed();
  e.on_turn_completed();
  CHECK(e.close(EpochCloseCause::Regated) == 3);
  CHECK_FALSE(e.open());
  e.on_turn_completed();  // ignored while closed
  CHECK(e.on_router_wake_by_turn({1, 1}, 200, p));
  CHECK(e.close(EpochCloseCause::Deadline) == 0);
}

TEST_CASE("reward broadcast covers the row and column at one hop per cycle") {
  const MeshConfig mesh(4, 5);
  const Coord t{1, 2};
  const auto ds = broadcast_reward(mesh, t, 3, 50, false);
  CHECK(ds.size() == static_cast<std::size_t>(mesh.rows() + mesh.cols() - 1));
  CHECK(ds.front().agent == t);
  CHECK(ds.front().deliver_at == 50);
  std::set<int> agents;
  for (const RewardDelivery& d : ds) {
    CHECK((d.agent.row == t.row || d.agent.col == t.col));
    CHECK(d.deliver_at == 50 + hop_distance(d.agent, t));
    CHECK(d.reward == 3);
    CHECK(d.turning_router == t);
    agents.insert(mesh.flat(d.agent));
  }
  CHECK(agents.size() == ds.size());
  for (const RewardDelivery& d : broadcast_reward(mesh, t, 3, 50, true)) CHECK(d.deliver_at == 50);
  CHECK(broadcast_hops(MeshConfig(8, 8)) == 14);
  CHECK(broadcast_hops(mesh) == 7);
}

TEST_CASE("updates land on the entry whose route turns at the rewarding router") {
  const Coord t{1, 2};
  QTable row_agent(4, 4), col_agent(4, 4), self(4, 4);
  // An agent in t's row reaches t by XY when the destination column is t's column.
  apply_update(row_agent, {1, 0}, t, 4.0, 0.5);
  CHECK(row_agent.get(StateKey::col(2), RouteAction::XY) == 2.0);
  // An agent in t's column reaches t by YX when the destination row is t's row.
  apply_update(col_agent, {3, 2}, t, 4.0, 0.5);
  CHECK(col_agent.get(StateKey::row(1), RouteAction::YX) == 2.0);
  CHECK_THROWS_AS(apply_update(row_agent, {0, 0}, t, 4.0, 0.5), InvariantError);
  apply_update(self, t, t, 4.0, 0.5);
  CHECK(self.get(StateKey::col(2), RouteAction::XY) == 2.0);
  CHECK(self.get(StateKey::row(1), RouteAction::YX) == 2.0);
}

TEST_CASE("parameter validation") {
  MarlParams p;
  CHECK_NOTHROW(p.validate());
  p.alpha = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = MarlParams{};
  p.epsilon = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = MarlParams{};
  p.t_epoch = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

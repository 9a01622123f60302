// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "router.hpp"

using namespace cafeen;

namespace {

Packet route(Coord s, Coord d, RouteAction a = RouteAction::XY) {
  Packet p;
  p.src = s;
  p.dst = d;
  p.route_action = a;
  return p;
}

}  // namespace

TEST_CASE("flit classes along an XY route") {
  const Packet p = route({0, 0}, {2, 3});
  CHECK(classify_flit(p, {0, 0}, Local) == FlitClass::Injecting);
  CHECK(classify_flit(p, {0, 1}, West) == FlitClass::Straight);
  CHECK(classify_flit(p, {0, 3}, West) == FlitClass::Turning);
  CHECK(classify_flit(p, {1, 3}, North) == FlitClass::Straight);
  CHECK(classify_flit(p, {2, 3}, North) == FlitClass::Ejecting);
  CHECK_THROWS_AS(classify_flit(p, {1, 1}, West), InvariantError);
}

TEST_CASE("flit classes along a YX route") {
  const Packet p = route({3, 3}, {1, 0}, RouteAction::YX);
  CHECK(classify_flit(p, {2, 3}, South) == FlitClass::Straight);
  CHECK(classify_flit(p, {1, 3}, South) == FlitClass::Turning);
  CHECK(classify_flit(p, {1, 1}, East) == FlitClass::Straight);
  CHECK(classify_flit(p, {1, 0}, East) == FlitClass::Ejecting);
  CHECK_FALSE(on_route(p, {3, 0}));
  CHECK(on_route(p, {3, 3}));
}

TEST_CASE("a self-addressed head ejects at once") {
  CHECK(classify_flit(route({2, 2}, {2, 2}), {2, 2}, Local) == FlitClass::Ejecting);
}

TEST_CASE("VC partitioning splits the VCs in half by route class") {
  CHECK(assign_vc_class(RouteAction::XY) == VcClass::ClassXY);
  CHECK(assign_vc_class(RouteAction::YX) == VcClass::ClassYX);
  const VcRange xy = vc_range(RouteAction::XY, 4, true);
  const VcRange yx = vc_range(RouteAction::YX, 4, true);
  CHECK(xy.first == 0);
  CHECK(xy.last == 2);
  CHECK(yx.first == 2);
  CHECK(yx.last == 4);
  for (int v = 0; v < 4; ++v) CHECK(xy.contains(v) != yx.contains(v));
  const VcRange all = vc_range(RouteAction::YX, 3, false);
  CHECK(all.first == 0);
  CHECK(all.last == 3);
}

TEST_CASE("flit queue is a bounded FIFO") {
  FlitQueue q(3);
  CHECK(q.empty());
  for (std::uint16_t i = 0; i < 3; ++i) {
    Flit f;
    f.seq = i;
    q.push(f);
  }
  CHECK(q.full());
  CHECK_THROWS(q.push(Flit{}));
  CHECK(q.at(2).seq == 2);
  CHECK(q.pop().seq == 0);
  Flit f;
  f.seq = 7;
  q.push(f);  // wraps around
  CHECK(q.pop().seq == 1);
  CHECK(q.pop().seq == 2);
  CHECK(q.pop().seq == 7);
  CHECK(q.empty());
  CHECK_THROWS(q.pop());
}

TEST_CASE("packet pool reuses freed slots") {
  PacketPool pool;
  const auto a = pool.add(route({0, 0}, {1, 1}));
  const auto b = pool.add(route({0, 0}, {1, 2}));
  CHECK(a != b);
  CHECK(pool.live() == 2);
  pool.release(a);
  CHECK(pool.live() == 1);
  const auto c = pool.add(route({0, 0}, {1, 3}));
  CHECK(c == a);
  CHECK(pool[c].packet.dst == Coord{1, 3});
  CHECK(pool[c].live);
}

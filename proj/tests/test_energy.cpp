// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <numeric>

#include "doctest.h"
#include "engine.hpp"
#include "rng.hpp"

using namespace cafeen;

namespace {

double sum_table(const EnergyLedger::Table& t) {
  double s = 0;
  for (const auto& row : t) s = std::accumulate(row.begin(), row.end(), s);
  return s;
}

}  // namespace

TEST_CASE("static charges per router cycle") {
  const EnergyCoefficients k;
  EnergyLedger l(2, k);
  l.charge_cycle(0, {3, true, true});
  CHECK(l.total(EnergyCategory::Static) == doctest::Approx(3 * k.static_buffer_per_cycle + k.static_router_misc_per_cycle));
  CHECK(l.total(EnergyComponent::QTable) == doctest::Approx(k.static_qtable_per_cycle));
  CHECK(l.total(EnergyComponent::Bypass) == doctest::Approx(k.static_bypass_per_cycle));
  CHECK(l.router_total(1) == 0.0);

  // A fully gated router still leaks through its bypass path.
  l.charge_cycle(1, {0, false, false});
  CHECK(l.router_total(1) == doctest::Approx(k.static_bypass_per_cycle));
  CHECK(l.total(EnergyCategory::Overhead) == doctest::Approx(2 * k.static_bypass_per_cycle + k.static_qtable_per_cycle));
}

TEST_CASE("event charges land in their category and component") {
  const EnergyCoefficients k;
  struct Case {
    EnergyEvent e;
    EnergyCategory cat;
    EnergyComponent comp;
    double unit;
  };
  const Case cases[] = {
      {EnergyEvent::BufferWrite, EnergyCategory::Dynamic, EnergyComponent::Buffer, k.dyn_buffer_rw_per_flit},
      {EnergyEvent::BufferRead, EnergyCategory::Dynamic, EnergyComponent::Buffer, k.dyn_buffer_rw_per_flit},
      {EnergyEvent::CrossbarTraversal, EnergyCategory::Dynamic, EnergyComponent::Crossbar, k.dyn_xbar_per_flit},
      {EnergyEvent::LinkTraversal, EnergyCategory::Dynamic, EnergyComponent::Link, k.dyn_link_per_flit},
      {EnergyEvent::BypassTraversal, EnergyCategory::Overhead, EnergyComponent::Bypass, k.dyn_bypass_per_flit},
      {EnergyEvent::RewardFlitHop, EnergyCategory::Overhead, EnergyComponent::RewardChannel, k.dyn_reward_flit_per_hop},
      {EnergyEvent::FineWake, EnergyCategory::Wakeup, EnergyComponent::Buffer, k.wake_buffer},
      {EnergyEvent::CoarseWake, EnergyCategory::Wakeup, EnergyComponent::RouterMisc, k.wake_router},
  };
  for (const Case& c : cases) {
    EnergyLedger l(1, k);
    l.charge_event(0, c.e, 3);
    const auto& t = l.router_table(0);
    CHECK(t[static_cast<std::size_t>(c.cat)][static_cast<std::size_t>(c.comp)] == doctest::Approx(3 * c.unit));
    CHECK(l.total() == doctest::Approx(3 * c.unit));
  }
}

TEST_CASE("property: totals agree across categories, components and routers") {
  const EnergyCoefficients k;
  EnergyLedger l(6, k, true);
  Rng rng(2026, "energy.fuzz");
  for (int i = 0; i < 5000; ++i) {
    const int r = static_cast<int>(rng.below(6));
    if (rng.uniform() < 0.5) {
      l.charge_cycle(r, {static_cast<int>(rng.below(6)), rng.uniform() < 0.5, rng.uniform() < 0.5}, i);
    } else {
      l.charge_event(r, static_cast<EnergyEvent>(rng.below(8)), static_cast<std::uint32_t>(1 + rng.below(4)), i);
    }
  }
  double by_cat = 0, by_comp = 0, by_router = 0;
  for (int c = 0; c < kEnergyCategories; ++c) by_cat += l.total(static_cast<EnergyCategory>(c));
  for (int c = 0; c < kEnergyComponents; ++c) by_comp += l.total(static_cast<EnergyComponent>(c));
  for (int r = 0; r < l.routers(); ++r) by_router += l.router_total(r);
  CHECK(by_cat == doctest::Approx(l.total()));
  CHECK(by_comp == doctest::Approx(l.total()));
  CHECK(by_router == doctest::Approx(l.total()));
  CHECK(sum_table(l.totals()) == doctest::Approx(l.total()));

  const EnergyLedger replayed = EnergyLedger::replay(6, k, l.log());
  CHECK(l.log().size() == 5000);
  for (int r = 0; r < 6; ++r) CHECK(replayed.router_total(r) == doctest::Approx(l.router_total(r)));
}

TEST_CASE("coefficient validation") {
  EnergyCoefficients k;
  CHECK_NOTHROW(k.validate());
  k.wake_router = -1;
  CHECK_THROWS_AS(k.validate(), ConfigError);
}

// One packet on an always-on mesh: every router on the path writes, reads and
// switches each flit once, and every inter-router link carries it once.
TEST_CASE("single packet energy with the network always on") {
  SimConfig c;
  c.policy = Policy::NoPg;
  c.traffic.pattern = Pattern::Trace;
  Packet p;
  p.src = {0, 0};
  p.dst = {0, 7};
  p.length = 5;
  Simulation sim(c, {p});
  const Metrics m = sim.run();
  const EnergyCoefficients k;
  const double routers_on_path = 8, links = 7, flits = 5;
  const double dynamic = flits * (routers_on_path * (2 * k.dyn_buffer_rw_per_flit + k.dyn_xbar_per_flit) +
                                  links * k.dyn_link_per_flit);
  CHECK(m.energy.total(EnergyCategory::Dynamic) == doctest::Approx(dynamic));
  const double per_router_cycle =
      kNumPorts * k.static_buffer_per_cycle + k.static_router_misc_per_cycle + k.static_bypass_per_cycle;
  CHECK(m.energy.total() == doctest::Approx(dynamic + per_router_cycle * 64 * static_cast<double>(sim.now())));
  CHECK(m.energy.total(EnergyCategory::Wakeup) == 0.0);
}

TEST_CASE("gated policies pay for every wake they perform") {
  for (Policy pol : {Policy::TootCoarse, Policy::CafeenFineOnly, Policy::CafeenFull}) {
    CAPTURE(to_string(pol));
    SimConfig c;
    c.rows = c.cols = 4;
    c.policy = pol;
    c.traffic.pir = 0.02;
    c.traffic.total_packets = 500;
    const Metrics m = Simulation(c).run();
    const EnergyCoefficients k;
    CHECK(m.energy.total(EnergyCategory::Wakeup) ==
          doctest::Approx(k.wake_buffer * static_cast<double>(m.fine_wakes) +
                          k.wake_router * static_cast<double>(m.coarse_wakes)));
    CHECK((m.energy.total(EnergyComponent::QTable) > 0.0) == (pol == Policy::CafeenFull));
  }
}

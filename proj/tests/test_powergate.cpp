// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "powergate.hpp"

using namespace cafeen;

TEST_CASE("idle threshold gates on the t_idle-th idle cycle") {
  GatedUnit u;
  CHECK_FALSE(step_idle_gate(u, false, 3));
  CHECK_FALSE(step_idle_gate(u, false, 3));
  CHECK(step_idle_gate(u, false, 3));
  CHECK(u.state.is_gated());
  CHECK_FALSE(step_idle_gate(u, false, 3));
}

TEST_CASE("busy cycles reset the idle counter") {
  GatedUnit u;
  step_idle_gate(u, false, 2);
  step_idle_gate(u, true, 2);
  CHECK_FALSE(step_idle_gate(u, false, 2));
  CHECK(step_idle_gate(u, false, 2));
}

TEST_CASE("waking counts down to active") {
  GatedUnit u{PowerState::waking(3), 0};
  CHECK(u.state.powered());
  CHECK_FALSE(step_wake(u));
  CHECK_FALSE(step_wake(u));
  CHECK(step_wake(u));
  CHECK(u.state.is_active());
}

TEST_CASE("always-on routers ignore wake requests") {
  RouterPower pw(PgParams{}, RouterPower::Policy::AlwaysOn);
  CHECK(pw.active_buffers() == kNumPorts);
  CHECK(pw.request_wake(East) == WakeOutcome::AlreadyPowered);
  for (int i = 0; i < 100; ++i) pw.tick(0);
  CHECK(pw.active_buffers() == kNumPorts);
}

TEST_CASE("fine wakes are serialized one buffer at a time") {
  const PgParams p;
  RouterPower pw(p, RouterPower::Policy::FineOnly);
  CHECK(pw.fully_gated());
  CHECK(pw.request_wake(East) == WakeOutcome::FineStarted);
  CHECK(pw.request_wake(West) == WakeOutcome::Queued);
  CHECK(pw.request_wake(North) == WakeOutcome::Queued);
  CHECK(pw.request_wake(East) == WakeOutcome::AlreadyPowered);

  const std::uint8_t busy = (1u << East) | (1u << West) | (1u << North);
  std::vector<int> ready_at(kNumPorts, -1);
  for (int t = 1; t <= 3 * p.fine_t_on; ++t) {
    const TickReport r = pw.tick(busy);
    for (int q = 0; q < kNumPorts; ++q)
      if (r.activated_mask & (1u << q)) ready_at[static_cast<std::size_t>(q)] = t;
  }
  CHECK(ready_at[East] == p.fine_t_on);
  CHECK(ready_at[West] == 2 * p.fine_t_on);
  CHECK(ready_at[North] == 3 * p.fine_t_on);
  CHECK(pw.fine_wakes() == 3);
  CHECK(pw.buffer(South).is_gated());
}

TEST_CASE("fine buffers gate individually after t_idle") {
  const PgParams p;
  RouterPower pw(p, RouterPower::Policy::FineOnly);
  pw.set_all(PowerState::active());
  TickReport r;
  for (int t = 0; t < p.fine_t_idle; ++t) r = pw.tick(1u << South);
  CHECK(pw.active_buffers() == 1);
  CHECK(pw.buffer_active(South));
  CHECK(r.gated_mask == ((1u << kNumPorts) - 1 - (1u << South)));
  CHECK_FALSE(r.router_fully_gated);
  for (int t = 0; t < p.fine_t_idle; ++t) r = pw.tick(0);
  CHECK(pw.fully_gated());
  CHECK(r.router_fully_gated);
}

TEST_CASE("coarse wake powers the whole router for coarse_t_on cycles") {
  const PgParams p;
  RouterPower pw(p, RouterPower::Policy::CoarseOnly);
  CHECK(pw.mode() == PgMode::Coarse);
  CHECK(pw.request_wake(Local) == WakeOutcome::CoarseStarted);
  CHECK(pw.powered_buffers() == kNumPorts);
  CHECK(pw.active_buffers() == 0);
  CHECK(pw.misc_powered());
  for (int t = 1; t < p.coarse_t_on; ++t) pw.tick(0);
  CHECK(pw.active_buffers() == 0);
  const TickReport r = pw.tick(0);
  CHECK(r.activated_mask == (1u << kNumPorts) - 1);
  CHECK(pw.coarse_wakes() == 1);

  // The activating tick already counts as idle; everything gates together.
  int gated_at = 1;
  while (!pw.tick(0).router_fully_gated && gated_at < 100) ++gated_at;
  CHECK(gated_at + 1 == p.coarse_t_idle);
  CHECK(pw.fully_gated());
}

TEST_CASE("a busy port keeps a coarse router on") {
  const PgParams p;
  RouterPower pw(p, RouterPower::Policy::CoarseOnly);
  pw.set_all(PowerState::active());
  for (int t = 0; t < 50; ++t) pw.tick(1u << West);
  CHECK(pw.active_buffers() == kNumPorts);
}

TEST_CASE("mode switches up on distinct requests and back down after quiet") {
  PgParams p;
  RouterPower pw(p, RouterPower::Policy::Adaptive);
  CHECK(pw.mode() == PgMode::Fine);
  pw.request_wake(East);
  pw.tick(0);
  CHECK(pw.mode() == PgMode::Fine);
  CHECK(pw.window_distinct() == 1);
  pw.request_wake(East);  // already waking, not a new request
  pw.tick(0);
  CHECK(pw.mode() == PgMode::Fine);

  RouterPower up(p, RouterPower::Policy::Adaptive);
  up.request_wake(East);
  up.request_wake(West);
  const TickReport r = up.tick(0);
  CHECK(r.mode_changed);
  CHECK(up.mode() == PgMode::Coarse);

  // The window still holds both requests for mode_window cycles; then the
  // quiet count starts.
  int down_at = -1;
  for (int t = 2; t <= p.mode_window + p.mode_quiet + 5 && down_at < 0; ++t) {
    if (up.tick(0).mode_changed) down_at = t;
  }
  CHECK(down_at == p.mode_window + p.mode_quiet);
  CHECK(up.mode() == PgMode::Fine);
}

TEST_CASE("requests spread beyond the window do not switch modes") {
  PgParams p;
  RouterPower pw(p, RouterPower::Policy::Adaptive);
  pw.request_wake(East);
  for (int t = 0; t < p.mode_window; ++t) pw.tick(0);
  for (int t = 0; t < 10; ++t) pw.tick(0);
  pw.request_wake(West);
  pw.tick(0);
  CHECK(pw.mode() == PgMode::Fine);
}

TEST_CASE("parameter validation") {
  PgParams p;
  CHECK_NOTHROW(p.validate());
  p.fine_t_on = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = PgParams{};
  p.mode_up_threshold = 6;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("break-even time") {
  CHECK(break_even_time(2.0, 1.0) == 2);
  CHECK(break_even_time(12.0, 7.0) == 2);
  CHECK(break_even_time(12.0, 3.0) == 4);
  CHECK(break_even_time(0.0, 1.0) == 0);
  CHECK_THROWS(break_even_time(1.0, 0.0));
}

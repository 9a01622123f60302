// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "engine.hpp"

#include <algorithm>
#include <sstream>

namespace cafeen {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Deadlock: return "deadlock";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::Failed: return "failed";
  }
  return "?";
}

double Metrics::single_active_buffer_share() const {
  std::uint64_t any = 0;
  for (int k = 1; k <= kNumPorts; ++k) any += active_buffer_hist[static_cast<std::size_t>(k)];
  return any == 0 ? 0.0 : static_cast<double>(active_buffer_hist[1]) / static_cast<double>(any);
}

Simulation::Simulation(const SimConfig& cfg, std::vector<Packet> packets)
    : cfg_(cfg), mesh_(cfg.rows, cfg.cols), traits_(traits(cfg.policy)) {
  cfg_.validate();
  routers_.reserve(static_cast<std::size_t>(mesh_.nodes()));
  for (int i = 0; i < mesh_.nodes(); ++i) routers_.emplace_back(i, mesh_.coord(i), mesh_, cfg_, cfg_.seed);

  if (cfg_.traffic.pattern == Pattern::Trace) {
    trace_ = std::move(packets);
    if (trace_.empty() && !cfg_.traffic.trace_path.empty()) trace_ = load_trace(cfg_.traffic.trace_path, mesh_);
    std::stable_sort(trace_.begin(), trace_.end(),
                     [](const Packet& a, const Packet& b) { return a.inject_cycle < b.inject_cycle; });
    for (const Packet& p : trace_) {
      if (!mesh_.contains(p.src) || !mesh_.contains(p.dst) || p.src == p.dst || p.length < 1)
        throw ConfigError("invalid trace packet " + std::to_string(p.id));
    }
    target_ = trace_.size();
  } else {
    synthetic_.emplace(mesh_, cfg_.traffic, cfg_.seed);
    target_ = cfg_.traffic.pir > 0.0 ? cfg_.traffic.total_packets : 0;
  }

  reward_wheel_.resize(static_cast<std::size_t>(mesh_.rows() + mesh_.cols() + 2));
  coarse_cycles_.assign(routers_.size(), 0);
  metrics_.energy = EnergyLedger(mesh_.nodes(), cfg_.energy);
  if (cfg_.run.mode == RunMode::Drain && target_ == 0) done_ = true;
}

void Simulation::observe_qtables(Cycle interval, QTableObserver observer) {
  observe_interval_ = interval;
  observer_ = std::move(observer);
}

bool Simulation::finished() const { return done_; }

void Simulation::inject_phase() {
  auto enqueue = [&](const Packet& p) {
    const std::uint32_t idx = pool_.add(p);
    routers_[static_cast<std::size_t>(mesh_.flat(p.src))].enqueue_source(idx);
    ++metrics_.packets_created;
  };
  if (synthetic_) {
    if (synthetic_->exhausted() && cfg_.run.mode == RunMode::Drain) return;
    for (const Packet& p : synthetic_->next_injections(now_)) enqueue(p);
  } else {
    while (trace_pos_ < trace_.size() && trace_[trace_pos_].inject_cycle <= now_) {
      Packet p = trace_[trace_pos_++];
      p.inject_cycle = std::max(p.inject_cycle, now_);
      enqueue(p);
    }
  }
}

void Simulation::power_phase() {
  for (auto& r : routers_) {
    RouterPower& pw = r.power();
    if (pw.policy() == RouterPower::Policy::AlwaysOn) continue;
    const TickReport rep = pw.tick(r.busy_mask());
    if (rep.fine_wakes_started)
      metrics_.energy.charge_event(r.id(), EnergyEvent::FineWake, rep.fine_wakes_started, now_);
    if (rep.mode_changed) ++metrics_.mode_switches;
    if (rep.router_fully_gated && r.epoch().open()) regated_.push_back(r.id());
    if (cfg_.run.event_log) {
      if (rep.gated_mask) log_.push_back({now_, r.id(), "gated", 0, rep.gated_mask});
      if (rep.activated_mask) log_.push_back({now_, r.id(), "active", 0, rep.activated_mask});
      if (rep.mode_changed) log_.push_back({now_, r.id(), std::string("mode_") + to_string(pw.mode()), 0, 0});
    }
  }
}

void Simulation::reward_phase() {
  auto& bucket = reward_wheel_[static_cast<std::size_t>(now_) % reward_wheel_.size()];
  for (const RewardDelivery& d : bucket) {
    if (d.deliver_at != now_) throw InvariantError("reward wheel out of sync");
    apply_update(router(d.agent).qtable(), d.agent, d.turning_router, d.reward, cfg_.marl.alpha);
  }
  bucket.clear();
}

void Simulation::router_phase() {
  RouterEnv env;
  env.now = now_;
  env.mesh = &mesh_;
  env.params = &cfg_.router;
  env.marl = &cfg_.marl;
  env.policy = traits_;
  env.packets = &pool_;
  env.routers = &routers_;
  env.energy = &metrics_.energy;
  env.credit_returns = &credit_returns_;
  env.wakes = &wakes_;
  env.turns = &turns_;
  env.ejections = &ejections_;
  env.log = cfg_.run.event_log ? &log_ : nullptr;

  for (auto& r : routers_)
    if (!r.quiescent()) r.step(env);

  for (const CreditReturn& c : credit_returns_) routers_[static_cast<std::size_t>(c.router)].deliver_credit(c.port, c.vc);
  credit_returns_.clear();

  entered_ += env.entered_network;
  if (env.moved) last_move_ = now_;

  for (const Ejection& e : ejections_) {
    PacketRecord& rec = pool_[e.packet];
    if (e.seq != rec.ejected_flits) throw InvariantError("flits ejected out of order");
    ++rec.ejected_flits;
    if (!e.tail) continue;
    if (rec.ejected_flits != rec.packet.length) throw InvariantError("packet ejected with missing flits");
    const Packet& p = rec.packet;
    const Cycle latency = e.cycle - p.inject_cycle;
    const int hops = hop_distance(p.src, p.dst);
    if (latency < hops) throw InvariantError("packet latency below its hop count");
    if (p.inject_cycle >= cfg_.run.warmup_cycles) {
      latencies_.push_back(latency);
      hop_sum_ += hops;
      wake_wait_sum_ += static_cast<double>(rec.wake_wait);
    }
    if (cfg_.run.event_log) log_.push_back({e.cycle, mesh_.flat(p.dst), "eject", p.id, latency});
    ++metrics_.packets_ejected;
    last_eject_ = std::max(last_eject_, e.cycle);
    pool_.release(e.packet);
  }
  ejections_.clear();
}

void Simulation::broadcast(Coord t, int reward) {
  ++metrics_.turns_per_epoch_hist[reward];
  ++metrics_.epochs;
  metrics_.energy.charge_event(mesh_.flat(t), EnergyEvent::RewardFlitHop,
                               static_cast<std::uint32_t>(broadcast_hops(mesh_)), now_);
  for (const RewardDelivery& d : broadcast_reward(mesh_, t, reward, now_, cfg_.marl.zero_latency_broadcast)) {
    if (d.deliver_at <= now_)
      apply_update(router(d.agent).qtable(), d.agent, d.turning_router, d.reward, cfg_.marl.alpha);
    else
      reward_wheel_[static_cast<std::size_t>(d.deliver_at) % reward_wheel_.size()].push_back(d);
  }
}

void Simulation::epoch_phase() {
  if (!traits_.marl) {
    wakes_.clear();
    turns_.clear();
    regated_.clear();
    return;
  }
  for (int id : regated_) {
    Router& r = routers_[static_cast<std::size_t>(id)];
    if (r.epoch().open()) broadcast(r.pos(), r.epoch().close(EpochCloseCause::Regated));
  }
  regated_.clear();
  for (const WakeEvent& w : wakes_) {
    const bool trigger = w.cause == WakeCause::Turn ||
                         (w.cause == WakeCause::Eject && cfg_.marl.count_ejects_as_turns);
    Router& r = routers_[static_cast<std::size_t>(w.router)];
    if (trigger && r.power().mode() == PgMode::Coarse) r.epoch().on_router_wake_by_turn(r.pos(), now_, cfg_.marl);
  }
  wakes_.clear();
  for (const TurnEvent& t : turns_) {
    if (t.eject && !cfg_.marl.count_ejects_as_turns) continue;
    routers_[static_cast<std::size_t>(t.router)].epoch().on_turn_completed();
  }
  turns_.clear();
  for (auto& r : routers_) {
    if (r.epoch().open() && r.epoch().epoch().deadline <= now_)
      broadcast(r.pos(), r.epoch().close(EpochCloseCause::Deadline));
  }
}

void Simulation::energy_phase() {
  for (auto& r : routers_) {
    const RouterPower& pw = r.power();
    RouterPowerSnapshot s;
    s.powered_buffers = pw.powered_buffers();
    s.misc_powered = s.powered_buffers > 0;
    s.qtable_powered = traits_.marl && pw.mode() == PgMode::Coarse;
    metrics_.energy.charge_cycle(r.id(), s, now_);
  }
}

void Simulation::metrics_phase() {
  for (auto& r : routers_) {
    const RouterPower& pw = r.power();
    ++metrics_.active_buffer_hist[static_cast<std::size_t>(pw.active_buffers())];
    ++metrics_.powered_buffer_hist[static_cast<std::size_t>(pw.powered_buffers())];
    if (pw.mode() == PgMode::Coarse) ++coarse_cycles_[static_cast<std::size_t>(r.id())];
  }
}

void Simulation::check_credits() const {
  const int depth = cfg_.router.flits_per_vc;
  for (const Router& x : routers_) {
    for (int o = 0; o < kMeshPorts; ++o) {
      const auto n = mesh_.neighbor(x.pos(), static_cast<Port>(o));
      if (!n) continue;
      const Router& y = routers_[static_cast<std::size_t>(mesh_.flat(*n))];
      const Port in = opposite(static_cast<Port>(o));
      for (int v = 0; v < cfg_.router.vcs_per_port; ++v) {
        int in_link = 0;
        for (const LinkFlit& lf : y.inbox(in)) in_link += lf.vc == v ? 1 : 0;
        const InputVc& ivc = y.input(in, v);
        const int held = ivc.arrived.size() + ivc.buffer.size() + (ivc.latch_full ? 1 : 0);
        const int credits = x.output(static_cast<Port>(o), v).credits;
        if (credits + in_link + held != depth)
          throw InvariantError("credit conservation violated on link " + to_string(x.pos()) + "->" + to_string(*n) +
                               " vc " + std::to_string(v));
      }
    }
  }
}

std::string Simulation::dump_blocked() const {
  std::ostringstream os;
  int lines = 0;
  for (const Router& r : routers_) {
    for (int p = 0; p < kNumPorts && lines < 64; ++p) {
      for (int v = 0; v < cfg_.router.vcs_per_port && lines < 64; ++v) {
        const InputVc& ivc = r.input(static_cast<Port>(p), v);
        if (ivc.arrived.empty() && ivc.buffer.empty() && !ivc.latch_full) continue;
        const Flit& f = !ivc.buffer.empty() ? ivc.buffer.front() : (ivc.latch_full ? ivc.latch : ivc.arrived.front());
        const Packet& pk = pool_[f.packet].packet;
        os << "  router " << to_string(r.pos()) << " in " << to_string(static_cast<Port>(p)) << " vc " << v
           << ": arrived=" << ivc.arrived.size() << " buffered=" << ivc.buffer.size()
           << " latch=" << ivc.latch_full << " stage=" << static_cast<int>(ivc.stage)
           << " out=" << to_string(ivc.out_port) << "/" << ivc.out_vc << " packet " << pk.id << " "
           << to_string(pk.src) << "->" << to_string(pk.dst) << " " << to_string(pk.route_action)
           << " buffer_state=" << static_cast<int>(r.power().buffer(static_cast<Port>(p)).kind) << "\n";
        ++lines;
      }
    }
  }
  return os.str();
}

void Simulation::step() {
  if (done_) return;
  if (observer_ && observe_interval_ > 0 && now_ % observe_interval_ == 0) observer_(now_, routers_);

  inject_phase();
  power_phase();
  reward_phase();
  router_phase();
  epoch_phase();
  energy_phase();
  metrics_phase();

  if (cfg_.run.check_invariants) check_credits();

  if (packets_in_network() > 0 && now_ - last_move_ >= cfg_.run.watchdog_cycles) {
    throw SimulationError(RunStatus::Deadlock,
                          "deadlock: no flit moved for " + std::to_string(cfg_.run.watchdog_cycles) +
                              " cycles at cycle " + std::to_string(now_) + " with " +
                              std::to_string(packets_in_network()) + " packets in flight\n" + dump_blocked(),
                          snapshot_metrics());
  }

  ++now_;
  if (cfg_.run.mode == RunMode::Drain) {
    done_ = metrics_.packets_ejected >= target_;
  } else {
    done_ = now_ >= cfg_.run.cycles;
  }
}

Metrics Simulation::snapshot_metrics() const {
  Metrics m = metrics_;
  m.cycles = cfg_.run.mode == RunMode::Drain ? last_eject_ : now_;
  m.packets_measured = latencies_.size();
  if (!latencies_.empty()) {
    std::vector<Cycle> sorted = latencies_;
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&](double q) {
      const std::size_t i = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1) + 0.5);
      return static_cast<double>(sorted[std::min(i, sorted.size() - 1)]);
    };
    double sum = 0;
    for (Cycle l : latencies_) sum += static_cast<double>(l);
    const double n = static_cast<double>(latencies_.size());
    m.avg_latency = sum / n;
    m.p50_latency = pct(0.50);
    m.p95_latency = pct(0.95);
    m.p99_latency = pct(0.99);
    m.max_latency = sorted.back();
    m.avg_hops = hop_sum_ / n;
    m.avg_wake_wait = wake_wait_sum_ / n;
  }
  for (const Router& r : routers_) {
    m.fine_wakes += r.power().fine_wakes();
    m.coarse_wakes += r.power().coarse_wakes();
  }
  m.coarse_residency.resize(routers_.size());
  for (std::size_t i = 0; i < routers_.size(); ++i)
    m.coarse_residency[i] = now_ == 0 ? 0.0 : static_cast<double>(coarse_cycles_[i]) / static_cast<double>(now_);
  return m;
}

Metrics Simulation::run() {
  while (!done_) {
    if (cfg_.run.mode == RunMode::Drain && now_ >= cfg_.run.max_cycles) {
      throw SimulationError(RunStatus::Timeout,
                            "timeout: " + std::to_string(metrics_.packets_ejected) + " of " + std::to_string(target_) +
                                " packets drained after " + std::to_string(now_) + " cycles",
                            snapshot_metrics());
    }
    step();
  }
  return snapshot_metrics();
}

}  // namespace cafeen

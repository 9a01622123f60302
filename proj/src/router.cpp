// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "router.hpp"

#include <algorithm>

namespace cafeen {

std::uint32_t PacketPool::add(const Packet& p) {
  std::uint32_t idx;
  if (!free_.empty()) {
    idx = free_.back();
    free_.pop_back();
  } else {
    idx = static_cast<std::uint32_t>(slots_.size());
    slots_.emplace_back();
  }
  slots_[idx] = PacketRecord{p, 0, -1, 0, true};
  return idx;
}

void PacketPool::release(std::uint32_t idx) {
  slots_[idx].live = false;
  free_.push_back(idx);
}

void FlitQueue::push(const Flit& f) {
  if (full()) throw InvariantError("flit queue overflow");
  ring_[(head_ + count_) % ring_.size()] = f;
  ++count_;
}

Flit FlitQueue::pop() {
  if (empty()) throw InvariantError("pop from empty flit queue");
  Flit f = ring_[head_];
  head_ = (head_ + 1) % ring_.size();
  --count_;
  return f;
}

const char* to_string(FlitClass c) {
  switch (c) {
    case FlitClass::Straight: return "straight";
    case FlitClass::Turning: return "turning";
    case FlitClass::Ejecting: return "ejecting";
    case FlitClass::Injecting: return "injecting";
  }
  return "?";
}

namespace {
bool between(int v, int a, int b) { return v >= std::min(a, b) && v <= std::max(a, b); }
}  // namespace

bool on_route(const Packet& p, Coord n) {
  const Coord s = p.src, d = p.dst;
  if (p.route_action == RouteAction::XY)
    return (n.row == s.row && between(n.col, s.col, d.col)) || (n.col == d.col && between(n.row, s.row, d.row));
  return (n.col == s.col && between(n.row, s.row, d.row)) || (n.row == d.row && between(n.col, s.col, d.col));
}

FlitClass classify_flit(const Packet& p, Coord here, Port in_port) {
  if (!on_route(p, here))
    throw InvariantError("routing corruption: packet " + std::to_string(p.id) + " " + to_string(p.src) + "->" +
                         to_string(p.dst) + " " + to_string(p.route_action) + " reached " + to_string(here));
  const Port out = route_output(here, p.dst, p.route_action);
  if (out == Local) return FlitClass::Ejecting;
  if (in_port == Local) return FlitClass::Injecting;
  return out == opposite(in_port) ? FlitClass::Straight : FlitClass::Turning;
}

VcClass assign_vc_class(RouteAction a) { return a == RouteAction::XY ? VcClass::ClassXY : VcClass::ClassYX; }

VcRange vc_range(RouteAction a, int vcs, bool partitioned) {
  if (!partitioned) return {0, vcs};
  const int half = vcs / 2;
  return assign_vc_class(a) == VcClass::ClassXY ? VcRange{0, half} : VcRange{half, vcs};
}

Router::Router(int id, Coord pos, const MeshConfig& mesh, const SimConfig& cfg, std::uint64_t seed)
    : id_(id),
      pos_(pos),
      vcs_(cfg.router.vcs_per_port),
      depth_(cfg.router.flits_per_vc),
      power_(cfg.pg, traits(cfg.policy).power),
      q_(cfg.rows, cfg.cols, cfg.marl.quantize_4bit),
      agent_rng_(seed, "agent", static_cast<std::uint64_t>(id)) {
  for (int p = 0; p < kNumPorts; ++p) {
    in_[p].resize(static_cast<std::size_t>(vcs_));
    for (auto& ivc : in_[p]) {
      ivc.arrived = FlitQueue(depth_);
      ivc.buffer = FlitQueue(depth_);
    }
    out_[p].resize(static_cast<std::size_t>(vcs_));
    const bool linked = p == Local || mesh.neighbor(pos, static_cast<Port>(p)).has_value();
    for (auto& ovc : out_[p]) ovc.credits = linked ? depth_ : 0;
    sa_cycle_[p].fill(-100);
  }
}

bool Router::quiescent() const {
  return held_ == 0 && inbox_count_ == 0 && source_queue_.empty() && !inj_active_;
}

void Router::log(RouterEnv& env, const char* kind, std::uint32_t packet, long long detail) const {
  if (!env.log) return;
  const std::uint64_t pid = packet == kNoPacket ? 0 : (*env.packets)[packet].packet.id;
  env.log->push_back({env.now, id_, kind, pid, detail});
}

void Router::step(RouterEnv& env) {
  deliver_links(env);
  bypass_departures(env);
  switch_allocation(env);
  vc_allocation(env);
  inject(env);
  accept_arrivals(env);
  update_busy();
}

void Router::deliver_links(RouterEnv& env) {
  if (inbox_count_ == 0) return;
  for (int p = 0; p < kMeshPorts; ++p) {
    auto& box = inbox_[p];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < box.size(); ++i) {
      const LinkFlit& lf = box[i];
      if (lf.arrive <= env.now) {
        InputVc& ivc = in_[p][lf.vc];
        if (ivc.arrived.full()) throw InvariantError("credit overflow at router " + to_string(pos_));
        ivc.arrived.push(lf.flit);
        ++held_;
        --inbox_count_;
        env.moved = true;
        if (lf.flit.head) log(env, "arrive", lf.flit.packet, p);
      } else {
        box[keep++] = lf;
      }
    }
    box.resize(keep);
  }
}

void Router::send_on_link(RouterEnv& env, Port out, int vc, const Flit& f, Cycle arrive) {
  const Coord n = *env.mesh->neighbor(pos_, out);
  OutputVc& ovc = out_[out][static_cast<std::size_t>(vc)];
  if (ovc.credits <= 0) throw InvariantError("send without credit");
  if (arrive <= ovc.last_arrive) throw InvariantError("flits reordered on a link VC at " + to_string(pos_));
  --ovc.credits;
  ovc.last_arrive = arrive;
  (*env.routers)[static_cast<std::size_t>(env.mesh->flat(n))].push_link(
      opposite(out), LinkFlit{f, static_cast<std::uint8_t>(vc), arrive});
  env.energy->charge_event(id_, EnergyEvent::LinkTraversal, 1, env.now);
}

void Router::return_credit(RouterEnv& env, Port in_port, int vc) {
  if (in_port == Local) return;
  const Coord up = *env.mesh->neighbor(pos_, in_port);
  env.credit_returns->push_back({env.mesh->flat(up), opposite(in_port), vc});
}

void Router::check_stream(InputVc& ivc, const Flit& f) const {
  if (f.head) {
    if (!ivc.last_tail)
      throw InvariantError("wormhole interleaving at " + to_string(pos_) + ": packet slot " + std::to_string(f.packet) +
                           " arrived before the tail of slot " + std::to_string(ivc.last_packet));
  } else if (f.packet != ivc.last_packet || f.seq != ivc.last_seq + 1) {
    throw InvariantError("wormhole order broken at " + to_string(pos_));
  }
  ivc.last_packet = f.packet;
  ivc.last_seq = f.seq;
  ivc.last_tail = f.tail;
}

void Router::bypass_departures(RouterEnv& env) {
  for (int p = 0; p < kMeshPorts; ++p) {
    const Port in_port = static_cast<Port>(p);
    const Port out = opposite(in_port);
    // Buffered traffic reserved this link slot two cycles ago; it wins.
    if (sa_granted_at(out, env.now - 2)) continue;
    for (int k = 0; k < vcs_; ++k) {
      const int v = (bypass_rr_[p] + k) % vcs_;
      InputVc& ivc = in_[p][static_cast<std::size_t>(v)];
      if (!ivc.latch_full || ivc.latch.ready > env.now) continue;
      OutputVc& ovc = out_[out][static_cast<std::size_t>(v)];
      const Flit f = ivc.latch;
      if (f.head) {
        if (ovc.owner != kNoPacket) continue;
      } else if (ovc.owner != f.packet) {
        throw InvariantError("bypass body flit without its output VC");
      }
      if (ovc.credits <= 0) continue;
      // A buffered tail may still be in the pipeline on this VC.
      if (env.now + env.params->link_latency <= ovc.last_arrive) continue;
      ovc.owner = f.tail ? kNoPacket : f.packet;
      send_on_link(env, out, v, f, env.now + env.params->link_latency);
      env.energy->charge_event(id_, EnergyEvent::BypassTraversal, 1, env.now);
      ivc.latch_full = false;
      --held_;
      return_credit(env, in_port, v);
      env.moved = true;
      bypass_rr_[p] = (v + 1) % vcs_;
      break;
    }
  }
}

void Router::switch_allocation(RouterEnv& env) {
  // Input stage: one candidate VC per input port.
  std::array<int, kNumPorts> cand;
  cand.fill(-1);
  bool any = false;
  for (int p = 0; p < kNumPorts; ++p) {
    for (int k = 0; k < vcs_; ++k) {
      const int v = (sa_in_rr_[p] + k) % vcs_;
      const InputVc& ivc = in_[p][static_cast<std::size_t>(v)];
      if (ivc.stage != InputVc::Stage::Active || ivc.buffer.empty()) continue;
      if (ivc.buffer.front().ready > env.now) continue;
      if (ivc.out_port != Local && out_[ivc.out_port][static_cast<std::size_t>(ivc.out_vc)].credits <= 0) continue;
      cand[p] = v;
      any = true;
      break;
    }
  }
  if (!any) return;

  // Output stage: one grant per output port.
  for (int o = 0; o < kNumPorts; ++o) {
    for (int k = 0; k < kNumPorts; ++k) {
      const int p = (sa_out_rr_[o] + k) % kNumPorts;
      if (cand[p] < 0) continue;
      InputVc& ivc = in_[p][static_cast<std::size_t>(cand[p])];
      if (ivc.out_port != o) continue;

      const Port in_port = static_cast<Port>(p);
      const Port out = static_cast<Port>(o);
      const int v = cand[p];
      Flit f = ivc.buffer.pop();
      --held_;
      env.energy->charge_event(id_, EnergyEvent::BufferRead, 1, env.now);
      env.energy->charge_event(id_, EnergyEvent::CrossbarTraversal, 1, env.now);
      return_credit(env, in_port, v);

      OutputVc& ovc = out_[out][static_cast<std::size_t>(ivc.out_vc)];
      if (out == Local) {
        env.ejections->push_back({f.packet, f.seq, f.tail, env.now + 2});
      } else {
        sa_cycle_[out][static_cast<std::size_t>(env.now & 3)] = env.now;
        f.ready = 0;
        send_on_link(env, out, ivc.out_vc, f, env.now + 2 + env.params->link_latency);
      }
      if (f.head) {
        const bool eject = out == Local;
        const bool turn = in_port != Local && !eject && out != opposite(in_port);
        if (turn || eject) env.turns->push_back({id_, eject});
      }
      if (f.tail) {
        ovc.owner = kNoPacket;
        ivc.stage = InputVc::Stage::Idle;
        ivc.out_vc = -1;
      }
      env.moved = true;
      sa_in_rr_[p] = (v + 1) % vcs_;
      sa_out_rr_[o] = (p + 1) % kNumPorts;
      cand[p] = -1;
      break;
    }
  }
}

void Router::vc_allocation(RouterEnv& env) {
  const int total = kNumPorts * vcs_;
  int last_grant = -1;
  for (int k = 0; k < total; ++k) {
    const int idx = (va_rr_ + k) % total;
    const int p = idx / vcs_;
    const int v = idx % vcs_;
    InputVc& ivc = in_[p][static_cast<std::size_t>(v)];
    if (ivc.buffer.empty()) continue;
    if (ivc.stage == InputVc::Stage::Idle) {
      if (!ivc.buffer.front().head) throw InvariantError("body flit at the head of an idle VC");
      const Packet& pk = (*env.packets)[ivc.buffer.front().packet].packet;
      ivc.out_port = route_output(pos_, pk.dst, pk.route_action);
      ivc.stage = InputVc::Stage::Routing;
    }
    if (ivc.stage != InputVc::Stage::Routing || ivc.buffer.front().ready > env.now) continue;

    const Packet& pk = (*env.packets)[ivc.buffer.front().packet].packet;
    const VcRange range = ivc.out_port == Local ? VcRange{0, vcs_}
                                                : vc_range(pk.route_action, vcs_, env.policy.vc_partition);
    for (int ov = range.first; ov < range.last; ++ov) {
      OutputVc& ovc = out_[ivc.out_port][static_cast<std::size_t>(ov)];
      if (ovc.owner != kNoPacket) continue;
      ovc.owner = ivc.buffer.front().packet;
      ivc.out_vc = ov;
      ivc.stage = InputVc::Stage::Active;
      ivc.buffer.front().ready = env.now + 1;
      last_grant = idx;
      break;
    }
  }
  if (last_grant >= 0) va_rr_ = (last_grant + 1) % total;
}

void Router::inject(RouterEnv& env) {
  if (!inj_active_ && !source_queue_.empty()) {
    const std::uint32_t pk_idx = source_queue_.front();
    Packet& pk = (*env.packets)[pk_idx].packet;
    RouteAction action = RouteAction::XY;
    if (env.policy.marl && power_.mode() == PgMode::Coarse)
      action = select_action(pk.src, pk.dst, q_, *env.marl, agent_rng_);
    const VcRange range = vc_range(action, vcs_, env.policy.vc_partition);
    const int width = range.last - range.first;
    for (int k = 0; k < width; ++k) {
      const int v = range.first + (inj_rr_ + k) % width;
      const InputVc& ivc = in_[Local][static_cast<std::size_t>(v)];
      if (!ivc.arrived.empty() || !ivc.buffer.empty() || ivc.stage != InputVc::Stage::Idle ||
          ivc.incoming != InputVc::Incoming::None)
        continue;
      pk.route_action = action;
      inj_active_ = true;
      inj_packet_ = pk_idx;
      inj_seq_ = 0;
      inj_vc_ = v;
      inj_rr_ = (inj_rr_ + k + 1) % width;
      source_queue_.pop_front();
      ++env.entered_network;
      break;
    }
  }
  if (!inj_active_) return;
  InputVc& ivc = in_[Local][static_cast<std::size_t>(inj_vc_)];
  if (ivc.arrived.size() + ivc.buffer.size() >= depth_) return;
  const int len = (*env.packets)[inj_packet_].packet.length;
  Flit f;
  f.packet = inj_packet_;
  f.seq = static_cast<std::uint16_t>(inj_seq_);
  f.head = inj_seq_ == 0;
  f.tail = inj_seq_ == len - 1;
  f.ready = env.now;
  ivc.arrived.push(f);
  ++held_;
  if (++inj_seq_ == len) inj_active_ = false;
}

void Router::accept_arrivals(RouterEnv& env) {
  for (int p = 0; p < kNumPorts; ++p) {
    const Port in_port = static_cast<Port>(p);
    bool wrote = false;
    for (int k = 0; k < vcs_; ++k) {
      const int v = (accept_rr_[p] + k) % vcs_;
      InputVc& ivc = in_[p][static_cast<std::size_t>(v)];
      if (ivc.arrived.empty()) continue;
      const Flit& f = ivc.arrived.front();
      PacketRecord& rec = (*env.packets)[f.packet];

      FlitClass cls = FlitClass::Turning;
      if (f.head) {
        cls = classify_flit(rec.packet, pos_, in_port);
        if (ivc.incoming == InputVc::Incoming::None) {
          const bool bypass =
              env.policy.bypass && cls == FlitClass::Straight && !power_.buffer_active(in_port);
          ivc.incoming = bypass ? InputVc::Incoming::Bypass : InputVc::Incoming::Buffered;
        }
      }

      if (ivc.incoming == InputVc::Incoming::Bypass) {
        if (ivc.latch_full) continue;
        Flit g = ivc.arrived.pop();
        check_stream(ivc, g);
        g.ready = env.now + env.params->bypass_latency;
        ivc.latch = g;
        ivc.latch_full = true;
        if (g.tail) ivc.incoming = InputVc::Incoming::None;
        env.moved = true;
        continue;
      }

      if (power_.buffer_active(in_port)) {
        if (wrote) continue;
        Flit g = ivc.arrived.pop();
        check_stream(ivc, g);
        if (g.head) {
          g.ready = env.now + env.params->pipeline_depth - 3;
          if (rec.wait_since >= 0) {
            rec.wake_wait += env.now - rec.wait_since;
            log(env, "write_after_wake", g.packet, env.now - rec.wait_since);
            rec.wait_since = -1;
          }
        } else {
          g.ready = env.now + 1;
        }
        ivc.buffer.push(g);
        if (g.tail) ivc.incoming = InputVc::Incoming::None;
        env.energy->charge_event(id_, EnergyEvent::BufferWrite, 1, env.now);
        env.moved = true;
        wrote = true;
        accept_rr_[p] = (v + 1) % vcs_;
        continue;
      }

      if (f.head && rec.wait_since < 0) rec.wait_since = env.now;
      if (power_.buffer(in_port).is_gated()) {
        const WakeOutcome w = power_.request_wake(in_port);
        if (w == WakeOutcome::CoarseStarted) {
          env.energy->charge_event(id_, EnergyEvent::CoarseWake, 1, env.now);
          WakeCause cause = WakeCause::Other;
          if (f.head && cls == FlitClass::Turning) cause = WakeCause::Turn;
          if (f.head && cls == FlitClass::Ejecting) cause = WakeCause::Eject;
          env.wakes->push_back({id_, cause});
          log(env, "coarse_wake", f.packet, p);
        } else if (w == WakeOutcome::FineStarted) {
          env.energy->charge_event(id_, EnergyEvent::FineWake, 1, env.now);
          log(env, "fine_wake", f.packet, p);
        }
      }
    }
  }
}

void Router::update_busy() {
  std::uint8_t mask = 0;
  for (int p = 0; p < kNumPorts; ++p) {
    bool busy = p == Local && inj_active_;
    for (const InputVc& ivc : in_[p]) {
      if (busy) break;
      busy = !ivc.buffer.empty() || ivc.stage != InputVc::Stage::Idle ||
             ivc.incoming == InputVc::Incoming::Buffered;
    }
    if (busy) mask |= static_cast<std::uint8_t>(1u << p);
  }
  busy_mask_ = mask;
}

}  // namespace cafeen

// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "config.hpp"
#include "energy.hpp"
#include "marl.hpp"
#include "powergate.hpp"
#include "rng.hpp"
#include "topology.hpp"
#include "traffic.hpp"

namespace cafeen {

inline constexpr std::uint32_t kNoPacket = 0xffffffffu;

struct PacketRecord {
  Packet packet;
  int ejected_flits = 0;
  Cycle wait_since = -1;  // head currently waiting for a buffer to wake
  Cycle wake_wait = 0;    // total cycles the head spent waiting on wakes
  bool live = false;
};

/// Slot pool for in-flight packets; flits refer to packets by slot index.
class PacketPool {
 public:
  std::uint32_t add(const Packet& p);
  void release(std::uint32_t idx);
  PacketRecord& operator[](std::uint32_t idx) { return slots_[idx]; }
  const PacketRecord& operator[](std::uint32_t idx) const { return slots_[idx]; }
  std::size_t live() const { return slots_.size() - free_.size(); }

 private:
  std::vector<PacketRecord> slots_;
  std::vector<std::uint32_t> free_;
};

struct Flit {
  std::uint32_t packet = kNoPacket;
  std::uint16_t seq = 0;
  bool head = false;
  bool tail = false;
  Cycle ready = 0;  // earliest cycle for the flit's next pipeline action
};

/// Fixed-capacity FIFO of flits.
class FlitQueue {
 public:
  explicit FlitQueue(int capacity = 0) : ring_(static_cast<std::size_t>(capacity)) {}
  bool empty() const { return count_ == 0; }
  bool full() const { return count_ == ring_.size(); }
  int size() const { return static_cast<int>(count_); }
  Flit& front() { return ring_[head_]; }
  const Flit& front() const { return ring_[head_]; }
  const Flit& at(int i) const { return ring_[(head_ + static_cast<std::size_t>(i)) % ring_.size()]; }
  void push(const Flit& f);
  Flit pop();

 private:
  std::vector<Flit> ring_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
};

enum class FlitClass : std::uint8_t { Straight, Turning, Ejecting, Injecting };
const char* to_string(FlitClass c);

/// TooT controller decision for a head flit entering `here` through `in_port`.
/// Throws InvariantError if the packet's route does not pass through `here`.
FlitClass classify_flit(const Packet& p, Coord here, Port in_port);

/// True iff `node` lies on the dimension-ordered route of `p`.
bool on_route(const Packet& p, Coord node);

enum class VcClass : std::uint8_t { ClassXY, ClassYX };

/// VC range [first, last) a packet may occupy at every hop.
struct VcRange {
  int first;
  int last;
  bool contains(int vc) const { return vc >= first && vc < last; }
};
VcClass assign_vc_class(RouteAction a);
VcRange vc_range(RouteAction a, int vcs, bool partitioned);

struct InputVc {
  enum class Incoming : std::uint8_t { None, Buffered, Bypass };
  enum class Stage : std::uint8_t { Idle, Routing, Active };

  FlitQueue arrived;  // delivered by the link, not yet written or latched
  FlitQueue buffer;
  Flit latch;
  bool latch_full = false;
  Incoming incoming = Incoming::None;
  Stage stage = Stage::Idle;
  Port out_port = Local;
  int out_vc = -1;
  // wormhole integrity on the incoming stream
  std::uint32_t last_packet = kNoPacket;
  int last_seq = -1;
  bool last_tail = true;
};

struct OutputVc {
  std::uint32_t owner = kNoPacket;
  int credits = 0;
  Cycle last_arrive = -1;  // arrival cycle of the newest flit sent on this VC
};

struct LinkFlit {
  Flit flit;
  std::uint8_t vc;
  Cycle arrive;
};

struct CreditReturn {
  int router;
  Port port;
  int vc;
};

enum class WakeCause : std::uint8_t { Turn, Eject, Other };

struct WakeEvent {
  int router;
  WakeCause cause;
};

struct TurnEvent {
  int router;
  bool eject;
};

struct Ejection {
  std::uint32_t packet;
  std::uint16_t seq;
  bool tail;
  Cycle cycle;
};

struct EventLogEntry {
  Cycle cycle;
  int router;
  std::string kind;
  std::uint64_t packet;
  long long detail;
};

class Router;

/// Everything a router may touch while stepping. Cross-router effects are
/// deferred: link flits land in a neighbor's inbox with a future arrival
/// cycle, and credits are returned through `credit_returns` after all routers
/// have stepped.
struct RouterEnv {
  Cycle now = 0;
  const MeshConfig* mesh = nullptr;
  const RouterParams* params = nullptr;
  const MarlParams* marl = nullptr;
  PolicyTraits policy{};
  PacketPool* packets = nullptr;
  std::vector<Router>* routers = nullptr;
  EnergyLedger* energy = nullptr;
  std::vector<CreditReturn>* credit_returns = nullptr;
  std::vector<WakeEvent>* wakes = nullptr;
  std::vector<TurnEvent>* turns = nullptr;
  std::vector<Ejection>* ejections = nullptr;
  std::vector<EventLogEntry>* log = nullptr;
  bool moved = false;
  std::uint64_t entered_network = 0;
};

class Router {
 public:
  Router(int id, Coord pos, const MeshConfig& mesh, const SimConfig& cfg, std::uint64_t seed);

  int id() const { return id_; }
  Coord pos() const { return pos_; }

  /// Advances the router one cycle: link arrivals, bypass departures, switch
  /// allocation and traversal, VC allocation, injection, then buffer writes.
  void step(RouterEnv& env);

  /// True when stepping would do nothing this cycle.
  bool quiescent() const;

  void enqueue_source(std::uint32_t packet) { source_queue_.push_back(packet); }
  std::size_t source_queue_size() const { return source_queue_.size(); }

  void deliver_credit(Port out, int vc) { ++out_[out][static_cast<std::size_t>(vc)].credits; }
  void push_link(Port in_port, const LinkFlit& lf) {
    inbox_[in_port].push_back(lf);
    ++inbox_count_;
  }

  RouterPower& power() { return power_; }
  const RouterPower& power() const { return power_; }
  EpochTracker& epoch() { return epoch_; }
  QTable& qtable() { return q_; }
  const QTable& qtable() const { return q_; }

  std::uint8_t busy_mask() const { return busy_mask_; }

  const InputVc& input(Port p, int vc) const { return in_[p][static_cast<std::size_t>(vc)]; }
  const OutputVc& output(Port p, int vc) const { return out_[p][static_cast<std::size_t>(vc)]; }
  const std::vector<LinkFlit>& inbox(Port p) const { return inbox_[p]; }

  /// Flits held in this router (arrived, buffered, latched) plus its inbox.
  int flits_held() const { return held_ + inbox_count_; }

 private:
  void deliver_links(RouterEnv& env);
  void bypass_departures(RouterEnv& env);
  void switch_allocation(RouterEnv& env);
  void vc_allocation(RouterEnv& env);
  void inject(RouterEnv& env);
  void accept_arrivals(RouterEnv& env);
  void update_busy();
  void send_on_link(RouterEnv& env, Port out, int vc, const Flit& f, Cycle arrive);
  void return_credit(RouterEnv& env, Port in_port, int vc);
  void check_stream(InputVc& ivc, const Flit& f) const;
  void log(RouterEnv& env, const char* kind, std::uint32_t packet, long long detail = 0) const;
  bool sa_granted_at(Port out, Cycle c) const { return sa_cycle_[out][static_cast<std::size_t>(c & 3)] == c; }

  int id_;
  Coord pos_;
  int vcs_;
  int depth_;
  std::array<std::vector<InputVc>, kNumPorts> in_;
  std::array<std::vector<OutputVc>, kNumPorts> out_;
  std::array<std::vector<LinkFlit>, kMeshPorts> inbox_;
  int inbox_count_ = 0;
  int held_ = 0;
  std::array<std::array<Cycle, 4>, kNumPorts> sa_cycle_{};
  std::array<int, kNumPorts> sa_in_rr_{};
  std::array<int, kNumPorts> sa_out_rr_{};
  std::array<int, kNumPorts> bypass_rr_{};
  std::array<int, kNumPorts> accept_rr_{};
  int va_rr_ = 0;
  int inj_rr_ = 0;

  RouterPower power_;
  EpochTracker epoch_;
  QTable q_;
  Rng agent_rng_;

  std::deque<std::uint32_t> source_queue_;
  bool inj_active_ = false;
  std::uint32_t inj_packet_ = kNoPacket;
  int inj_seq_ = 0;
  int inj_vc_ = 0;

  std::uint8_t busy_mask_ = 0;
};

}  // namespace cafeen

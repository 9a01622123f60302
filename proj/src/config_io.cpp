// SPDX-FileCopyrightText: © 2026 The cafeen-noc Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "config_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <functional>
#include <numeric>

namespace cafeen {

namespace {

struct Field {
  const char* key;
  std::function<Json(const Experiment&)> get;
  std::function<void(Experiment&, const Json&)> set;
};

template <typename T>
T as(const Json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.get<long long>() < 0) throw ConfigError("");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("");
    } else {
      if (!v.is_string()) throw ConfigError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type: " + v.dump());
  }
}

template <typename T>
Json list_or_scalar(const Json& v) {
  return v.is_array() ? v : Json::array({v});
}

#define FIELD(key, expr, T)                                                   \
  Field {                                                                     \
    key, [](const Experiment& e) { return Json(e.expr); },                   \
        [](Experiment& e, const Json& v) { e.expr = as<T>(v, key); }          \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      FIELD("mesh.rows", base.rows, int),
      FIELD("mesh.cols", base.cols, int),
      FIELD("router.vcs_per_port", base.router.vcs_per_port, int),
      FIELD("router.flits_per_vc", base.router.flits_per_vc, int),
      FIELD("router.flit_width", base.router.flit_width, int),
      FIELD("router.pipeline_depth", base.router.pipeline_depth, int),
      FIELD("router.link_latency", base.router.link_latency, int),
      FIELD("router.bypass_latency", base.router.bypass_latency, int),
      FIELD("pg.fine_t_idle", base.pg.fine_t_idle, int),
      FIELD("pg.fine_t_on", base.pg.fine_t_on, int),
      FIELD("pg.coarse_t_idle", base.pg.coarse_t_idle, int),
      FIELD("pg.coarse_t_on", base.pg.coarse_t_on, int),
      FIELD("pg.mode_up_threshold", base.pg.mode_up_threshold, int),
      FIELD("pg.mode_window", base.pg.mode_window, int),
      FIELD("pg.mode_quiet", base.pg.mode_quiet, int),
      FIELD("marl.alpha", base.marl.alpha, double),
      FIELD("marl.epsilon", base.marl.epsilon, double),
      FIELD("marl.t_epoch", base.marl.t_epoch, int),
      FIELD("marl.quantize_4bit", base.marl.quantize_4bit, bool),
      FIELD("marl.zero_latency_broadcast", base.marl.zero_latency_broadcast, bool),
      FIELD("marl.count_ejects_as_turns", base.marl.count_ejects_as_turns, bool),
      FIELD("energy.static_buffer_per_cycle", base.energy.static_buffer_per_cycle, double),
      FIELD("energy.static_router_misc_per_cycle", base.energy.static_router_misc_per_cycle, double),
      FIELD("energy.static_bypass_per_cycle", base.energy.static_bypass_per_cycle, double),
      FIELD("energy.static_qtable_per_cycle", base.energy.static_qtable_per_cycle, double),
      FIELD("energy.dyn_buffer_rw_per_flit", base.energy.dyn_buffer_rw_per_flit, double),
      FIELD("energy.dyn_xbar_per_flit", base.energy.dyn_xbar_per_flit, double),
      FIELD("energy.dyn_link_per_flit", base.energy.dyn_link_per_flit, double),
      FIELD("energy.dyn_bypass_per_flit", base.energy.dyn_bypass_per_flit, double),
      FIELD("energy.dyn_reward_flit_per_hop", base.energy.dyn_reward_flit_per_hop, double),
      FIELD("energy.wake_buffer", base.energy.wake_buffer, double),
      FIELD("energy.wake_router", base.energy.wake_router, double),
      Field{"traffic.patterns",
            [](const Experiment& e) {
              Json a = Json::array();
              for (Pattern p : e.patterns) a.push_back(to_string(p));
              return a;
            },
            [](Experiment& e, const Json& v) {
              e.patterns.clear();
              for (const Json& x : list_or_scalar<std::string>(v))
                e.patterns.push_back(parse_pattern(as<std::string>(x, "traffic.patterns")));
            }},
      Field{"traffic.pir",
            [](const Experiment& e) { return Json(e.pirs); },
            [](Experiment& e, const Json& v) {
              e.pirs.clear();
              for (const Json& x : list_or_scalar<double>(v)) e.pirs.push_back(as<double>(x, "traffic.pir"));
            }},
      FIELD("traffic.packet_length", base.traffic.packet_length, int),
      FIELD("traffic.total_packets", base.traffic.total_packets, std::uint64_t),
      FIELD("traffic.trace_path", base.traffic.trace_path, std::string),
      FIELD("traffic.seed", base.seed, std::uint64_t),
      Field{"run.policies",
            [](const Experiment& e) {
              Json a = Json::array();
              for (Policy p : e.policies) a.push_back(to_string(p));
              return a;
            },
            [](Experiment& e, const Json& v) {
              e.policies.clear();
              for (const Json& x : list_or_scalar<std::string>(v))
                e.policies.push_back(parse_policy(as<std::string>(x, "run.policies")));
            }},
      Field{"run.mode",
            [](const Experiment& e) { return Json(e.base.run.mode == RunMode::Drain ? "drain" : "fixed"); },
            [](Experiment& e, const Json& v) {
              const std::string m = as<std::string>(v, "run.mode");
              if (m == "drain")
                e.base.run.mode = RunMode::Drain;
              else if (m == "fixed")
                e.base.run.mode = RunMode::Fixed;
              else
                throw ConfigError("run.mode must be 'drain' or 'fixed', got '" + m + "'");
            }},
      FIELD("run.max_cycles", base.run.max_cycles, std::int64_t),
      FIELD("run.cycles", base.run.cycles, std::int64_t),
      FIELD("run.warmup_cycles", base.run.warmup_cycles, std::int64_t),
      FIELD("run.watchdog_cycles", base.run.watchdog_cycles, std::int64_t),
      FIELD("run.check_invariants", base.run.check_invariants, bool),
      FIELD("run.event_log", base.run.event_log, bool),
      FIELD("run.out_dir", out_dir, std::string),
  };
  return table;
}

#undef FIELD

const Field* find_field(const std::string& key) {
  for (const Field& f : fields())
    if (key == f.key) return &f;
  return nullptr;
}

[[noreturn]] void unknown_key(const std::string& key) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const Field& f : fields()) {
    const std::size_t d = edit_distance(key, f.key);
    if (d < best_d) {
      best_d = d;
      best = f.key;
    }
  }
  throw ConfigError("unknown config key '" + key + "' (did you mean '" + best + "'?)");
}

void apply(Experiment& e, const std::string& key, const Json& value) {
  const Field* f = find_field(key);
  if (!f) unknown_key(key);
  f->set(e, value);
}

void apply_tree(Experiment& e, const Json& node, const std::string& prefix) {
  if (!node.is_object()) throw ConfigError("config section '" + prefix + "' must be an object");
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it.value().is_object()) {
      apply_tree(e, it.value(), key);
    } else {
      apply(e, key, it.value());
    }
  }
}

Json parse_override_value(const std::string& key, const std::string& text) {
  Json v = Json::parse(text, nullptr, false);
  if (!v.is_discarded()) return v;
  const Field* f = find_field(key);
  if (!f) unknown_key(key);
  // Bare words become strings; lists may be given as a,b,c.
  if (f->get(Experiment{}).is_array()) {
    Json a = Json::array();
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      Json parsed = Json::parse(item, nullptr, false);
      a.push_back(parsed.is_discarded() ? Json(item) : parsed);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return a;
  }
  return Json(text);
}

}  // namespace

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.emplace_back(f.key);
  return keys;
}

SimConfig Experiment::point(Policy policy, Pattern pattern, double pir) const {
  SimConfig c = base;
  c.policy = policy;
  c.traffic.pattern = pattern;
  c.traffic.pir = pir;
  return c;
}

void Experiment::validate() const {
  if (policies.empty()) throw ConfigError("run.policies must not be empty");
  if (patterns.empty()) throw ConfigError("traffic.patterns must not be empty");
  if (pirs.empty()) throw ConfigError("traffic.pir must not be empty");
  for (Policy p : policies)
    for (Pattern t : patterns)
      for (double r : pirs) point(p, t, r).validate();
}

Json to_json(const Experiment& e) {
  Json root = Json::object();
  for (const Field& f : fields()) {
    const std::string key = f.key;
    const std::size_t dot = key.find('.');
    root[key.substr(0, dot)][key.substr(dot + 1)] = f.get(e);
  }
  return root;
}

Experiment load_experiment(const Json& doc, const std::vector<std::string>& overrides) {
  Experiment e;
  if (!doc.is_null()) apply_tree(e, doc, "");
  for (const std::string& o : overrides) {
    const std::size_t eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not key=value");
    const std::string key = o.substr(0, eq);
    apply(e, key, parse_override_value(key, o.substr(eq + 1)));
  }
  e.validate();
  return e;
}

Experiment load_experiment_file(const std::string& path, const std::vector<std::string>& overrides) {
  Json doc;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return load_experiment(Json(), overrides);
    doc = Json::parse(text, nullptr, false, true);
    if (doc.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
  }
  return load_experiment(doc, overrides);
}

}  // namespace cafeen

#include "relaycast/engine.hpp"

#include <algorithm>

#include "relaycast/errors.hpp"

namespace relaycast {

std::string to_string(ScriptKind s) {
  switch (s) {
    case ScriptKind::silent:
      return "silent";
    case ScriptKind::blast:
      return "blast";
    case ScriptKind::split_half:
      return "split-half";
    case ScriptKind::flicker:
      return "flicker";
    case ScriptKind::honest:
      return "honest";
    case ScriptKind::custom_table:
      return "custom-table";
  }
  return "?";
}

ScriptKind parse_script_kind(const std::string& s) {
  if (s == "silent") return ScriptKind::silent;
  if (s == "blast") return ScriptKind::blast;
  if (s == "split-half") return ScriptKind::split_half;
  if (s == "flicker") return ScriptKind::flicker;
  if (s == "honest") return ScriptKind::honest;
  if (s == "custom-table") return ScriptKind::custom_table;
  throw ValidationError("unknown adversary strategy '" + s + "'");
}

std::string to_string(TriggerMode m) { return m == TriggerMode::pure ? "pure" : "complementary"; }

std::optional<std::uint8_t> AdversaryScript::bit(const Graph& g, NodeId j, NodeId i, Round k,
                                                 std::uint8_t honest) const {
  if (k < 0) return 0;
  switch (kind) {
    case ScriptKind::silent:
      return 0;
    case ScriptKind::blast:
      return 1;
    case ScriptKind::split_half: {
      const auto row = g.neighbors(j);
      const auto pos = std::lower_bound(row.begin(), row.end(), i) - row.begin();
      return static_cast<std::uint8_t>(pos & 1);
    }
    case ScriptKind::flicker:
      return static_cast<std::uint8_t>((static_cast<std::uint64_t>(k) + i) & 1);
    case ScriptKind::honest:
      return honest;
    case ScriptKind::custom_table: {
      const auto it = table.find({j, i, k});
      if (it == table.end()) return std::nullopt;
      return it->second;
    }
  }
  return std::nullopt;
}

std::uint8_t InitiationSpec::bit_at(std::size_t index) const {
  if (bits.empty()) return general_correct ? 1 : 0;
  return bits[index];
}

InitiationSpec InitiationSpec::none() {
  InitiationSpec s;
  s.general_correct = false;
  return s;
}

Trace::Trace(std::size_t n, Round k_max)
    : k_max_(k_max), u_round_(n, kNever), x_rise_(n, kNever), y_rise_(n, kNever), correct_(n, 1) {}

Trace Trace::from_dense(const std::vector<std::vector<std::uint8_t>>& u,
                        const std::vector<std::vector<std::uint8_t>>& x,
                        const std::vector<std::vector<std::uint8_t>>& y, NodeMask correct) {
  if (x.empty() || u.size() != x.size() || y.size() != x.size()) {
    throw ValidationError("trace: signal row counts differ or are empty");
  }
  const std::size_t n = correct.size();
  Trace t(n, static_cast<Round>(x.size()) - 1);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (u[k].size() != n || x[k].size() != n || y[k].size() != n) {
      throw ValidationError("trace: round " + std::to_string(k) + " has the wrong width");
    }
    const auto r = static_cast<Round>(k);
    for (NodeId i = 0; i < n; ++i) {
      if (u[k][i]) {
        if (t.u_round_[i] != kNever) throw ValidationError("trace: u is not a single pulse");
        t.u_round_[i] = r;
      }
      for (auto [sig, rise] : {std::pair{&x, &t.x_rise_}, std::pair{&y, &t.y_rise_}}) {
        const std::uint8_t v = (*sig)[k][i];
        if (v && (*rise)[i] == kNever) (*rise)[i] = r;
        if (!v && (*rise)[i] != kNever) {
          throw ValidationError("trace: node " + std::to_string(i) + " signal drops at round " +
                                std::to_string(k));
        }
      }
    }
  }
  t.correct_ = std::move(correct);
  return t;
}

Engine::Engine(const EngineConfig& config)
    : config_(config), g_(*config.graph), faulty_(g_.n(), 0), x_(g_.n(), 0), y_(g_.n(), 0),
      honest_bits_(g_.n(), 0), counts_(g_.n(), 0), trigger_counts_(g_.n(), 0),
      trace_(g_.n(), config.k_max) {
  const std::size_t n = g_.n();
  for (NodeId j : config_.faults) {
    g_.check_node(j);
    faulty_[j] = 1;
  }
  fault_list_ = from_mask(faulty_);
  const auto& init = config_.initiation;
  if (!init.bits.empty() && init.bits.size() != init.I0.size()) {
    throw ValidationError("initiation bits must match the initiation set");
  }
  if (!init.I0.empty() && config_.k_max < init.k0) {
    throw ValidationError("k_max is before the initiation round");
  }
  if (config_.k_max < 0) throw ValidationError("k_max must be non-negative");
  for (std::size_t idx = 0; idx < init.I0.size(); ++idx) {
    g_.check_node(init.I0[idx]);
    if (init.bit_at(idx)) trace_.set_u_round(init.I0[idx], init.k0);
  }
  NodeMask correct(n, 1);
  for (NodeId j : fault_list_) correct[j] = 0;
  trace_.set_correct(std::move(correct));

  if (config_.mode == TriggerMode::complementary) {
    const LocalSelection* sel = config_.selection;
    if (!sel || sel->size() != n) throw ConfigError("complementary mode needs S_i for every node");
    std::vector<std::size_t> degree(n, 0);
    faulty_members_.assign(n, {});
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j : sel->of(i)) {
        g_.check_node(j);
        if (faulty_[j]) {
          faulty_members_[i].push_back(j);
        } else {
          ++degree[j];
        }
      }
    }
    inverse_offsets_.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) inverse_offsets_[j + 1] = inverse_offsets_[j] + degree[j];
    inverse_members_.resize(inverse_offsets_[n]);
    std::vector<std::size_t> fill(inverse_offsets_.begin(), inverse_offsets_.end() - 1);
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j : sel->of(i)) {
        if (!faulty_[j]) inverse_members_[fill[j]++] = i;
      }
    }
    correct_member_counts_.assign(n, 0);
  }
}

std::uint8_t Engine::observed(NodeId j, NodeId i, Round k) const {
  if (k < 0) return 0;
  const std::uint8_t honest = trace_.x_rise(j) <= k;
  if (!faulty_[j]) return honest;
  const auto b = config_.script.bit(g_, j, i, k, honest);
  if (!b) {
    throw ExecutionError("adversary script has no entry for faulty node " + std::to_string(j) +
                         ", observer " + std::to_string(i) + ", round " + std::to_string(k));
  }
  return *b;
}

void Engine::readback_counts(Round r, std::vector<std::uint32_t>& out) const {
  if (r < 0) {
    std::fill(out.begin(), out.end(), 0);
    return;
  }
  out = correct_member_history_[static_cast<std::size_t>(r)];
  for (NodeId i = 0; i < g_.n(); ++i) {
    for (NodeId j : faulty_members_[i]) out[i] += observed(j, i, r);
  }
}

void Engine::step() {
  if (done()) return;
  const Round k = next_round_;
  const std::size_t n = g_.n();

  if (settled_) {
    if (config_.mode == TriggerMode::complementary) {
      correct_member_history_.push_back(correct_member_counts_);
    }
    ++next_round_;
    return;
  }

  // Excitation evidence from round k-1: honest neighbors through the kernel,
  // faulty neighbors through the script.
  for (std::size_t j = 0; j < n; ++j) honest_bits_[j] = faulty_[j] ? 0 : x_[j];
  neighbor_counts(g_, honest_bits_, counts_, config_.backend);
  for (NodeId j : fault_list_) {
    for (NodeId i : g_.neighbors(j)) counts_[i] += observed(j, i, k - 1);
  }

  if (config_.mode == TriggerMode::pure) {
    for (std::size_t i = 0; i < n; ++i) trigger_counts_[i] = counts_[i] + x_[i];
  } else {
    readback_counts(k - 1 - static_cast<Round>(config_.latency), trigger_counts_);
  }

  const std::size_t th_x = config_.excitation_threshold;
  const std::size_t th_y = config_.trigger_threshold;
  const auto update = [&](std::size_t i) {
    const std::uint8_t input = trace_.u_round(static_cast<NodeId>(i)) == k;
    x_[i] = static_cast<std::uint8_t>(x_[i] | (counts_[i] >= th_x) | input);
    y_[i] = static_cast<std::uint8_t>(y_[i] | (trigger_counts_[i] >= th_y));
  };
  const auto signed_n = static_cast<long>(n);
  if (config_.backend == Backend::serial) {
    for (std::size_t i = 0; i < n; ++i) update(i);
  } else {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (long i = 0; i < signed_n; ++i) update(static_cast<std::size_t>(i));
  }

  bool all_set = true;
  for (NodeId i = 0; i < n; ++i) {
    if (x_[i] && trace_.x_rise(i) == kNever) {
      trace_.set_x_rise(i, k);
      if (config_.mode == TriggerMode::complementary && !faulty_[i]) {
        for (std::size_t p = inverse_offsets_[i]; p < inverse_offsets_[i + 1]; ++p) {
          ++correct_member_counts_[inverse_members_[p]];
        }
      }
    }
    if (y_[i] && trace_.y_rise(i) == kNever) trace_.set_y_rise(i, k);
    all_set = all_set && x_[i] && y_[i];
  }
  if (config_.mode == TriggerMode::complementary) {
    correct_member_history_.push_back(correct_member_counts_);
  }
  // Every latch is set: later rounds cannot change anything observable.
  settled_ = all_set;
  ++next_round_;
}

Trace Engine::finish() {
  while (!done()) step();
  return std::move(trace_);
}

Trace run(const EngineConfig& config) {
  if (!config.graph) throw ValidationError("engine config has no graph");
  Engine engine(config);
  return engine.finish();
}

std::vector<Round> growth_check(const Trace& trace, double poor_allowance) {
  const NodeSet& P = trace.meta.partition.P;
  Round first_fire = kNever;
  for (NodeId i = 0; i < trace.n(); ++i) {
    if (trace.correct(i)) first_fire = std::min(first_fire, trace.y_rise(i));
  }
  std::vector<Round> violations;
  if (first_fire == kNever) return violations;

  const double room = static_cast<double>(trace.n()) - poor_allowance;
  const std::size_t cap = std::min(P.size(), room <= 0.0 ? std::size_t{0} : floor_count(room));
  auto excited = [&](Round k) {
    std::size_t c = 0;
    for (NodeId i : P) c += trace.x(k, i);
    return c;
  };
  std::size_t current = excited(first_fire);
  for (Round k = first_fire; k < trace.k_max(); ++k) {
    if (current >= cap) break;
    const std::size_t next = excited(k + 1);
    if (next < current + 1) violations.push_back(k);
    current = next;
  }
  return violations;
}

}  // namespace relaycast

#include "relaycast/complementary.hpp"

#include <algorithm>
#include <cmath>

#include "relaycast/errors.hpp"
#include "relaycast/rng.hpp"

namespace relaycast {

std::string to_string(Guarantee g) { return g == Guarantee::npc_complete ? "npc-complete" : "lossy"; }

Guarantee parse_guarantee(const std::string& s) {
  if (s == "npc-complete") return Guarantee::npc_complete;
  if (s == "lossy") return Guarantee::lossy;
  throw ValidationError("unknown guarantee '" + s + "'");
}

std::string to_string(FaultyBits b) {
  switch (b) {
    case FaultyBits::split_half:
      return "split-half";
    case FaultyBits::random:
      return "random";
    case FaultyBits::all:
      return "all";
    case FaultyBits::none:
      return "none";
  }
  return "?";
}

FaultyBits parse_faulty_bits(const std::string& s) {
  if (s == "split-half") return FaultyBits::split_half;
  if (s == "random") return FaultyBits::random;
  if (s == "all") return FaultyBits::all;
  if (s == "none") return FaultyBits::none;
  throw ValidationError("unknown faulty-General bit policy '" + s + "'");
}

std::string to_string(GeneralRole r) {
  switch (r) {
    case GeneralRole::correct:
      return "correct";
    case GeneralRole::faulty:
      return "faulty";
    case GeneralRole::none:
      return "none";
  }
  return "?";
}

GeneralRole parse_general_role(const std::string& s) {
  if (s == "correct") return GeneralRole::correct;
  if (s == "faulty") return GeneralRole::faulty;
  if (s == "none") return GeneralRole::none;
  throw ValidationError("unknown initiation mode '" + s + "'");
}

LocalSelection select_local_sets(const Graph& g, std::size_t s_local, std::size_t c_radius) {
  if (s_local == 0) throw ValidationError("s_local must be at least 1");
  LocalSelection sel;
  sel.members.reserve(g.n() * std::min(s_local, g.n()));
  for (NodeId i = 0; i < g.n(); ++i) {
    auto order = bfs_order(g, i, c_radius);
    if (order.size() > s_local) order.resize(s_local);
    sel.append(make_node_set(std::move(order)));
  }
  return sel;
}

std::size_t default_degree_budget(std::size_t d, std::size_t s_local, std::size_t c_radius) {
  if (s_local == 0) return 0;
  if (c_radius == 0) return s_local - 1;
  const std::size_t per_hop = c_radius * d;
  return (s_local + per_hop - 1) / per_hop;
}

Lemma6Result verify_lemma6(const Graph& g, const FaultPartition& partition, std::size_t c,
                           double target_fraction) {
  const NodeMask in_p = to_mask(partition.P, g.n());
  Lemma6Result r;
  r.target = target_fraction * static_cast<double>(g.n());
  r.min_count = g.n() + 1;
  for (NodeId i : partition.P) {
    std::size_t count = 0;
    for (NodeId j : bfs_order(g, i, c)) count += in_p[j];
    if (count < r.min_count) {
      r.min_count = count;
      r.argmin = i;
    }
  }
  if (!r.argmin) r.min_count = 0;
  r.pass = r.argmin.has_value() && static_cast<double>(r.min_count) >= r.target;
  return r;
}

InitiationSpec ideal_localized_init(const Graph& g, const LocalizedProtocolModel& model, NodeId general,
                                    const FaultPartition& partition, Round k0, FaultyBits faulty_bits,
                                    std::uint64_t seed) {
  g.check_node(general);
  if (model.selection.size() != g.n()) throw ConfigError("localized model has no S_i selection");
  InitiationSpec spec;
  spec.general = general;
  spec.broadcast_round = k0;
  spec.k0 = k0 + static_cast<Round>(model.latency);
  spec.general_correct = !contains(partition.T, general);
  spec.I0 = set_intersection(model.selection.of(general), partition.P);

  if (spec.general_correct) {
    if (model.guarantee == Guarantee::lossy && !spec.I0.empty()) {
      Rng rng(derive_seed(seed, Stream::lossy));
      std::vector<NodeId> kept = spec.I0;
      rng.shuffle(kept);
      const std::size_t drop = floor_count(model.loss * static_cast<double>(kept.size()));
      kept.resize(kept.size() - std::min(drop, kept.size()));
      spec.I0 = make_node_set(std::move(kept));
    }
    return spec;
  }

  spec.bits = faulty_general_bits(spec.I0.size(), faulty_bits, seed);
  return spec;
}

std::vector<std::uint8_t> faulty_general_bits(std::size_t m, FaultyBits policy, std::uint64_t seed) {
  Rng rng(derive_seed(seed, Stream::init_bits));
  std::vector<std::uint8_t> bits(m, 0);
  for (std::size_t idx = 0; idx < m; ++idx) {
    switch (policy) {
      case FaultyBits::split_half:
        bits[idx] = static_cast<std::uint8_t>(idx % 2 == 0);
        break;
      case FaultyBits::random:
        bits[idx] = static_cast<std::uint8_t>(rng.next() >> 63);
        break;
      case FaultyBits::all:
        bits[idx] = 1;
        break;
      case FaultyBits::none:
        break;
    }
  }
  return bits;
}

Round complementary_k_max(std::size_t n) {
  const auto log2n = static_cast<Round>(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(n, 2)))));
  return 4 * log2n + 16;
}

ComplementaryResult run_complementary(ComplementaryConfig config) {
  if (!config.graph) throw ConfigError("complementary run has no graph");
  const Graph& g = *config.graph;
  const std::size_t n = g.n();
  ComplementaryResult out;

  // Trigger threshold and reach: audited overrides, else the closed forms.
  if (config.u_override || config.s_override) {
    if (!config.u_override || !config.s_override) {
      throw ConfigError("u and s overrides must be given together");
    }
    out.u_trigger = *config.u_override;
    out.s_local = *config.s_override;
    out.overridden = true;
    try {
      theorem1_params(config.system.alpha, n, config.mu);
    } catch (const ValidationError&) {
      out.closed_form_vacuous = true;
    }
  } else {
    const Theorem1Params t = theorem1_params(config.system.alpha, n, config.mu);
    out.u_trigger = t.u_trigger;
    out.s_local = t.s_local;
  }

  LocalizedProtocolModel& model = config.model;
  model.s_local = out.s_local;
  if (model.selection.size() != n) model.selection = select_local_sets(g, out.s_local, model.c_radius);
  if (!out.overridden) {
    for (NodeId i = 0; i < n; ++i) {
      if (out.u_trigger >= model.selection.of(i).size()) {
        throw ConfigError("u_trigger " + std::to_string(out.u_trigger) + " is not below |S_" +
                          std::to_string(i) + "| = " + std::to_string(model.selection.of(i).size()));
      }
    }
  }
  out.degree_budget = model.degree_budget ? *model.degree_budget
                                          : default_degree_budget(g.d(), out.s_local, model.c_radius);
  out.d_prime = g.d() + out.degree_budget;

  InitiationSpec init = InitiationSpec::none();
  if (config.role != GeneralRole::none) {
    init = ideal_localized_init(g, model, config.general, config.partition, config.broadcast_round,
                                config.faulty_bits, config.system.seed);
    if ((config.role == GeneralRole::correct) != init.general_correct) {
      throw ConfigError("General " + std::to_string(config.general) + " does not match role " +
                        to_string(config.role));
    }
  }

  const Round horizon = config.k_max ? *config.k_max : complementary_k_max(n);
  const Round log_term = complementary_k_max(n) - 16;
  const Round slack = config.slack ? *config.slack : static_cast<Round>(model.latency) + 1;
  const Round budget = static_cast<Round>(model.latency) + log_term + slack;

  EngineConfig ec;
  ec.graph = &g;
  ec.faults = config.partition.T;
  ec.script = config.script;
  ec.initiation = init;
  ec.excitation_threshold =
      config.protocol.excitation_threshold(g.d()) + (config.threshold_includes_self ? 1 : 0);
  ec.mode = TriggerMode::complementary;
  ec.trigger_threshold = out.u_trigger;
  ec.selection = &model.selection;
  ec.latency = model.latency;
  ec.k_max = std::max(horizon, init.I0.empty() ? Round{0} : init.k0);
  ec.backend = config.backend;

  out.trace = run(ec);
  TraceMeta& meta = out.trace.meta;
  meta.graph_origin = g.origin().describe();
  meta.d = g.d();
  meta.lambda = g.lambda();
  meta.system = config.system;
  meta.protocol = config.protocol;
  meta.protocol.u_trigger = out.u_trigger;
  meta.protocol.s_local = out.s_local;
  meta.protocol.c_radius = model.c_radius;
  meta.partition = config.partition;
  meta.initiation = init;
  meta.adversary = to_string(config.script.kind);
  meta.seed = config.system.seed;
  meta.mode = TriggerMode::complementary;
  meta.excitation_threshold = ec.excitation_threshold;
  meta.trigger_threshold = out.u_trigger;
  meta.latency = model.latency;
  meta.kH_budget = budget;
  meta.kdelta_budget = budget;
  out.report = summarize(out.trace);
  return out;
}

}  // namespace relaycast

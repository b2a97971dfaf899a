#include "relaycast/runner.hpp"

#include <algorithm>
#include <cmath>

#include "relaycast/errors.hpp"
#include "relaycast/rng.hpp"

namespace relaycast {

namespace {

// Fills in the graph seed and size so the echoed config names one graph.
void resolve_graph_spec(RunConfig& c) {
  GraphSpec& g = c.graph;
  if (g.origin == "random") {
    if (!g.n) g.n = c.n;
    if (!g.n) throw ConfigError("random graph needs graph.n or system.n");
    if (g.d == 0) throw ConfigError("random graph needs graph.d");
    if (!g.seed) g.seed = derive_seed(c.seed, Stream::graph);
  } else if (g.origin == "lps") {
    if (g.p == 0 || g.q == 0) throw ConfigError("lps graph needs graph.p and graph.q");
  } else if (g.origin == "file") {
    if (g.path.empty()) throw ConfigError("file graph needs graph.path");
  } else if (g.origin == "named") {
    if (g.name != "petersen" && !g.n) g.n = c.n;
  }
}

std::string graph_key(const GraphSpec& g) {
  return g.origin + "|" + std::to_string(g.p) + "|" + std::to_string(g.q) + "|" +
         std::to_string(g.n.value_or(0)) + "|" + std::to_string(g.d) + "|" +
         std::to_string(g.seed.value_or(0)) + "|" + g.path + "|" + g.name;
}

Graph build_graph(const GraphSpec& g) {
  if (g.origin == "lps") return build_lps_graph(g.p, g.q);
  if (g.origin == "random") return build_random_regular(*g.n, g.d, *g.seed);
  if (g.origin == "file") return load_graph(g.path);
  if (g.name == "petersen") return make_petersen();
  if (!g.n) throw ConfigError("named graph '" + g.name + "' needs a size (graph.n)");
  if (g.name == "complete") return make_complete(*g.n);
  if (g.name == "cycle") return make_cycle(*g.n);
  if (g.name == "complete-bipartite") return make_complete_bipartite(*g.n);
  throw ConfigError("unknown named graph '" + g.name + "'");
}

NodeId first_in_bfs(const Graph& g, NodeId anchor, const NodeMask& wanted) {
  const NodeId sources[] = {anchor};
  for (NodeId v : bfs_order_from(g, sources)) {
    if (wanted[v]) return v;
  }
  throw ConfigError("no suitable General exists");
}

std::optional<Round> saturation_round(const Trace& t) {
  const NodeSet& P = t.meta.partition.P;
  if (P.empty()) return std::nullopt;
  Round last = 0;
  for (NodeId i : P) {
    if (t.x_rise(i) == kNever) return std::nullopt;
    last = std::max(last, t.x_rise(i));
  }
  return last;
}

json graph_json(const Graph& g) {
  return {{"origin", g.origin().describe()},
          {"n", g.n()},
          {"d", g.d()},
          {"lambda", g.lambda()},
          {"bipartite", g.bipartite()},
          {"ramanujan_bound", ramanujan_lambda(g.d())}};
}

}  // namespace

bool RunResult::passed() const {
  return report.heaviside_pass && report.dirac_pass && report.unforgeability_pass &&
         (!lemma2_applies || lemma2_empirical);
}

std::shared_ptr<const Graph> resolve_graph(const RunConfig& config, RunCache* cache) {
  RunConfig c = config;
  resolve_graph_spec(c);
  if (!cache) return std::make_shared<const Graph>(build_graph(c.graph));
  return cache->graphs.get(graph_key(c.graph), [&] { return build_graph(c.graph); });
}

RunResult execute(const RunConfig& config, RunCache* cache) {
  RunResult out;
  RunConfig& r = out.resolved;
  r = config;
  resolve_graph_spec(r);
  out.graph = resolve_graph(r, cache);
  const Graph& g = *out.graph;
  const std::size_t n = g.n();
  if (r.n && *r.n != n) {
    throw ConfigError("system.n = " + std::to_string(*r.n) + " but the graph has " + std::to_string(n) + " nodes");
  }
  r.n = n;
  const SystemParams sys = SystemParams::make(n, r.alpha, r.seed);
  const ProtocolParams& proto = r.protocol;

  if (!r.anchor) r.anchor = r.general ? *r.general : static_cast<NodeId>(Rng(derive_seed(r.seed, Stream::general)).below(n));
  g.check_node(*r.anchor);

  NodeSet T;
  if (r.fault_strategy == "explicit") {
    T = make_node_set(r.fault_nodes);
    for (NodeId j : T) g.check_node(j);
    r.fault_nodes = T;
    r.f = T.size();
  } else {
    if (!r.f) r.f = sys.f;
    const FaultStrategy strategy = parse_fault_strategy(r.fault_strategy);
    PlacementOptions opts;
    opts.beta0 = proto.beta0;
    opts.center = r.fault_center ? *r.fault_center : *r.anchor;
    opts.anchors = {*r.anchor};
    auto place = [&] { return place_faults(g, strategy, *r.f, r.seed, opts); };
    if (cache) {
      const std::string key = graph_key(r.graph) + "#" + r.fault_strategy + "|" + std::to_string(*r.f) + "|" +
                              std::to_string(r.seed) + "|" + format_double(proto.beta0) + "|" +
                              std::to_string(*opts.center) + "|" + std::to_string(*r.anchor);
      T = *cache->placements.get(key, place);
    } else {
      T = place();
    }
  }
  const FaultPartition partition = compute_P(g, T, proto.beta0);
  const NodeMask faulty = to_mask(T, n);

  if (r.role == GeneralRole::none) {
    if (r.general) throw ConfigError("initiation.general given with mode 'none'");
    if (r.I0) throw ConfigError("initiation.I0 given with mode 'none'");
  } else if (r.general) {
    g.check_node(*r.general);
    if ((r.role == GeneralRole::faulty) != static_cast<bool>(faulty[*r.general])) {
      throw ConfigError("General " + std::to_string(*r.general) + " does not match mode '" + to_string(r.role) + "'");
    }
  } else if (r.role == GeneralRole::correct) {
    r.general = first_in_bfs(g, *r.anchor, to_mask(partition.P, n));
  } else {
    if (T.empty()) throw ConfigError("a faulty General needs at least one fault");
    r.general = first_in_bfs(g, *r.anchor, faulty);
  }

  AdversaryScript script;
  script.kind = r.adversary;
  for (const auto& e : r.table) script.table[{e.j, e.i, e.k}] = e.bit;

  std::size_t degree_budget = 0;
  json comp_json = nullptr;
  if (r.mode == TriggerMode::pure) {
    InitiationSpec init = InitiationSpec::none();
    if (r.role != GeneralRole::none) {
      if (!r.I0) {
        std::vector<NodeId> I0(g.neighbors(*r.general).begin(), g.neighbors(*r.general).end());
        I0.push_back(*r.general);
        r.I0 = make_node_set(std::move(I0));
      }
      init.I0 = make_node_set(*r.I0);
      for (NodeId i : init.I0) g.check_node(i);
      r.I0 = init.I0;
      init.general = r.general;
      init.general_correct = r.role == GeneralRole::correct;
      init.k0 = init.broadcast_round = r.k0;
      if (!init.general_correct) init.bits = faulty_general_bits(init.I0.size(), r.faulty_bits, r.seed);
    }
    if (!r.k_max) r.k_max = r.k0 + static_cast<Round>(n);
    if (!r.kH_budget) r.kH_budget = static_cast<Round>(partition.P.size()) + 1;
    if (!r.kdelta_budget) r.kdelta_budget = r.kH_budget;

    EngineConfig ec;
    ec.graph = &g;
    ec.faults = T;
    ec.script = script;
    ec.initiation = init;
    ec.excitation_threshold = proto.excitation_threshold(g.d()) + (r.threshold_includes_self ? 1 : 0);
    ec.mode = TriggerMode::pure;
    ec.trigger_threshold = proto.pure_trigger_threshold(g.d());
    ec.k_max = *r.k_max;
    ec.backend = r.backend;
    out.trace = run(ec);
    TraceMeta& meta = out.trace.meta;
    meta.graph_origin = g.origin().describe();
    meta.d = g.d();
    meta.lambda = g.lambda();
    meta.system = sys;
    meta.protocol = proto;
    meta.partition = partition;
    meta.initiation = init;
    meta.adversary = to_string(script.kind);
    meta.seed = r.seed;
    meta.mode = TriggerMode::pure;
    meta.excitation_threshold = ec.excitation_threshold;
    meta.trigger_threshold = ec.trigger_threshold;
    meta.kH_budget = *r.kH_budget;
    meta.kdelta_budget = *r.kdelta_budget;
    out.report = summarize(out.trace);
  } else {
    const ComplementarySpec& cs = *r.complementary;
    ComplementaryConfig cc;
    cc.graph = &g;
    cc.system = sys;
    cc.protocol = proto;
    cc.threshold_includes_self = r.threshold_includes_self;
    cc.partition = partition;
    cc.role = r.role;
    cc.general = r.general.value_or(0);
    cc.broadcast_round = r.k0;
    cc.faulty_bits = r.faulty_bits;
    cc.script = script;
    cc.model.c_radius = cs.c;
    cc.model.latency = cs.latency;
    cc.model.guarantee = cs.guarantee;
    cc.model.loss = cs.loss;
    cc.model.degree_budget = cs.degree_budget;
    cc.mu = cs.mu;
    cc.u_override = cs.u;
    cc.s_override = cs.s;
    cc.k_max = r.k_max;
    cc.slack = cs.slack;
    cc.backend = r.backend;
    ComplementaryResult res = run_complementary(std::move(cc));
    if (!r.k_max) r.k_max = res.trace.k_max();
    if (!r.complementary->slack) {
      r.complementary->slack = res.trace.meta.kH_budget - static_cast<Round>(cs.latency) -
                               (complementary_k_max(n) - 16);
    }
    degree_budget = res.degree_budget;
    comp_json = {{"u_trigger", res.u_trigger},
                 {"s_local", res.s_local},
                 {"overridden", res.overridden},
                 {"closed_form_vacuous", res.closed_form_vacuous}};
    out.trace = std::move(res.trace);
    out.report = res.report;
  }

  const Verdict l2 = lemma2_holds(r.alpha, proto.beta0, g.d(), g.lambda());
  const double mu_max = mu_bound(r.alpha, proto.beta0);
  const double lower = static_cast<double>(n) - mu_max * static_cast<double>(T.size());
  out.lemma2_applies = l2.holds && !T.empty() && T.size() <= sys.f;
  out.lemma2_empirical = T.empty() || static_cast<double>(partition.P.size()) > lower;

  json triggers = json::array();
  for (NodeId i : partition.P) {
    if (out.trace.y_rise(i) != kNever) triggers.push_back({i, out.trace.y_rise(i)});
  }
  const auto sat = saturation_round(out.trace);
  const TraceMeta& meta = out.trace.meta;

  json& rep = out.report_json;
  rep["config"] = to_json(r);
  rep["graph"] = graph_json(g);
  rep["partition"] = partition_json(partition);
  rep["initiation"] = to_json(meta.initiation);
  rep["thresholds"] = {{"mode", to_string(meta.mode)},
                       {"excitation", meta.excitation_threshold},
                       {"trigger", meta.trigger_threshold},
                       {"latency", meta.latency}};
  rep["complementary"] = comp_json;
  rep["degree"] = {{"d", g.d()}, {"degree_budget", degree_budget}, {"d_prime", g.d() + degree_budget}};
  rep["saturation_round"] = sat ? json(*sat) : json(nullptr);
  rep["trigger_rounds"] = triggers;
  rep["properties"] = to_json(out.report);
  rep["npc_bound"] = {{"verdict", to_json(l2)},
                   {"mu_bound", format_double(mu_max)},
                   {"applies", out.lemma2_applies},
                   {"P_size", partition.P.size()},
                   {"lower_bound", format_double(lower)},
                   {"empirical_pass", out.lemma2_empirical}};
  rep["passed"] = out.passed();
  return out;
}

PropertyReport check_artifacts(Trace trace, const json& run_report) {
  try {
    const std::size_t n = trace.n();
    TraceMeta& meta = trace.meta;
    meta.partition = partition_from_json(run_report.at("partition"), n);
    meta.initiation = initiation_from_json(run_report.at("initiation"));
    const json& props = run_report.at("properties");
    meta.kH_budget = props.at("kH_budget").get<Round>();
    meta.kdelta_budget = props.at("kdelta_budget").get<Round>();
    for (NodeId i = 0; i < n; ++i) {
      if (trace.correct(i) == contains(meta.partition.T, i)) {
        throw ValidationError("trace correctness flags disagree with the report's fault set at node " +
                              std::to_string(i));
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("run report is missing fields: ") + e.what());
  }
  return summarize(trace);
}

Lemma1Check check_lemma1(const Graph& g, std::size_t samples, std::uint64_t seed, double lambda) {
  const std::size_t n = g.n();
  if (n < 2) throw ValidationError("edge-count sampling needs at least 2 nodes");
  Lemma1Check out;
  out.samples = samples;
  out.lambda = lambda;
  Rng rng(seed);
  std::vector<NodeId> perm(n);
  NodeMask in_s(n, 0);
  const double d = static_cast<double>(g.d());
  const double nn = static_cast<double>(n);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t size = 1 + rng.below(n - 1);
    for (NodeId i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < size; ++k) std::swap(perm[k], perm[k + rng.below(n - k)]);
    std::fill(in_s.begin(), in_s.end(), 0);
    for (std::size_t k = 0; k < size; ++k) in_s[perm[k]] = 1;
    const std::span<const NodeId> S(perm.data(), size);
    std::size_t twice = 0;
    for (NodeId i : S) {
      for (NodeId j : g.neighbors(i)) twice += in_s[j];
    }
    const double theta = static_cast<double>(size) / nn;
    const double deviation = std::abs(static_cast<double>(twice / 2) - theta * theta * d * nn / 2.0);
    const double bound = lambda / 2.0 * theta * (1.0 - theta) * nn;
    if (deviation > bound * (1.0 + 1e-12) + 1e-9) ++out.violations;
    if (bound > 0) out.worst_ratio = std::max(out.worst_ratio, deviation / bound);
  }
  return out;
}

}  // namespace relaycast

#include "relaycast/config.hpp"

#include <set>

#include "relaycast/errors.hpp"

namespace relaycast {

namespace {

// Reads keys out of one JSON object and rejects any key nobody asked for.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (doc.is_null()) {
      obj_ = json::object();
    } else if (!doc.is_object()) {
      throw ConfigError("'" + name_ + "' must be an object");
    } else {
      obj_ = doc;
    }
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return convert<T>(key);
  }

  template <class T>
  std::optional<T> opt(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return convert<T>(key);
  }

  const json& raw(const std::string& key) {
    known_.insert(key);
    static const json null_value;
    return obj_.contains(key) ? obj_.at(key) : null_value;
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!known_.count(item.key())) throw ConfigError("unknown key '" + name_ + "." + item.key() + "'");
    }
  }

 private:
  template <class T>
  T convert(const std::string& key) {
    const json& v = obj_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(name_ + "." + key + " must be a boolean");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(name_ + "." + key + " must be a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(name_ + "." + key + " must be an integer");
      if (std::is_unsigned_v<T> && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
        throw ConfigError(name_ + "." + key + " must be non-negative");
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(name_ + "." + key + " must be a string");
    }
    try {
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name_ + "." + key + ": " + e.what());
    }
  }

  std::string name_;
  json obj_;
  std::set<std::string> known_;
};

std::vector<NodeId> node_list(const json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + " must be an array of node ids");
  std::vector<NodeId> out;
  for (const auto& e : v) {
    if (!e.is_number_integer() || (!e.is_number_unsigned() && e.get<std::int64_t>() < 0)) {
      throw ConfigError(what + " must hold non-negative integers");
    }
    out.push_back(e.get<NodeId>());
  }
  return out;
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

Backend parse_backend(const std::string& s) {
  if (s == "openmp") return Backend::openmp;
  if (s == "serial") return Backend::serial;
  throw ConfigError("unknown backend '" + s + "'");
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("run config must be a JSON object");
  Section top(doc, "config");
  RunConfig c;

  if (!top.has("graph")) throw ConfigError("run config needs a 'graph' section");
  {
    Section s(top.raw("graph"), "graph");
    GraphSpec& g = c.graph;
    g.origin = s.get<std::string>("origin", "random");
    g.p = s.get<std::uint64_t>("p", 0);
    g.q = s.get<std::uint64_t>("q", 0);
    g.n = s.opt<std::size_t>("n");
    g.d = s.get<std::size_t>("d", 0);
    g.seed = s.opt<std::uint64_t>("seed");
    g.path = s.get<std::string>("path", "");
    g.name = s.get<std::string>("name", "");
    s.finish();
    if (g.origin != "lps" && g.origin != "random" && g.origin != "file" && g.origin != "named") {
      throw ConfigError("graph.origin must be lps, random, file or named");
    }
  }
  {
    Section s(top.raw("system"), "system");
    c.n = s.opt<std::size_t>("n");
    c.alpha = s.get<double>("alpha", 0.0);
    c.seed = s.get<std::uint64_t>("seed", 0);
    s.finish();
    if (!(c.alpha >= 0.0 && c.alpha < 1.0)) throw ConfigError("system.alpha must lie in [0, 1)");
  }
  {
    Section s(top.raw("protocol"), "protocol");
    ProtocolParams& p = c.protocol;
    p.beta = s.get<double>("beta", p.beta);
    p.beta0 = s.get<double>("beta0", p.beta0);
    p.beta2 = s.get<double>("beta2", p.beta2);
    p.theta0 = s.get<double>("theta0", p.theta0);
    p.eps = s.get<double>("eps", p.eps);
    c.threshold_includes_self = s.get<bool>("threshold_includes_self", false);
    s.finish();
    try {
      p.validate();
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
  }
  {
    Section s(top.raw("faults"), "faults");
    c.fault_strategy = s.get<std::string>("strategy", c.fault_strategy);
    c.f = s.opt<std::size_t>("f");
    if (s.has("nodes")) c.fault_nodes = node_list(s.raw("nodes"), "faults.nodes");
    c.fault_center = s.opt<NodeId>("center");
    s.finish();
    if (c.fault_strategy == "explicit") {
      if (c.f && *c.f != make_node_set(c.fault_nodes).size()) {
        throw ConfigError("faults.f disagrees with faults.nodes");
      }
    } else {
      parse_fault_strategy(c.fault_strategy);
      if (!c.fault_nodes.empty()) throw ConfigError("faults.nodes requires strategy 'explicit'");
    }
  }
  {
    Section s(top.raw("initiation"), "initiation");
    c.anchor = s.opt<NodeId>("anchor");
    c.general = s.opt<NodeId>("general");
    c.role = parse_general_role(s.get<std::string>("mode", "correct"));
    c.k0 = s.get<Round>("k0", 0);
    c.faulty_bits = parse_faulty_bits(s.get<std::string>("faulty_bits", "split-half"));
    if (s.has("I0")) c.I0 = node_list(s.raw("I0"), "initiation.I0");
    s.finish();
    if (c.k0 < 0) throw ConfigError("initiation.k0 must be non-negative");
  }
  {
    Section s(top.raw("adversary"), "adversary");
    c.adversary = parse_script_kind(s.get<std::string>("strategy", "silent"));
    if (s.has("table")) {
      const json& t = s.raw("table");
      if (!t.is_array()) throw ConfigError("adversary.table must be an array of [j, i, k, bit]");
      for (const auto& e : t) {
        if (!e.is_array() || e.size() != 4) throw ConfigError("adversary.table entries are [j, i, k, bit]");
        try {
          CustomEntry ce{e[0].get<NodeId>(), e[1].get<NodeId>(), e[2].get<Round>(), e[3].get<std::uint8_t>()};
          if (ce.bit > 1) throw ConfigError("adversary.table bits must be 0 or 1");
          c.table.push_back(ce);
        } catch (const json::exception& ex) {
          throw ConfigError(std::string("adversary.table: ") + ex.what());
        }
      }
    }
    s.finish();
    if (!c.table.empty() && c.adversary != ScriptKind::custom_table) {
      throw ConfigError("adversary.table requires strategy 'custom-table'");
    }
  }
  if (top.has("complementary")) {
    Section s(top.raw("complementary"), "complementary");
    ComplementarySpec cs;
    cs.c = s.get<std::size_t>("c", cs.c);
    cs.s = s.opt<std::size_t>("s");
    cs.u = s.opt<std::size_t>("u");
    cs.latency = s.get<std::size_t>("latency", cs.latency);
    cs.guarantee = parse_guarantee(s.get<std::string>("guarantee", "npc-complete"));
    cs.loss = s.get<double>("loss", 0.0);
    cs.degree_budget = s.opt<std::size_t>("degree_budget");
    cs.mu = s.get<double>("mu", cs.mu);
    cs.slack = s.opt<Round>("slack");
    s.finish();
    if (cs.s.has_value() != cs.u.has_value()) throw ConfigError("complementary.s and complementary.u go together");
    if (!(cs.loss >= 0.0 && cs.loss <= 1.0)) throw ConfigError("complementary.loss must lie in [0, 1]");
    if (cs.guarantee == Guarantee::npc_complete && cs.loss != 0.0) {
      throw ConfigError("complementary.loss needs guarantee 'lossy'");
    }
    if (cs.slack && *cs.slack < 0) throw ConfigError("complementary.slack must be non-negative");
    c.complementary = cs;
  } else {
    top.raw("complementary");
  }
  {
    Section s(top.raw("run"), "run");
    const std::string mode = s.get<std::string>("mode", c.complementary ? "complementary" : "pure");
    if (mode == "pure") {
      c.mode = TriggerMode::pure;
    } else if (mode == "complementary") {
      c.mode = TriggerMode::complementary;
    } else {
      throw ConfigError("run.mode must be pure or complementary");
    }
    c.k_max = s.opt<Round>("k_max");
    c.kH_budget = s.opt<Round>("kH_budget");
    c.kdelta_budget = s.opt<Round>("kdelta_budget");
    c.backend = parse_backend(s.get<std::string>("backend", "openmp"));
    s.finish();
    if (c.mode == TriggerMode::complementary && !c.complementary) {
      throw ConfigError("run.mode complementary needs a complementary section");
    }
    if (c.mode == TriggerMode::pure && c.complementary) {
      throw ConfigError("a complementary section needs run.mode complementary");
    }
    if (c.k_max && *c.k_max < 0) throw ConfigError("run.k_max must be non-negative");
    if (c.mode == TriggerMode::complementary && (c.kH_budget || c.kdelta_budget)) {
      throw ConfigError("complementary budgets come from latency and slack, not run.kH_budget");
    }
    if (c.I0 && c.mode == TriggerMode::complementary) {
      throw ConfigError("initiation.I0 is only meaningful in pure mode");
    }
  }
  top.finish();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& c) {
  json j;
  j["graph"] = {{"origin", c.graph.origin}, {"p", c.graph.p},       {"q", c.graph.q},
                {"n", opt_json(c.graph.n)}, {"d", c.graph.d},       {"seed", opt_json(c.graph.seed)},
                {"path", c.graph.path},     {"name", c.graph.name}};
  j["system"] = {{"n", opt_json(c.n)}, {"alpha", c.alpha}, {"seed", c.seed}};
  j["protocol"] = {{"beta", c.protocol.beta},
                   {"beta0", c.protocol.beta0},
                   {"beta2", c.protocol.beta2},
                   {"theta0", c.protocol.theta0},
                   {"eps", c.protocol.eps},
                   {"threshold_includes_self", c.threshold_includes_self}};
  j["faults"] = {{"strategy", c.fault_strategy},
                 {"f", opt_json(c.f)},
                 {"nodes", c.fault_nodes},
                 {"center", opt_json(c.fault_center)}};
  j["initiation"] = {{"anchor", opt_json(c.anchor)},
                     {"general", opt_json(c.general)},
                     {"mode", to_string(c.role)},
                     {"k0", c.k0},
                     {"faulty_bits", to_string(c.faulty_bits)},
                     {"I0", opt_json(c.I0)}};
  json table = json::array();
  for (const auto& e : c.table) table.push_back({e.j, e.i, e.k, e.bit});
  j["adversary"] = {{"strategy", to_string(c.adversary)}, {"table", table}};
  if (c.complementary) {
    const ComplementarySpec& cs = *c.complementary;
    j["complementary"] = {{"c", cs.c},
                          {"s", opt_json(cs.s)},
                          {"u", opt_json(cs.u)},
                          {"latency", cs.latency},
                          {"guarantee", to_string(cs.guarantee)},
                          {"loss", cs.loss},
                          {"degree_budget", opt_json(cs.degree_budget)},
                          {"mu", cs.mu},
                          {"slack", opt_json(cs.slack)}};
  } else {
    j["complementary"] = nullptr;
  }
  j["run"] = {{"mode", to_string(c.mode)},
              {"k_max", opt_json(c.k_max)},
              {"kH_budget", opt_json(c.kH_budget)},
              {"kdelta_budget", opt_json(c.kdelta_budget)},
              {"backend", c.backend == Backend::serial ? "serial" : "openmp"}};
  return j;
}

void set_path(json& doc, const std::string& path, const json& value) {
  if (path.empty()) throw ConfigError("empty parameter path");
  json* cur = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("bad parameter path '" + path + "'");
    if (cur->is_null()) *cur = json::object();
    if (!cur->is_object()) throw ConfigError("parameter path '" + path + "' crosses a non-object");
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

}  // namespace relaycast

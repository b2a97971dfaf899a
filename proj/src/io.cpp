#include "relaycast/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relaycast/errors.hpp"

namespace relaycast {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// Non-finite values have no JSON literal; they travel as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json optional_round(const std::optional<Round>& r) { return r ? json(*r) : json(nullptr); }

std::size_t parse_size(const std::string& tok, const std::string& what) {
  std::size_t v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ValidationError("bad " + what + " '" + tok + "'");
  }
  return v;
}

}  // namespace

void write_graph(std::ostream& os, const Graph& g) {
  std::string out;
  out += std::to_string(g.n()) + " " + std::to_string(g.d()) + " " +
         (g.bipartite() ? "bipartite" : "nonbipartite") + " " + format_double(g.lambda()) + "\n";
  for (NodeId i = 0; i < g.n(); ++i) {
    out += std::to_string(i) + ":";
    for (NodeId j : g.neighbors(i)) {
      out += ' ';
      out += std::to_string(j);
    }
    out += '\n';
  }
  os << out;
}

Graph read_graph(std::istream& is, const std::string& label) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("graph file is empty");
  std::istringstream header(line);
  std::string n_tok, d_tok, kind, lambda_tok;
  if (!(header >> n_tok >> d_tok >> kind >> lambda_tok)) {
    throw ValidationError("graph header must be 'n d bipartite|nonbipartite lambda'");
  }
  const std::size_t n = parse_size(n_tok, "node count");
  const std::size_t d = parse_size(d_tok, "degree");
  if (kind != "bipartite" && kind != "nonbipartite") throw ValidationError("bad bipartite flag '" + kind + "'");
  double lambda = 0.0;
  try {
    lambda = std::stod(lambda_tok);
  } catch (const std::exception&) {
    throw ValidationError("bad lambda '" + lambda_tok + "'");
  }

  std::vector<std::vector<NodeId>> adj(n);
  std::vector<bool> seen(n, false);
  std::size_t lines = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ValidationError("adjacency line without ':' : " + line);
    const std::size_t id = parse_size(line.substr(0, colon), "node id");
    if (id >= n) throw ValidationError("node id " + std::to_string(id) + " out of range");
    if (seen[id]) throw ValidationError("node " + std::to_string(id) + " listed twice");
    seen[id] = true;
    std::istringstream rest(line.substr(colon + 1));
    std::string tok;
    while (rest >> tok) adj[id].push_back(static_cast<NodeId>(parse_size(tok, "neighbor id")));
    if (adj[id].size() != d) {
      throw ValidationError("node " + std::to_string(id) + " has " + std::to_string(adj[id].size()) +
                            " neighbors, header says " + std::to_string(d));
    }
    ++lines;
  }
  if (lines != n) throw ValidationError("graph file lists " + std::to_string(lines) + " of " + std::to_string(n) + " nodes");

  GraphOrigin origin;
  origin.kind = GraphOrigin::Kind::file;
  origin.n = n;
  origin.d = d;
  origin.label = label;
  Graph g = Graph::from_adjacency(std::move(adj), origin, lambda);
  if (g.bipartite() != (kind == "bipartite")) throw ValidationError("bipartite flag disagrees with the adjacency");
  return g;
}

void save_graph(const std::string& path, const Graph& g) {
  std::ostringstream os;
  write_graph(os, g);
  write_file_atomic(path, os.str());
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file " + path);
  return read_graph(in, path);
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  std::string out = "round,node,u,x,y,correct\n";
  out.reserve(out.size() + static_cast<std::size_t>(trace.k_max() + 1) * trace.n() * 16);
  for (Round k = 0; k <= trace.k_max(); ++k) {
    const std::string prefix = std::to_string(k) + ",";
    for (NodeId i = 0; i < trace.n(); ++i) {
      out += prefix;
      out += std::to_string(i);
      out += ',';
      out += static_cast<char>('0' + trace.u(k, i));
      out += ',';
      out += static_cast<char>('0' + trace.x(k, i));
      out += ',';
      out += static_cast<char>('0' + trace.y(k, i));
      out += ',';
      out += trace.correct(i) ? '1' : '0';
      out += '\n';
    }
  }
  os << out;
}

Trace read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "round,node,u,x,y,correct") {
    throw ValidationError("trace CSV must start with 'round,node,u,x,y,correct'");
  }
  struct Row {
    std::size_t k, i;
    std::uint8_t u, x, y, c;
  };
  std::vector<Row> rows;
  std::size_t max_k = 0, max_i = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t f[6];
    std::size_t field = 0, start = 0;
    for (std::size_t pos = 0; pos <= line.size(); ++pos) {
      if (pos == line.size() || line[pos] == ',') {
        if (field == 6) throw ValidationError("trace row has too many fields: " + line);
        f[field++] = parse_size(line.substr(start, pos - start), "trace field");
        start = pos + 1;
      }
    }
    if (field != 6) throw ValidationError("trace row needs 6 fields: " + line);
    for (int b = 2; b < 6; ++b) {
      if (f[b] > 1) throw ValidationError("trace signal values must be 0 or 1: " + line);
    }
    rows.push_back({f[0], f[1], static_cast<std::uint8_t>(f[2]), static_cast<std::uint8_t>(f[3]),
                    static_cast<std::uint8_t>(f[4]), static_cast<std::uint8_t>(f[5])});
    max_k = std::max(max_k, f[0]);
    max_i = std::max(max_i, f[1]);
  }
  if (rows.empty()) throw ValidationError("trace CSV has no rows");
  const std::size_t n = max_i + 1, rounds = max_k + 1;
  if (rows.size() != n * rounds) throw ValidationError("trace CSV does not cover every (round, node)");

  using Dense = std::vector<std::vector<std::uint8_t>>;
  Dense u(rounds, std::vector<std::uint8_t>(n)), x = u, y = u;
  std::vector<std::uint8_t> filled(n * rounds, 0);
  NodeMask correct(n, 2);
  for (const Row& r : rows) {
    if (filled[r.k * n + r.i]++) throw ValidationError("trace CSV repeats a (round, node) row");
    u[r.k][r.i] = r.u;
    x[r.k][r.i] = r.x;
    y[r.k][r.i] = r.y;
    if (correct[r.i] != 2 && correct[r.i] != r.c) throw ValidationError("correct flag changes over time");
    correct[r.i] = r.c;
  }
  return Trace::from_dense(u, x, y, std::move(correct));
}

json to_json(const InequalityCheck& c) {
  return {{"name", c.name}, {"lhs", number(c.lhs)}, {"relation", c.relation}, {"rhs", number(c.rhs)},
          {"holds", c.holds}};
}

json to_json(const Verdict& v) {
  json checks = json::array();
  for (const auto& c : v.checks) checks.push_back(to_json(c));
  json j = {{"holds", v.holds}, {"checks", checks}};
  j["theta0"] = v.theta0 ? number(*v.theta0) : json(nullptr);
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

json to_json(const FeasibilityReport& r) {
  json assignments = json::array();
  for (const auto& a : r.feasible_assignments) {
    assignments.push_back({{"beta", a.beta}, {"beta0", a.beta0}, {"beta2", a.beta2}, {"theta0", a.theta0}});
  }
  return {{"alpha", r.alpha},
          {"n", r.n},
          {"d", r.d},
          {"lambda", number(r.lambda)},
          {"grid_step", r.grid_step},
          {"barrier_violated", r.barrier_violated},
          {"barrier", to_json(r.barrier)},
          {"grid_points", r.grid_points},
          {"rejected", {{"spectral_gap", r.rejected_spectral_gap}, {"excitation_gap", r.rejected_excitation_gap}, {"coefficient_order", r.rejected_coefficient_order}}},
          {"feasible_count", r.feasible_assignments.size()},
          {"mu_bound", r.mu_bound ? number(*r.mu_bound) : json(nullptr)},
          {"witness", r.witness ? to_json(*r.witness) : json(nullptr)},
          {"feasible_assignments", assignments}};
}

json to_json(const PropertyReport& r) {
  return {{"heaviside_branch", to_string(r.heaviside_branch)},
          {"heaviside_pass", r.heaviside_pass},
          {"dirac_pass", r.dirac_pass},
          {"unforgeability_pass", r.unforgeability_pass},
          {"witness_size", r.witness_size},
          {"k1_first_trigger", optional_round(r.k1_first_trigger)},
          {"km_last_trigger", optional_round(r.km_last_trigger)},
          {"measured_kH", optional_round(r.measured_kH)},
          {"measured_kdelta", r.measured_kdelta},
          {"triggered", r.triggered},
          {"poor_fraction", r.poor_fraction},
          {"first_uncovered", r.first_uncovered ? json(*r.first_uncovered) : json(nullptr)},
          {"kH_budget", r.kH_budget},
          {"kdelta_budget", r.kdelta_budget},
          {"growth_violations", r.growth_violations}};
}

json to_json(const InitiationSpec& s) {
  return {{"general", s.general ? json(*s.general) : json(nullptr)},
          {"general_correct", s.general_correct},
          {"broadcast_round", s.broadcast_round},
          {"k0", s.k0},
          {"I0", s.I0},
          {"bits", s.bits}};
}

InitiationSpec initiation_from_json(const json& j) {
  InitiationSpec s;
  try {
    if (!j.at("general").is_null()) s.general = j.at("general").get<NodeId>();
    s.general_correct = j.at("general_correct").get<bool>();
    s.broadcast_round = j.at("broadcast_round").get<Round>();
    s.k0 = j.at("k0").get<Round>();
    s.I0 = make_node_set(j.at("I0").get<std::vector<NodeId>>());
    s.bits = j.at("bits").get<std::vector<std::uint8_t>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad initiation record: ") + e.what());
  }
  if (!s.bits.empty() && s.bits.size() != s.I0.size()) throw ValidationError("initiation bits must match I0");
  return s;
}

json to_json(const Lemma6Result& r) {
  return {{"pass", r.pass},
          {"min_count", r.min_count},
          {"argmin", r.argmin ? json(*r.argmin) : json(nullptr)},
          {"target", r.target}};
}

json partition_json(const FaultPartition& p) {
  return {{"T", p.T},
          {"Z", p.Z},
          {"P_size", p.P.size()},
          {"mu_achieved", p.mu_achieved},
          {"mu_undefined", p.mu_undefined},
          {"beta0", p.beta0}};
}

FaultPartition partition_from_json(const json& j, std::size_t n) {
  FaultPartition p;
  try {
    p.T = make_node_set(j.at("T").get<std::vector<NodeId>>());
    p.Z = make_node_set(j.at("Z").get<std::vector<NodeId>>());
    p.mu_achieved = j.at("mu_achieved").get<double>();
    p.mu_undefined = j.at("mu_undefined").get<bool>();
    p.beta0 = j.at("beta0").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad partition record: ") + e.what());
  }
  for (NodeId i : p.Z) {
    if (i >= n) throw ValidationError("partition node " + std::to_string(i) + " out of range");
  }
  if (!is_subset(p.T, p.Z)) throw ValidationError("partition T is not contained in Z");
  NodeMask in_z = to_mask(p.Z, n);
  for (NodeId i = 0; i < n; ++i) {
    if (!in_z[i]) p.P.push_back(i);
  }
  if (j.contains("P_size") && j.at("P_size").get<std::size_t>() != p.P.size()) {
    throw ValidationError("partition P_size disagrees with Z");
  }
  return p;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp);
    out << content;
    if (!out) throw ValidationError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace relaycast

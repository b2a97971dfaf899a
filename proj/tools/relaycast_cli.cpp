// relaycast command-line driver.
//
// Exit codes: 0 success, 1 a checked property failed, 2 invalid input,
// 3 any other runtime failure (construction, numerics, execution).

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "relaycast/errors.hpp"
#include "relaycast/runner.hpp"
#include "relaycast/sweep.hpp"

using namespace relaycast;

namespace {

constexpr int kPropertyFailure = 1;
constexpr int kInvalid = 2;
constexpr int kRuntime = 3;

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

json read_json(const std::string& path) {
  try {
    if (path == "-") return json::parse(std::cin);
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::vector<NodeId> parse_node_list(const std::string& text) {
  std::vector<NodeId> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(static_cast<NodeId>(v));
    } catch (const std::exception&) {
      throw ValidationError("bad node id '" + tok + "'");
    }
  }
  return out;
}

int cmd_gen_graph(const std::vector<std::uint64_t>& lps, const std::vector<std::uint64_t>& rnd,
                  const std::string& out) {
  if (lps.empty() == rnd.empty()) throw ValidationError("give exactly one of --lps p q or --random n d seed");
  const Graph g = !lps.empty() ? build_lps_graph(lps[0], lps[1]) : build_random_regular(rnd[0], rnd[1], rnd[2]);
  std::ostringstream os;
  write_graph(os, g);
  emit(out, os.str());
  std::cerr << g.origin().describe() << ": n=" << g.n() << " d=" << g.d()
            << (g.bipartite() ? " bipartite" : " nonbipartite") << " lambda=" << format_double(g.lambda()) << "\n";
  return 0;
}

int cmd_spectrum(const std::string& path, double tol) {
  const Graph g = load_graph(path);
  const double lambda = spectral_bound(g, tol);
  const double bound = ramanujan_lambda(g.d());
  json j = {{"n", g.n()},
            {"d", g.d()},
            {"bipartite", g.bipartite()},
            {"lambda", lambda},
            {"ramanujan_bound", bound},
            {"ramanujan", lambda <= bound * (1.0 + tol)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_npc(const std::string& path, const std::string& faults, const std::string& strategy, std::size_t f,
            std::uint64_t seed, double beta0) {
  const Graph g = load_graph(path);
  NodeSet T;
  if (!faults.empty()) {
    if (!strategy.empty()) throw ValidationError("give either --faults or --strategy, not both");
    T = make_node_set(parse_node_list(faults));
    for (NodeId j : T) g.check_node(j);
  } else if (!strategy.empty()) {
    PlacementOptions opts;
    opts.beta0 = beta0;
    T = place_faults(g, parse_fault_strategy(strategy), f, seed, opts);
  }
  std::cout << partition_json(compute_P(g, T, beta0)).dump(2) << "\n";
  return 0;
}

int cmd_feasible(const std::string& path, const std::string& out) {
  const json p = read_json(path);
  static const std::vector<std::string> known = {"alpha", "n", "d", "lambda", "grid_step", "theta0", "eps",
                                                 "mu", "beta", "beta0"};
  for (const auto& item : p.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ValidationError("unknown key '" + item.key() + "' in feasibility params");
    }
  }
  double alpha = 0;
  std::size_t n = 0, d = 0;
  double step = 0.01;
  try {
    alpha = p.at("alpha").get<double>();
    n = p.at("n").get<std::size_t>();
    d = p.at("d").get<std::size_t>();
    if (p.contains("grid_step")) step = p.at("grid_step").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("feasibility params need alpha, n, d: ") + e.what());
  }
  const double lambda = p.contains("lambda") ? p.at("lambda").get<double>() : ramanujan_lambda(d);
  json j = to_json(pure_propagation_feasible(alpha, n, d, lambda, step));

  const double beta = p.value("beta", 0.25);
  const double beta0 = p.value("beta0", 0.25);
  if (p.contains("theta0")) {
    const double eps = p.value("eps", 0.5);
    j["log_time_condition"] = to_json(lemma5_holds(alpha, p.at("theta0").get<double>(), d, eps, beta, beta0));
  }
  if (p.contains("mu")) {
    try {
      const Theorem1Params t = theorem1_params(alpha, n, p.at("mu").get<double>());
      j["trigger_constants"] = {{"u_trigger", t.u_trigger}, {"s_local", t.s_local}, {"vacuous", false}};
    } catch (const ValidationError& e) {
      j["trigger_constants"] = {{"vacuous", true}, {"reason", e.what()}};
    }
  }
  emit(out, j.dump(2) + "\n");
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& trace_path, const std::string& report_path) {
  const RunResult res = execute(parse_run_config(read_json(config_path)));
  if (!trace_path.empty()) {
    std::ostringstream os;
    write_trace_csv(os, res.trace);
    emit(trace_path, os.str());
  }
  emit(report_path, res.report_json.dump(2) + "\n");
  return res.passed() ? 0 : kPropertyFailure;
}

int cmd_sweep(const std::string& spec_path, const std::string& out) {
  const SweepSpec spec = parse_sweep_spec(read_json(spec_path));
  const auto rows = run_sweep(spec);
  emit(out, sweep_csv(spec, rows));
  std::size_t failed = 0;
  for (const auto& r : rows) failed += !r.passed;
  std::cerr << rows.size() << " runs, " << failed << " failing\n";
  return failed == 0 ? 0 : kPropertyFailure;
}

int cmd_check(const std::string& trace_path, const std::string& report_path) {
  std::ifstream in(trace_path);
  if (!in) throw ValidationError("cannot open " + trace_path);
  const PropertyReport rep = check_artifacts(read_trace_csv(in), read_json(report_path));
  std::cout << to_json(rep).dump(2) << "\n";
  const bool ok = rep.heaviside_pass && rep.dirac_pass && rep.unforgeability_pass;
  return ok ? 0 : kPropertyFailure;
}

int cmd_check_lemma1(const std::string& path, std::size_t samples, std::uint64_t seed, bool ramanujan,
                     bool measure) {
  const Graph g = load_graph(path);
  double lambda = measure ? spectral_bound(g) : g.lambda();
  if (ramanujan) lambda = ramanujan_lambda(g.d());
  const Lemma1Check c = check_lemma1(g, samples, seed, lambda);
  json j = {{"n", g.n()},
            {"d", g.d()},
            {"bipartite", g.bipartite()},
            {"lambda", c.lambda},
            {"samples", c.samples},
            {"violations", c.violations},
            {"worst_ratio", c.worst_ratio}};
  std::cout << j.dump(2) << "\n";
  return c.violations == 0 ? 0 : kPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relaycast: relay-based broadcast on bounded-degree expanders"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-graph", "Build an LPS or random regular graph as an adjacency file");
  std::vector<std::uint64_t> lps, rnd;
  std::string gen_out = "-";
  gen->add_option("--lps", lps, "p q")->expected(2);
  gen->add_option("--random", rnd, "n d seed")->expected(3);
  gen->add_option("-o,--out", gen_out, "output file ('-' for stdout)");

  auto* spec = app.add_subcommand("spectrum", "Measure the spectral bound lambda of a graph file");
  std::string spec_graph;
  double spec_tol = kDefaultSpectralTol;
  spec->add_option("graph", spec_graph)->required();
  spec->add_option("--tol", spec_tol, "relative tolerance");

  auto* npc = app.add_subcommand("npc", "Compute Z(T, beta0) and the npc set P");
  std::string npc_graph, npc_faults, npc_strategy;
  std::size_t npc_f = 0;
  std::uint64_t npc_seed = 0;
  double npc_beta0 = 0.25;
  npc->add_option("graph", npc_graph)->required();
  npc->add_option("--faults", npc_faults, "comma-separated fault nodes");
  npc->add_option("--strategy", npc_strategy, "random | ball | greedy-closure | around-initiation");
  npc->add_option("--f", npc_f, "fault count for --strategy");
  npc->add_option("--seed", npc_seed);
  npc->add_option("--beta0", npc_beta0);

  auto* feas = app.add_subcommand("feasible", "Grid-search pure-propagation parameters");
  std::string feas_params, feas_out = "-";
  feas->add_option("params", feas_params, "JSON {alpha, n, d, lambda?, grid_step?, theta0?, eps?, mu?}")->required();
  feas->add_option("-o,--out", feas_out);

  auto* run = app.add_subcommand("run", "Execute one run config");
  std::string run_config, run_trace, run_report = "-";
  run->add_option("config", run_config)->required();
  run->add_option("--trace", run_trace, "trace CSV output");
  run->add_option("--report", run_report, "report JSON output ('-' for stdout)");

  auto* sweep = app.add_subcommand("sweep", "Run a config template over a parameter grid");
  std::string sweep_spec, sweep_out = "-";
  sweep->add_option("spec", sweep_spec, "JSON {base, axes, seeds, cap}")->required();
  sweep->add_option("-o,--out", sweep_out, "summary CSV output");

  auto* check = app.add_subcommand("check", "Re-check a trace CSV against its run report");
  std::string check_trace, check_report;
  check->add_option("--trace", check_trace)->required();
  check->add_option("--report", check_report)->required();

  auto* lemma1 = app.add_subcommand("check-lemma1", "Sample sets S and count edge-count bound violations");
  std::string l1_graph;
  std::size_t l1_samples = 1000;
  std::uint64_t l1_seed = 0;
  bool l1_ramanujan = false, l1_measure = false;
  lemma1->add_option("graph", l1_graph)->required();
  lemma1->add_option("--samples", l1_samples);
  lemma1->add_option("--seed", l1_seed);
  lemma1->add_flag("--ramanujan", l1_ramanujan, "use 2 sqrt(d-1) instead of the measured lambda");
  lemma1->add_flag("--measure", l1_measure, "re-measure lambda instead of trusting the file header");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }

  try {
    if (*gen) return cmd_gen_graph(lps, rnd, gen_out);
    if (*spec) return cmd_spectrum(spec_graph, spec_tol);
    if (*npc) return cmd_npc(npc_graph, npc_faults, npc_strategy, npc_f, npc_seed, npc_beta0);
    if (*feas) return cmd_feasible(feas_params, feas_out);
    if (*run) return cmd_run(run_config, run_trace, run_report);
    if (*sweep) return cmd_sweep(sweep_spec, sweep_out);
    if (*check) return cmd_check(check_trace, check_report);
    if (*lemma1) return cmd_check_lemma1(l1_graph, l1_samples, l1_seed, l1_ramanujan, l1_measure);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return 0;
}

#ifndef RELAYCAST_CONFIG_HPP
#define RELAYCAST_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "relaycast/complementary.hpp"
#include "relaycast/io.hpp"

namespace relaycast {

struct GraphSpec {
  std::string origin = "random";  // lps | random | file | named
  std::uint64_t p = 0, q = 0;     // lps
  std::optional<std::size_t> n;   // random, named complete/cycle/complete-bipartite
  std::size_t d = 0;              // random
  std::optional<std::uint64_t> seed;  // random; derived from system.seed when absent
  std::string path;               // file
  std::string name;               // named: complete | cycle | petersen | complete-bipartite
};

struct ComplementarySpec {
  std::size_t c = 1;
  std::optional<std::size_t> s;  // overrides; both or neither
  std::optional<std::size_t> u;
  std::size_t latency = 0;
  Guarantee guarantee = Guarantee::npc_complete;
  double loss = 0.0;
  std::optional<std::size_t> degree_budget;
  double mu = 2.0;
  std::optional<Round> slack;
};

struct CustomEntry {
  NodeId j = 0, i = 0;
  Round k = 0;
  std::uint8_t bit = 0;
};

/// One experiment. Parsed strictly from JSON (unknown keys are errors) and
/// echoed back with every default filled in.
struct RunConfig {
  GraphSpec graph;

  std::optional<std::size_t> n;  // must agree with the graph when given
  double alpha = 0.0;
  std::uint64_t seed = 0;

  ProtocolParams protocol;
  bool threshold_includes_self = false;

  std::string fault_strategy = "greedy-closure";  // or "explicit"
  std::optional<std::size_t> f;                   // default floor(alpha n)
  std::vector<NodeId> fault_nodes;                // explicit
  std::optional<NodeId> fault_center;             // ball

  std::optional<NodeId> anchor;   // placement and General search start; seeded when absent
  std::optional<NodeId> general;  // nearest suitable node to the anchor when absent
  GeneralRole role = GeneralRole::correct;
  Round k0 = 0;
  FaultyBits faulty_bits = FaultyBits::split_half;
  std::optional<std::vector<NodeId>> I0;  // pure mode only; default {general} u N_general

  ScriptKind adversary = ScriptKind::silent;
  std::vector<CustomEntry> table;

  std::optional<ComplementarySpec> complementary;

  TriggerMode mode = TriggerMode::pure;
  std::optional<Round> k_max;
  std::optional<Round> kH_budget;  // pure mode; default n
  std::optional<Round> kdelta_budget;
  Backend backend = Backend::openmp;
};

RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::string& path);
json to_json(const RunConfig& c);

/// Writes `value` at a dotted path such as "protocol.beta" or
/// "complementary.u", creating intermediate objects.
void set_path(json& doc, const std::string& path, const json& value);

}  // namespace relaycast

#endif  // RELAYCAST_CONFIG_HPP

#ifndef RELAYCAST_COMPLEMENTARY_HPP
#define RELAYCAST_COMPLEMENTARY_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "relaycast/engine.hpp"
#include "relaycast/properties.hpp"

namespace relaycast {

// Almost-everywhere propagation complemented by an idealized s-localized
// communication primitive C. C itself is not implemented: it delivers
// between i and the members of S_i with a fixed latency and a configurable
// guarantee, and the cost of realizing it is only accounted as extra degree.

enum class Guarantee { npc_complete, lossy };
std::string to_string(Guarantee g);
Guarantee parse_guarantee(const std::string& s);

struct LocalizedProtocolModel {
  std::size_t s_local = 0;
  std::size_t c_radius = 0;
  std::size_t latency = 0;
  Guarantee guarantee = Guarantee::npc_complete;
  double loss = 0.0;  // lossy: fraction of npc members of S_general not reached
  std::optional<std::size_t> degree_budget;
  LocalSelection selection;
};

/// S_i = the first s_local nodes of the radius-c ball around i in
/// (distance, id) order; i itself is always first.
LocalSelection select_local_sets(const Graph& g, std::size_t s_local, std::size_t c_radius);

/// Extra links per node charged for C: ceil(s / (c d)) for c >= 1, s - 1 for c = 0.
std::size_t default_degree_budget(std::size_t d, std::size_t s_local, std::size_t c_radius);

struct Lemma6Result {
  bool pass = false;
  std::size_t min_count = 0;
  std::optional<NodeId> argmin;
  double target = 0.0;  // target_fraction * n
};

/// For every npc node i, |ball(i, c) n P| >= target_fraction * n.
Lemma6Result verify_lemma6(const Graph& g, const FaultPartition& partition, std::size_t c,
                           double target_fraction);

enum class FaultyBits { split_half, random, all, none };
std::string to_string(FaultyBits b);
FaultyBits parse_faulty_bits(const std::string& s);

/// Bits a faulty General hands to the m members of its initiation set.
/// split-half alternates 1, 0, 1, ... in member order.
std::vector<std::uint8_t> faulty_general_bits(std::size_t m, FaultyBits policy, std::uint64_t seed);

/// Initiation produced by C for a General broadcasting at `k0`: the npc
/// members of S_general receive input at k0 + latency. A correct General
/// sends 1 to all of them (minus losses); a faulty one picks bits per node.
InitiationSpec ideal_localized_init(const Graph& g, const LocalizedProtocolModel& model, NodeId general,
                                    const FaultPartition& partition, Round k0,
                                    FaultyBits faulty_bits = FaultyBits::split_half,
                                    std::uint64_t seed = 0);

enum class GeneralRole { correct, faulty, none };
std::string to_string(GeneralRole r);
GeneralRole parse_general_role(const std::string& s);

struct ComplementaryConfig {
  const Graph* graph = nullptr;
  SystemParams system;
  ProtocolParams protocol;
  bool threshold_includes_self = false;
  FaultPartition partition;
  GeneralRole role = GeneralRole::correct;
  NodeId general = 0;
  Round broadcast_round = 0;
  FaultyBits faulty_bits = FaultyBits::split_half;
  AdversaryScript script;
  LocalizedProtocolModel model;  // selection is filled in when empty
  double mu = 2.0;
  std::optional<std::size_t> u_override;
  std::optional<std::size_t> s_override;
  std::optional<Round> k_max;
  std::optional<Round> slack;
  Backend backend = Backend::openmp;
};

struct ComplementaryResult {
  Trace trace;
  PropertyReport report;
  std::size_t u_trigger = 0;
  std::size_t s_local = 0;
  bool overridden = false;
  bool closed_form_vacuous = false;
  std::size_t degree_budget = 0;
  std::size_t d_prime = 0;
};

/// Default round horizon for complementary runs: 4 ceil(log2 n) + 16.
Round complementary_k_max(std::size_t n);

/// Full pipeline: S_i selection, localized initiation, engine run with the
/// trigger counted over S_i through C's readback, property checks with
/// kH = kdelta = latency + 4 ceil(log2 n) + slack.
ComplementaryResult run_complementary(ComplementaryConfig config);

}  // namespace relaycast

#endif  // RELAYCAST_COMPLEMENTARY_HPP

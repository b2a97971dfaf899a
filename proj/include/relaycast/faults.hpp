#ifndef RELAYCAST_FAULTS_HPP
#define RELAYCAST_FAULTS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "relaycast/graph.hpp"

namespace relaycast {

/// T, its immune closure Z(T, beta0) and the npc set P = V \ Z.
struct FaultPartition {
  NodeSet T;
  NodeSet Z;
  NodeSet P;
  double beta0 = 0.0;
  /// |Z u T| / |T|; reported as 1.0 with `mu_undefined` set when T is empty.
  double mu_achieved = 1.0;
  bool mu_undefined = false;
};

/// Closure threshold: a node joins Z once ceil(beta0 d) of its neighbors are
/// in Z. A node outside Z never counts itself, so whether N_i includes i does
/// not matter here.
std::size_t closure_threshold(const Graph& g, double beta0);

/// Least superset of T closed under the threshold rule.
NodeSet compute_Z(const Graph& g, std::span<const NodeId> T, double beta0);

FaultPartition compute_P(const Graph& g, std::span<const NodeId> T, double beta0);

enum class FaultStrategy { random, ball, greedy_closure, around_initiation };

std::string to_string(FaultStrategy s);
FaultStrategy parse_fault_strategy(const std::string& s);

struct PlacementOptions {
  double beta0 = 0.25;                 // used by greedy-closure
  std::optional<NodeId> center;        // ball; seeded choice when empty
  NodeSet anchors;                     // around-initiation; seeded single node when empty
};

/// Chooses |T| = f faulty nodes. Deterministic for (g, strategy, f, seed, options).
NodeSet place_faults(const Graph& g, FaultStrategy strategy, std::size_t f, std::uint64_t seed,
                     const PlacementOptions& options = {});

}  // namespace relaycast

#endif  // RELAYCAST_FAULTS_HPP

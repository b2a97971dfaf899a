#ifndef RELAYCAST_PROPERTIES_HPP
#define RELAYCAST_PROPERTIES_HPP

#include <optional>
#include <span>
#include <string>

#include "relaycast/engine.hpp"

namespace relaycast {

enum class HeavisideBranch {
  correctness,     // correct General initiated npc nodes
  unforgeability,  // no npc node received any input
  not_applicable,  // faulty General reached npc nodes; only the relay check applies
};

std::string to_string(HeavisideBranch b);

struct HeavisideResult {
  HeavisideBranch branch = HeavisideBranch::not_applicable;
  bool pass = true;
  std::optional<Round> measured_kH;
  std::optional<NodeId> first_uncovered;
};

struct DiracResult {
  bool pass = true;
  std::optional<Round> k1_first_trigger;
  std::optional<Round> km_last_trigger;
  Round measured_kdelta = 0;  // km - k1 + 1, or 0 when nothing triggers
  std::size_t triggered = 0;
  std::optional<NodeId> first_uncovered;
};

struct PropertyReport {
  HeavisideBranch heaviside_branch = HeavisideBranch::not_applicable;
  bool heaviside_pass = true;
  bool dirac_pass = true;
  bool unforgeability_pass = true;
  std::size_t witness_size = 0;
  std::optional<Round> k1_first_trigger;
  std::optional<Round> km_last_trigger;
  std::optional<Round> measured_kH;
  Round measured_kdelta = 0;
  std::size_t triggered = 0;
  double poor_fraction = 0.0;
  std::optional<NodeId> first_uncovered;
  Round kH_budget = 0;
  Round kdelta_budget = 0;
  std::vector<Round> growth_violations;

  bool operator==(const PropertyReport&) const = default;
};

/// Correctness when the General is correct: every witness node triggers at
/// some round in [k0, k0 + budget). Unforgeability when no witness node got
/// input: no witness node ever triggers.
HeavisideResult check_heaviside(const Trace& trace, Round kH_budget, std::span<const NodeId> witness_P);

/// Relay: either no witness node triggers, or all do with
/// last < first + budget.
DiracResult check_dirac(const Trace& trace, Round kdelta_budget, std::span<const NodeId> witness_P);

/// No witness node triggers before the first round any witness node receives input.
bool check_unforgeability(const Trace& trace, std::span<const NodeId> witness_P);

/// Both checks with the budgets and witness set recorded in the trace metadata.
PropertyReport summarize(const Trace& trace);

}  // namespace relaycast

#endif  // RELAYCAST_PROPERTIES_HPP

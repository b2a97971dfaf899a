#include "relaycast/properties.hpp"

#include <algorithm>

#include "relaycast/errors.hpp"

namespace relaycast {

std::string to_string(HeavisideBranch b) {
  switch (b) {
    case HeavisideBranch::correctness:
      return "correctness";
    case HeavisideBranch::unforgeability:
      return "unforgeability";
    case HeavisideBranch::not_applicable:
      return "not-applicable";
  }
  return "?";
}

namespace {

void require_correct_witness(const Trace& trace, std::span<const NodeId> witness) {
  for (NodeId i : witness) {
    if (i >= trace.n()) throw ValidationError("witness node " + std::to_string(i) + " out of range");
    if (!trace.correct(i)) {
      throw ValidationError("witness node " + std::to_string(i) + " is faulty");
    }
  }
}

Round first_witness_input(const Trace& trace, std::span<const NodeId> witness) {
  Round first = kNever;
  for (NodeId i : witness) first = std::min(first, trace.u_round(i));
  return first;
}

}  // namespace

bool check_unforgeability(const Trace& trace, std::span<const NodeId> witness_P) {
  require_correct_witness(trace, witness_P);
  const Round first_input = first_witness_input(trace, witness_P);
  return std::none_of(witness_P.begin(), witness_P.end(),
                      [&](NodeId i) { return trace.y_rise(i) < first_input; });
}

HeavisideResult check_heaviside(const Trace& trace, Round kH_budget, std::span<const NodeId> witness_P) {
  require_correct_witness(trace, witness_P);
  HeavisideResult r;
  const auto& init = trace.meta.initiation;
  const bool npc_input = first_witness_input(trace, witness_P) != kNever;

  if (init.general_correct && !init.I0.empty()) {
    r.branch = HeavisideBranch::correctness;
    const Round k0 = init.broadcast_round;
    Round worst = 0;
    for (NodeId i : witness_P) {
      const Round rise = trace.y_rise(i);
      if (rise == kNever || rise < k0 || rise - k0 >= kH_budget) {
        r.pass = false;
        if (!r.first_uncovered) r.first_uncovered = i;
        continue;
      }
      worst = std::max(worst, rise - k0);
    }
    if (r.pass) r.measured_kH = worst;
  } else if (!npc_input) {
    r.branch = HeavisideBranch::unforgeability;
    for (NodeId i : witness_P) {
      if (trace.y_rise(i) != kNever) {
        r.pass = false;
        r.first_uncovered = i;
        break;
      }
    }
  } else {
    r.branch = HeavisideBranch::not_applicable;
  }
  return r;
}

DiracResult check_dirac(const Trace& trace, Round kdelta_budget, std::span<const NodeId> witness_P) {
  require_correct_witness(trace, witness_P);
  DiracResult r;
  Round first = kNever;
  Round last = 0;
  for (NodeId i : witness_P) {
    const Round rise = trace.y_rise(i);
    if (rise == kNever) {
      if (!r.first_uncovered) r.first_uncovered = i;
      continue;
    }
    ++r.triggered;
    first = std::min(first, rise);
    last = std::max(last, rise);
  }
  if (r.triggered == 0) return r;
  r.k1_first_trigger = first;
  r.km_last_trigger = last;
  r.measured_kdelta = last - first + 1;
  r.pass = r.triggered == witness_P.size() && last < first + kdelta_budget;
  if (r.triggered == witness_P.size()) r.first_uncovered.reset();
  return r;
}

PropertyReport summarize(const Trace& trace) {
  const auto& meta = trace.meta;
  const NodeSet& P = meta.partition.P;
  PropertyReport rep;
  rep.kH_budget = meta.kH_budget;
  rep.kdelta_budget = meta.kdelta_budget;
  rep.witness_size = P.size();
  rep.poor_fraction =
      trace.n() == 0 ? 0.0 : static_cast<double>(trace.n() - P.size()) / static_cast<double>(trace.n());

  const HeavisideResult h = check_heaviside(trace, meta.kH_budget, P);
  const DiracResult dr = check_dirac(trace, meta.kdelta_budget, P);
  rep.heaviside_branch = h.branch;
  rep.heaviside_pass = h.pass;
  rep.measured_kH = h.measured_kH;
  rep.dirac_pass = dr.pass;
  rep.k1_first_trigger = dr.k1_first_trigger;
  rep.km_last_trigger = dr.km_last_trigger;
  rep.measured_kdelta = dr.measured_kdelta;
  rep.triggered = dr.triggered;
  rep.unforgeability_pass = check_unforgeability(trace, P);
  rep.first_uncovered = !h.pass ? h.first_uncovered : dr.first_uncovered;
  if (!dr.pass && dr.first_uncovered) rep.first_uncovered = dr.first_uncovered;
  rep.growth_violations = growth_check(trace, static_cast<double>(trace.n() - P.size()));
  return rep;
}

}  // namespace relaycast

#ifndef RELAYCAST_SWEEP_HPP
#define RELAYCAST_SWEEP_HPP

#include <string>
#include <vector>

#include "relaycast/runner.hpp"

namespace relaycast {

struct SweepAxis {
  std::string path;  // dotted config path, e.g. "protocol.beta"
  std::vector<json> values;
};

struct SweepSpec {
  json base;  // run config template
  std::vector<SweepAxis> axes;
  std::size_t seeds = 1;
  std::size_t cap = 10000;  // maximum number of runs
};

struct SweepRow {
  std::size_t point_id = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::vector<json> values;  // one per axis
  PropertyReport report;
  bool passed = false;
  std::string error;  // set when the run was rejected; the row then counts as failed
};

/// Seed of replicate r at grid point p: base_seed ^ mix64(p * seeds + r).
std::uint64_t sweep_seed(std::uint64_t base_seed, std::size_t point_id, std::size_t seeds,
                         std::size_t replicate);

/// Parses {"base": {...}, "axes": [{"path": ..., "values": [...]}], "seeds": R, "cap": C}.
SweepSpec parse_sweep_spec(const json& doc);

/// Cartesian product of the axes (last axis fastest) times `seeds`
/// replicates. Runs in parallel; rows come back in canonical order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, RunCache* cache = nullptr);

/// point_id,seed,<axis paths...>,heaviside,dirac,unforgeability,poor_fraction,measured_kH,measured_kdelta,passed,error
std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace relaycast

#endif  // RELAYCAST_SWEEP_HPP

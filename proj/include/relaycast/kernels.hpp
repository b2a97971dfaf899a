#ifndef RELAYCAST_KERNELS_HPP
#define RELAYCAST_KERNELS_HPP

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path; both produce bit-identical output for the same input because
// each output element is written by exactly one iteration with a fixed
// internal summation order.

#include <cstdint>
#include <span>

#include "relaycast/graph.hpp"

namespace relaycast {

enum class Backend { serial, openmp };

/// y = A x for the adjacency matrix of g.
void adjacency_matvec(const Graph& g, std::span<const double> x, std::span<double> y,
                      Backend backend = Backend::openmp);

/// Per-node count of neighbors whose bit is set: out[i] = sum_{j in N(i)} bits[j].
void neighbor_counts(const Graph& g, std::span<const std::uint8_t> bits,
                     std::span<std::uint32_t> out, Backend backend = Backend::openmp);

/// Worker count for parallel regions: RELAYCAST_WORKERS if set, else the
/// OpenMP default.
int worker_count();

}  // namespace relaycast

#endif  // RELAYCAST_KERNELS_HPP

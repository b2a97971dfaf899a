#include "relaycast/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace relaycast {

int worker_count() {
  if (const char* env = std::getenv("RELAYCAST_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return omp_get_max_threads();
}

void adjacency_matvec(const Graph& g, std::span<const double> x, std::span<double> y,
                      Backend backend) {
  const std::size_t d = g.d();
  const auto adj = g.flat_adjacency();
  const auto n = static_cast<long>(g.n());
  if (backend == Backend::serial) {
    for (long i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += x[adj[static_cast<std::size_t>(i) * d + k]];
      y[static_cast<std::size_t>(i)] = acc;
    }
    return;
  }
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) acc += x[adj[static_cast<std::size_t>(i) * d + k]];
    y[static_cast<std::size_t>(i)] = acc;
  }
}

void neighbor_counts(const Graph& g, std::span<const std::uint8_t> bits,
                     std::span<std::uint32_t> out, Backend backend) {
  const std::size_t d = g.d();
  const auto adj = g.flat_adjacency();
  const auto n = static_cast<long>(g.n());
  if (backend == Backend::serial) {
    for (long i = 0; i < n; ++i) {
      std::uint32_t acc = 0;
      for (std::size_t k = 0; k < d; ++k) acc += bits[adj[static_cast<std::size_t>(i) * d + k]];
      out[static_cast<std::size_t>(i)] = acc;
    }
    return;
  }
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (long i = 0; i < n; ++i) {
    std::uint32_t acc = 0;
    for (std::size_t k = 0; k < d; ++k) acc += bits[adj[static_cast<std::size_t>(i) * d + k]];
    out[static_cast<std::size_t>(i)] = acc;
  }
}

}  // namespace relaycast

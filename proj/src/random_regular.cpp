#include <unordered_set>

#include "relaycast/errors.hpp"
#include "relaycast/graph.hpp"
#include "relaycast/rng.hpp"

namespace relaycast {

namespace {

constexpr int kRestartBudget = 2000;

std::uint64_t edge_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// One attempt of incremental pairing (Steger-Wormald): draw two unpaired
// points uniformly, accept the pair unless it forms a loop or a multi-edge.
// Returns false when the remaining points admit no valid pair.
bool try_pairing(std::size_t n, std::size_t d, Rng& rng, std::vector<std::vector<NodeId>>& adj) {
  std::vector<NodeId> points;
  points.reserve(n * d);
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t k = 0; k < d; ++k) points.push_back(v);
  }
  std::unordered_set<std::uint64_t> edges;
  edges.reserve(n * d);
  for (auto& row : adj) row.clear();

  int misses = 0;
  while (!points.empty()) {
    const std::size_t a = rng.below(points.size());
    const std::size_t b = rng.below(points.size());
    const NodeId u = points[a];
    const NodeId v = points[b];
    if (a == b || u == v || edges.count(edge_key(u, v))) {
      if (++misses < 64) continue;
      // Exhaustive check whether any valid pair is left.
      bool any = false;
      for (std::size_t x = 0; x < points.size() && !any; ++x) {
        for (std::size_t y = x + 1; y < points.size(); ++y) {
          if (points[x] != points[y] && !edges.count(edge_key(points[x], points[y]))) {
            any = true;
            break;
          }
        }
      }
      if (!any) return false;
      misses = 0;
      continue;
    }
    misses = 0;
    edges.insert(edge_key(u, v));
    adj[u].push_back(v);
    adj[v].push_back(u);
    // Remove the higher index first so the lower one stays valid.
    const std::size_t hi = std::max(a, b);
    const std::size_t lo = std::min(a, b);
    points[hi] = points.back();
    points.pop_back();
    points[lo] = points.back();
    points.pop_back();
  }
  return true;
}

std::vector<std::vector<NodeId>> complement(const std::vector<std::vector<NodeId>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<NodeId>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> hit(n, 0);
    hit[i] = 1;
    for (NodeId j : adj[i]) hit[j] = 1;
    for (NodeId j = 0; j < n; ++j) {
      if (!hit[j]) out[i].push_back(j);
    }
  }
  return out;
}

}  // namespace

Graph build_random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (d < 3) throw ValidationError("random regular: d must be at least 3");
  if (d >= n) throw ValidationError("random regular: d must be less than n");
  if ((n * d) % 2 != 0) throw ValidationError("random regular: n*d must be even");
  if (n > (1u << 24)) throw ValidationError("random regular: n too large");

  // Dense graphs are drawn as the complement of a sparse one; complementation
  // is a bijection on labelled regular graphs, so uniformity is preserved.
  const bool dense = d > (n - 1) / 2;
  const std::size_t sparse_d = dense ? n - 1 - d : d;

  Rng rng(derive_seed(seed, Stream::graph));
  std::vector<std::vector<NodeId>> adj(n);
  for (int attempt = 0; attempt < kRestartBudget; ++attempt) {
    if (sparse_d == 0) {
      for (auto& row : adj) row.clear();
    } else if (!try_pairing(n, sparse_d, rng, adj)) {
      continue;
    }
    std::vector<std::vector<NodeId>> candidate = dense ? complement(adj) : adj;
    std::vector<NodeId> flat;
    flat.reserve(n * d);
    for (const auto& row : candidate) flat.insert(flat.end(), row.begin(), row.end());
    if (!is_connected(n, flat, d)) continue;

    GraphOrigin origin;
    origin.kind = GraphOrigin::Kind::random;
    origin.n = n;
    origin.d = d;
    origin.seed = seed;
    return Graph::from_adjacency(std::move(candidate), origin);
  }
  throw ConstructionError("random regular: rejection budget exhausted for n=" + std::to_string(n) +
                          ", d=" + std::to_string(d));
}

}  // namespace relaycast

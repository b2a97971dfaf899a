#ifndef RELAYCAST_GRAPH_HPP
#define RELAYCAST_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaycast/node_set.hpp"

namespace relaycast {

/// How a graph came to be. Echoed into every report.
struct GraphOrigin {
  enum class Kind { lps, random, file, named };

  Kind kind = Kind::named;
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  std::uint64_t seed = 0;
  std::string label;  // file path or a name such as "petersen"

  std::string describe() const;
};

/// Immutable, connected, simple d-regular graph.
///
/// Adjacency is stored flat (node i owns neighbors [i*d, (i+1)*d)), sorted,
/// and excludes i itself. Queries that need the closed neighborhood add the
/// node at the call site.
class Graph {
 public:
  /// Validates regularity, symmetry, simplicity and connectivity.
  /// When `lambda` is empty the spectral bound is measured.
  static Graph from_adjacency(std::vector<std::vector<NodeId>> adjacency, GraphOrigin origin,
                              std::optional<double> lambda = std::nullopt);

  static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                          GraphOrigin origin, std::optional<double> lambda = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  std::size_t edge_count() const { return n_ * d_ / 2; }
  double lambda() const { return lambda_; }
  bool bipartite() const { return bipartite_; }
  const GraphOrigin& origin() const { return origin_; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {adjacency_.data() + static_cast<std::size_t>(i) * d_, d_};
  }
  std::span<const NodeId> flat_adjacency() const { return adjacency_; }

  bool adjacent(NodeId i, NodeId j) const;
  void check_node(NodeId i) const;

  /// Two-coloring of a bipartite graph (0/1 per node); empty otherwise.
  const std::vector<std::uint8_t>& coloring() const { return coloring_; }

 private:
  Graph() = default;

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<NodeId> adjacency_;
  double lambda_ = 0.0;
  bool bipartite_ = false;
  std::vector<std::uint8_t> coloring_;
  GraphOrigin origin_;
};

// Small graphs with analytically known spectra.
Graph make_complete(std::size_t n);
Graph make_cycle(std::size_t n);
Graph make_petersen();
Graph make_complete_bipartite(std::size_t half);

bool is_prime(std::uint64_t x);

/// Legendre symbol (a/q) for an odd prime q and a not divisible by q.
/// Returns +1 when a is a quadratic residue mod q, -1 otherwise.
int legendre_symbol(std::int64_t a, std::uint64_t q);

/// Lubotzky-Phillips-Sarnak Ramanujan graph X^{p,q}: a (p+1)-regular Cayley
/// graph on PSL(2,q) when (p/q) = +1, or on PGL(2,q) (bipartite) when
/// (p/q) = -1. Requires p = q = 1 mod 4, p != q, q > 2 sqrt(p).
Graph build_lps_graph(std::uint64_t p, std::uint64_t q);

/// Uniform simple connected d-regular graph from the pairing model with
/// rejection. Deterministic for a fixed seed.
Graph build_random_regular(std::size_t n, std::size_t d, std::uint64_t seed);

inline constexpr double kDefaultSpectralTol = 1e-6;

/// Largest |eigenvalue| of the adjacency matrix orthogonal to the all-ones
/// vector (and, for bipartite graphs, to the bipartition sign vector).
double spectral_bound(const Graph& g, double tol = kDefaultSpectralTol);

/// Number of undirected edges with both endpoints in S.
std::size_t internal_edges(const Graph& g, std::span<const NodeId> S);

/// BFS ball of radius c around i, including i.
NodeSet neighborhood(const Graph& g, NodeId i, std::size_t c);

/// Nodes of the radius-c ball around i ordered by (distance, id).
std::vector<NodeId> bfs_order(const Graph& g, NodeId i, std::size_t c);

/// Nodes ordered by (distance to `sources`, id); sources come first.
std::vector<NodeId> bfs_order_from(const Graph& g, std::span<const NodeId> sources);

bool is_connected(std::size_t n, std::span<const NodeId> flat_adjacency, std::size_t d);

}  // namespace relaycast

#endif  // RELAYCAST_GRAPH_HPP

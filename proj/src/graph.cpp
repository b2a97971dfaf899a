#include "relaycast/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "relaycast/errors.hpp"

namespace relaycast {

std::string GraphOrigin::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::lps:
      os << "lps(" << p << "," << q << ")";
      break;
    case Kind::random:
      os << "random(" << n << "," << d << "," << seed << ")";
      break;
    case Kind::file:
      os << "file(" << label << ")";
      break;
    case Kind::named:
      os << label;
      break;
  }
  return os.str();
}

namespace {

std::vector<std::uint8_t> two_coloring(std::size_t n, std::span<const NodeId> adj, std::size_t d) {
  std::vector<std::uint8_t> color(n, 2);
  std::queue<NodeId> frontier;
  color[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (std::size_t k = 0; k < d; ++k) {
      const NodeId v = adj[u * d + k];
      if (color[v] == 2) {
        color[v] = static_cast<std::uint8_t>(1 - color[u]);
        frontier.push(v);
      } else if (color[v] == color[u]) {
        return {};
      }
    }
  }
  return color;
}

}  // namespace

bool is_connected(std::size_t n, std::span<const NodeId> adj, std::size_t d) {
  if (n == 0) return true;
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (std::size_t k = 0; k < d; ++k) {
      const NodeId v = adj[u * d + k];
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

Graph Graph::from_adjacency(std::vector<std::vector<NodeId>> adjacency, GraphOrigin origin,
                            std::optional<double> lambda) {
  const std::size_t n = adjacency.size();
  if (n < 2) throw ValidationError("graph needs at least two nodes");
  const std::size_t d = adjacency[0].size();
  if (d == 0) throw ValidationError("graph degree must be positive");

  Graph g;
  g.n_ = n;
  g.d_ = d;
  g.adjacency_.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = adjacency[i];
    std::sort(row.begin(), row.end());
    if (row.size() != d) {
      throw ValidationError("node " + std::to_string(i) + " has degree " +
                            std::to_string(row.size()) + ", expected " + std::to_string(d));
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (row[k] >= n) throw ValidationError("neighbor id out of range at node " + std::to_string(i));
      if (row[k] == i) throw ValidationError("self-loop at node " + std::to_string(i));
      if (k > 0 && row[k] == row[k - 1]) {
        throw ValidationError("multi-edge at node " + std::to_string(i));
      }
    }
    g.adjacency_.insert(g.adjacency_.end(), row.begin(), row.end());
  }
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j : g.neighbors(i)) {
      if (!g.adjacent(j, i)) {
        throw ValidationError("asymmetric adjacency between " + std::to_string(i) + " and " +
                              std::to_string(j));
      }
    }
  }
  if (!is_connected(n, g.adjacency_, d)) throw ValidationError("graph is not connected");

  g.coloring_ = two_coloring(n, g.adjacency_, d);
  g.bipartite_ = !g.coloring_.empty();
  g.origin_ = std::move(origin);
  g.lambda_ = lambda ? *lambda : spectral_bound(g);
  if (!(g.lambda_ >= 0.0) || g.lambda_ > static_cast<double>(d) * (1.0 + 1e-9)) {
    throw ValidationError("lambda outside [0, d]");
  }
  return g;
}

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                        GraphOrigin origin, std::optional<double> lambda) {
  std::vector<std::vector<NodeId>> adj(n);
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw ValidationError("edge endpoint out of range");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return from_adjacency(std::move(adj), std::move(origin), lambda);
}

bool Graph::adjacent(NodeId i, NodeId j) const {
  const auto row = neighbors(i);
  return std::binary_search(row.begin(), row.end(), j);
}

void Graph::check_node(NodeId i) const {
  if (i >= n_) {
    throw ValidationError("node id " + std::to_string(i) + " out of range (n=" + std::to_string(n_) +
                          ")");
  }
}

Graph make_complete(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  GraphOrigin o;
  o.label = "complete(" + std::to_string(n) + ")";
  return Graph::from_edges(n, edges, o);
}

Graph make_cycle(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, static_cast<NodeId>((i + 1) % n));
  GraphOrigin o;
  o.label = "cycle(" + std::to_string(n) + ")";
  return Graph::from_edges(n, edges, o);
}

Graph make_petersen() {
  // Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);
    edges.emplace_back(i, 5 + i);
  }
  GraphOrigin o;
  o.label = "petersen";
  return Graph::from_edges(10, edges, o);
}

Graph make_complete_bipartite(std::size_t half) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < half; ++i) {
    for (NodeId j = 0; j < half; ++j) edges.emplace_back(i, static_cast<NodeId>(half + j));
  }
  GraphOrigin o;
  o.label = "complete_bipartite(" + std::to_string(half) + ")";
  return Graph::from_edges(2 * half, edges, o);
}

std::size_t internal_edges(const Graph& g, std::span<const NodeId> S) {
  NodeMask in(g.n(), 0);
  for (NodeId i : S) {
    g.check_node(i);
    in[i] = 1;
  }
  std::size_t twice = 0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (!in[i]) continue;
    for (NodeId j : g.neighbors(static_cast<NodeId>(i))) twice += in[j];
  }
  return twice / 2;
}

std::vector<NodeId> bfs_order_from(const Graph& g, std::span<const NodeId> sources) {
  std::vector<std::uint8_t> seen(g.n(), 0);
  std::vector<NodeId> order;
  std::vector<NodeId> layer;
  for (NodeId s : sources) {
    g.check_node(s);
    if (!seen[s]) {
      seen[s] = 1;
      layer.push_back(s);
    }
  }
  std::sort(layer.begin(), layer.end());
  while (!layer.empty()) {
    order.insert(order.end(), layer.begin(), layer.end());
    std::vector<NodeId> next;
    for (NodeId u : layer) {
      for (NodeId v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          next.push_back(v);
        }
      }
    }
    std::sort(next.begin(), next.end());
    layer = std::move(next);
  }
  return order;
}

std::vector<NodeId> bfs_order(const Graph& g, NodeId i, std::size_t c) {
  g.check_node(i);
  std::vector<std::uint8_t> seen(g.n(), 0);
  std::vector<NodeId> order{i};
  std::vector<NodeId> layer{i};
  seen[i] = 1;
  for (std::size_t r = 0; r < c && !layer.empty(); ++r) {
    std::vector<NodeId> next;
    for (NodeId u : layer) {
      for (NodeId v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          next.push_back(v);
        }
      }
    }
    std::sort(next.begin(), next.end());
    order.insert(order.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return order;
}

NodeSet neighborhood(const Graph& g, NodeId i, std::size_t c) {
  return make_node_set(bfs_order(g, i, c));
}

}  // namespace relaycast

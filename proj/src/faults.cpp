#include "relaycast/faults.hpp"

#include <algorithm>
#include <tuple>

#include "relaycast/errors.hpp"
#include "relaycast/params.hpp"
#include "relaycast/rng.hpp"

namespace relaycast {

std::size_t closure_threshold(const Graph& g, double beta0) {
  return ceil_count(beta0 * static_cast<double>(g.d()));
}

namespace {

// Incremental closure state shared by compute_Z and the greedy adversary.
class Closure {
 public:
  Closure(const Graph& g, std::size_t threshold)
      : g_(g), threshold_(threshold), in_(g.n(), 0), count_(g.n(), 0) {}

  // Adds `v` and everything it cascades into; returns the number of nodes added.
  std::size_t add(NodeId v, std::vector<std::pair<NodeId, bool>>* log = nullptr) {
    if (in_[v]) return 0;
    std::size_t added = 0;
    std::vector<NodeId> work{v};
    in_[v] = 1;
    if (log) log->emplace_back(v, true);
    while (!work.empty()) {
      const NodeId u = work.back();
      work.pop_back();
      ++added;
      for (NodeId w : g_.neighbors(u)) {
        ++count_[w];
        if (log) log->emplace_back(w, false);
        if (!in_[w] && count_[w] >= threshold_) {
          in_[w] = 1;
          if (log) log->emplace_back(w, true);
          work.push_back(w);
        }
      }
    }
    size_ += added;
    return added;
  }

  void rollback(const std::vector<std::pair<NodeId, bool>>& log) {
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
      if (it->second) {
        in_[it->first] = 0;
        --size_;
      } else {
        --count_[it->first];
      }
    }
  }

  bool contains(NodeId v) const { return in_[v] != 0; }
  std::uint32_t count(NodeId v) const { return count_[v]; }
  std::size_t size() const { return size_; }
  const NodeMask& mask() const { return in_; }

 private:
  const Graph& g_;
  std::size_t threshold_;
  NodeMask in_;
  std::vector<std::uint32_t> count_;
  std::size_t size_ = 0;
};

NodeSet validated_set(const Graph& g, std::span<const NodeId> ids) {
  for (NodeId i : ids) g.check_node(i);
  return make_node_set({ids.begin(), ids.end()});
}

NodeSet random_faults(const Graph& g, std::size_t f, Rng& rng) {
  std::vector<NodeId> ids(g.n());
  for (NodeId i = 0; i < g.n(); ++i) ids[i] = i;
  for (std::size_t k = 0; k < f; ++k) std::swap(ids[k], ids[k + rng.below(g.n() - k)]);
  ids.resize(f);
  return make_node_set(std::move(ids));
}

// Repeatedly adds the node maximizing |Z(T u {v})|. Ties (the common case
// before any cascade) go to the node that pushes some outside neighbor
// closest to the threshold, then to the larger total pressure, then to a
// seeded random rank.
NodeSet greedy_closure(const Graph& g, std::size_t f, double beta0, Rng& rng) {
  Closure z(g, closure_threshold(g, beta0));
  std::vector<std::uint64_t> rank(g.n());
  for (auto& r : rank) r = rng.next();
  NodeSet T;
  std::vector<std::pair<NodeId, bool>> log;

  for (std::size_t step = 0; step < f; ++step) {
    using Score = std::tuple<std::size_t, std::uint32_t, std::uint64_t, std::uint64_t>;
    Score best{0, 0, 0, 0};
    std::optional<NodeId> pick;
    for (NodeId v = 0; v < g.n(); ++v) {
      if (contains(T, v)) continue;
      Score score;
      if (z.contains(v)) {
        score = Score{z.size(), 0, 0, rank[v]};
      } else {
        log.clear();
        z.add(v, &log);
        std::uint32_t peak = 0;
        std::uint64_t pressure = 0;
        for (NodeId w : g.neighbors(v)) {
          if (!z.contains(w)) {
            peak = std::max(peak, z.count(w));
            pressure += z.count(w);
          }
        }
        score = Score{z.size(), peak, pressure, rank[v]};
        z.rollback(log);
      }
      if (!pick || score > best) {
        best = score;
        pick = v;
      }
    }
    z.add(*pick);
    T.insert(std::upper_bound(T.begin(), T.end(), *pick), *pick);
  }
  return T;
}

}  // namespace

NodeSet compute_Z(const Graph& g, std::span<const NodeId> T, double beta0) {
  const NodeSet seeds = validated_set(g, T);
  Closure z(g, closure_threshold(g, beta0));
  for (NodeId t : seeds) z.add(t);
  return from_mask(z.mask());
}

FaultPartition compute_P(const Graph& g, std::span<const NodeId> T, double beta0) {
  FaultPartition part;
  part.T = validated_set(g, T);
  part.Z = compute_Z(g, part.T, beta0);
  NodeSet all(g.n());
  for (NodeId i = 0; i < g.n(); ++i) all[i] = i;
  part.P = set_difference(all, part.Z);
  part.beta0 = beta0;
  if (part.T.empty()) {
    part.mu_achieved = 1.0;
    part.mu_undefined = true;
  } else {
    part.mu_achieved = static_cast<double>(part.Z.size()) / static_cast<double>(part.T.size());
  }
  return part;
}

std::string to_string(FaultStrategy s) {
  switch (s) {
    case FaultStrategy::random:
      return "random";
    case FaultStrategy::ball:
      return "ball";
    case FaultStrategy::greedy_closure:
      return "greedy-closure";
    case FaultStrategy::around_initiation:
      return "around-initiation";
  }
  return "?";
}

FaultStrategy parse_fault_strategy(const std::string& s) {
  if (s == "random") return FaultStrategy::random;
  if (s == "ball") return FaultStrategy::ball;
  if (s == "greedy-closure") return FaultStrategy::greedy_closure;
  if (s == "around-initiation") return FaultStrategy::around_initiation;
  throw ValidationError("unknown fault strategy '" + s + "'");
}

NodeSet place_faults(const Graph& g, FaultStrategy strategy, std::size_t f, std::uint64_t seed,
                     const PlacementOptions& options) {
  if (f > g.n()) {
    throw ValidationError("cannot place " + std::to_string(f) + " faults on " +
                          std::to_string(g.n()) + " nodes");
  }
  Rng rng(derive_seed(seed, Stream::faults));
  if (f == 0) return {};

  switch (strategy) {
    case FaultStrategy::random:
      return random_faults(g, f, rng);

    case FaultStrategy::ball: {
      const NodeId center = options.center ? *options.center : static_cast<NodeId>(rng.below(g.n()));
      g.check_node(center);
      const NodeId sources[] = {center};
      auto order = bfs_order_from(g, sources);
      order.resize(f);
      return make_node_set(std::move(order));
    }

    case FaultStrategy::greedy_closure:
      return greedy_closure(g, f, options.beta0, rng);

    case FaultStrategy::around_initiation: {
      NodeSet anchors = options.anchors;
      if (anchors.empty()) anchors.push_back(static_cast<NodeId>(rng.below(g.n())));
      anchors = validated_set(g, anchors);
      // Surround the initiation set first; fall back to its members.
      std::vector<NodeId> picked;
      for (NodeId v : bfs_order_from(g, anchors)) {
        if (picked.size() == f) break;
        if (!contains(anchors, v)) picked.push_back(v);
      }
      for (NodeId v : anchors) {
        if (picked.size() == f) break;
        picked.push_back(v);
      }
      return make_node_set(std::move(picked));
    }
  }
  throw ValidationError("unhandled fault strategy");
}

}  // namespace relaycast

#ifndef RELAYCAST_NODE_SET_HPP
#define RELAYCAST_NODE_SET_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace relaycast {

using NodeId = std::uint32_t;

/// Sorted, duplicate-free list of node ids.
using NodeSet = std::vector<NodeId>;

/// Dense membership mask over [0, n).
using NodeMask = std::vector<std::uint8_t>;

inline NodeSet make_node_set(std::vector<NodeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

inline bool contains(std::span<const NodeId> set, NodeId i) {
  return std::binary_search(set.begin(), set.end(), i);
}

inline NodeMask to_mask(std::span<const NodeId> set, std::size_t n) {
  NodeMask mask(n, 0);
  for (NodeId i : set) mask[i] = 1;
  return mask;
}

inline NodeSet from_mask(const NodeMask& mask) {
  NodeSet out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

inline NodeSet set_difference(std::span<const NodeId> a, std::span<const NodeId> b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline NodeSet set_intersection(std::span<const NodeId> a, std::span<const NodeId> b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(std::span<const NodeId> a, std::span<const NodeId> b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace relaycast

#endif  // RELAYCAST_NODE_SET_HPP

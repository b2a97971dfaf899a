#ifndef RELAYCAST_ENGINE_HPP
#define RELAYCAST_ENGINE_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "relaycast/faults.hpp"
#include "relaycast/graph.hpp"
#include "relaycast/kernels.hpp"
#include "relaycast/params.hpp"

namespace relaycast {

using Round = std::int64_t;
inline constexpr Round kNever = std::numeric_limits<Round>::max();

enum class ScriptKind { silent, blast, split_half, flicker, honest, custom_table };

std::string to_string(ScriptKind s);
ScriptKind parse_script_kind(const std::string& s);

/// What a faulty node j shows observer i about its state at round k.
///
/// Instead of materializing noise matrices, the observed bit is produced
/// directly; the noise entry is recoverable as observed minus true state.
///   silent      always 0
///   blast       always 1
///   split-half  1 to every other observer in j's sorted neighbor list
///               (positions 1, 3, 5, ...), 0 to the rest
///   flicker     (k + i) mod 2, so both the round and the observer flip it
///   honest      j's would-be correct state
///   custom-table explicit (j, i, k) -> bit entries; a missing entry is an error
struct AdversaryScript {
  ScriptKind kind = ScriptKind::silent;
  std::map<std::tuple<NodeId, NodeId, Round>, std::uint8_t> table;

  /// Empty when the custom table has no entry for (j, i, k). Rounds before 0
  /// always read as 0.
  std::optional<std::uint8_t> bit(const Graph& g, NodeId j, NodeId i, Round k,
                                  std::uint8_t honest) const;
};

/// Input of the General. When the General is correct every node of I0
/// receives a 1 at round `k0`; a faulty General chooses `bits` per node.
struct InitiationSpec {
  NodeSet I0;
  Round k0 = 0;               // delivery round
  Round broadcast_round = 0;  // round the General started (k0 minus any transport latency)
  bool general_correct = true;
  std::optional<NodeId> general;
  std::vector<std::uint8_t> bits;  // parallel to I0; empty means all ones when correct, all zeros otherwise

  std::uint8_t bit_at(std::size_t index) const;
  static InitiationSpec none();
};

enum class TriggerMode { pure, complementary };
std::string to_string(TriggerMode m);

/// Per-node member lists S_i stored flat.
struct LocalSelection {
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> members;

  std::size_t size() const { return offsets.size() - 1; }
  std::span<const NodeId> of(NodeId i) const {
    return {members.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  void append(std::span<const NodeId> s) {
    members.insert(members.end(), s.begin(), s.end());
    offsets.push_back(members.size());
  }
};

/// Run description and provenance carried alongside the signals.
struct TraceMeta {
  std::string graph_origin;
  std::size_t d = 0;
  double lambda = 0.0;
  SystemParams system;
  ProtocolParams protocol;
  FaultPartition partition;
  InitiationSpec initiation;
  std::string adversary;
  std::uint64_t seed = 0;
  TriggerMode mode = TriggerMode::pure;
  std::size_t excitation_threshold = 0;
  std::size_t trigger_threshold = 0;
  std::size_t latency = 0;
  Round kH_budget = 0;
  Round kdelta_budget = 0;
};

/// Signals u, x, y for every node and round 0..k_max.
///
/// x and y latch, and u is a single pulse, so each is stored as the round of
/// its rising edge (kNever when it never rises).
class Trace {
 public:
  Trace() = default;
  Trace(std::size_t n, Round k_max);

  /// Builds from dense per-round rows ([k][i]); rejects rows that are not
  /// latching (x, y) or not a single pulse (u).
  static Trace from_dense(const std::vector<std::vector<std::uint8_t>>& u,
                          const std::vector<std::vector<std::uint8_t>>& x,
                          const std::vector<std::vector<std::uint8_t>>& y, NodeMask correct);

  std::size_t n() const { return x_rise_.size(); }
  Round k_max() const { return k_max_; }

  std::uint8_t u(Round k, NodeId i) const { return u_round_[i] == k; }
  std::uint8_t x(Round k, NodeId i) const { return x_rise_[i] <= k; }
  std::uint8_t y(Round k, NodeId i) const { return y_rise_[i] <= k; }
  bool correct(NodeId i) const { return correct_[i] != 0; }

  Round u_round(NodeId i) const { return u_round_[i]; }
  Round x_rise(NodeId i) const { return x_rise_[i]; }
  Round y_rise(NodeId i) const { return y_rise_[i]; }

  void set_u_round(NodeId i, Round k) { u_round_[i] = k; }
  void set_x_rise(NodeId i, Round k) { x_rise_[i] = k; }
  void set_y_rise(NodeId i, Round k) { y_rise_[i] = k; }
  void set_correct(NodeMask correct) { correct_ = std::move(correct); }
  const NodeMask& correct_mask() const { return correct_; }

  bool operator==(const Trace& other) const {
    return k_max_ == other.k_max_ && u_round_ == other.u_round_ && x_rise_ == other.x_rise_ &&
           y_rise_ == other.y_rise_ && correct_ == other.correct_;
  }

  TraceMeta meta;

 private:
  Round k_max_ = 0;
  std::vector<Round> u_round_;
  std::vector<Round> x_rise_;
  std::vector<Round> y_rise_;
  NodeMask correct_;
};

struct EngineConfig {
  const Graph* graph = nullptr;
  NodeSet faults;
  AdversaryScript script;
  InitiationSpec initiation;
  std::size_t excitation_threshold = 1;
  TriggerMode mode = TriggerMode::pure;
  std::size_t trigger_threshold = 1;
  // Complementary mode: S_i per node, readback and delivery latency.
  const LocalSelection* selection = nullptr;
  std::size_t latency = 0;
  Round k_max = 0;
  Backend backend = Backend::openmp;
};

/// Round-by-round executor. Round k reads only round k-1 state.
class Engine {
 public:
  explicit Engine(const EngineConfig& config);

  /// Computes round `round()` and advances.
  void step();
  Round round() const { return next_round_; }
  bool done() const { return next_round_ > config_.k_max; }

  std::span<const std::uint8_t> x() const { return x_; }
  std::span<const std::uint8_t> y() const { return y_; }

  /// Runs to k_max and hands over the trace (metadata left default).
  Trace finish();

 private:
  std::uint8_t observed(NodeId j, NodeId i, Round k) const;
  void readback_counts(Round r, std::vector<std::uint32_t>& out) const;

  EngineConfig config_;
  const Graph& g_;
  NodeMask faulty_;
  std::vector<NodeId> fault_list_;
  std::vector<std::uint8_t> x_, y_;
  std::vector<std::uint8_t> honest_bits_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> trigger_counts_;
  Trace trace_;
  Round next_round_ = 0;
  bool settled_ = false;

  // Complementary mode: inverse membership and per-round counts of excited
  // correct members of each S_i.
  std::vector<std::size_t> inverse_offsets_;
  std::vector<NodeId> inverse_members_;
  std::vector<std::vector<NodeId>> faulty_members_;
  std::vector<std::vector<std::uint32_t>> correct_member_history_;
  std::vector<std::uint32_t> correct_member_counts_;
};

Trace run(const EngineConfig& config);

/// Rounds k (from the first round any correct node's y fires) where the
/// number of excited npc nodes fails to grow by one before saturation.
/// Saturation is min(|P|, n - poor_allowance).
std::vector<Round> growth_check(const Trace& trace, double poor_allowance);

}  // namespace relaycast

#endif  // RELAYCAST_ENGINE_HPP

#ifndef RELAYCAST_RUNNER_HPP
#define RELAYCAST_RUNNER_HPP

#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "relaycast/config.hpp"

namespace relaycast {

/// Thread-safe build-once map. The first caller for a key builds the value
/// outside the lock; concurrent callers for the same key wait for it.
template <class V>
class Memo {
 public:
  std::shared_ptr<const V> get(const std::string& key, const std::function<V()>& build) {
    std::promise<std::shared_ptr<const V>> promise;
    std::shared_future<std::shared_ptr<const V>> future;
    bool owner = false;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        future = promise.get_future().share();
        entries_.emplace(key, future);
        owner = true;
      } else {
        future = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(std::make_shared<const V>(build()));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_future<std::shared_ptr<const V>>> entries_;
};

/// Graphs and fault placements shared across runs (sweeps, test matrices).
struct RunCache {
  Memo<Graph> graphs;
  Memo<NodeSet> placements;
};

struct RunResult {
  RunConfig resolved;  // every default filled in; re-running it reproduces the trace
  std::shared_ptr<const Graph> graph;
  Trace trace;
  PropertyReport report;
  bool lemma2_applies = false;
  bool lemma2_empirical = true;  // |P| > n - mu_bound |T| when lemma2_holds accepts the configuration
  json report_json;

  /// All three properties hold and no configured check failed.
  bool passed() const;
};

/// Builds (or fetches) the graph a config describes.
std::shared_ptr<const Graph> resolve_graph(const RunConfig& config, RunCache* cache = nullptr);

/// Graph, anchor, fault placement, partition, General, initiation, engine,
/// property checks. Deterministic in the config.
RunResult execute(const RunConfig& config, RunCache* cache = nullptr);

/// Recomputes the property report from a trace CSV and the run report that
/// accompanied it.
PropertyReport check_artifacts(Trace trace, const json& run_report);

/// Violations of |e(S) - theta^2 d n / 2| <= (lambda / 2) theta (1 - theta) n
/// over `samples` uniformly drawn S (size uniform in [1, n-1]).
struct Lemma1Check {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double lambda = 0.0;
  double worst_ratio = 0.0;  // max |deviation| / bound
};
Lemma1Check check_lemma1(const Graph& g, std::size_t samples, std::uint64_t seed, double lambda);

}  // namespace relaycast

#endif  // RELAYCAST_RUNNER_HPP

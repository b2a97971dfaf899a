#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "relaycast/errors.hpp"
#include "relaycast/faults.hpp"
#include "relaycast/params.hpp"
#include "relaycast/rng.hpp"

using namespace relaycast;

namespace {

// Every labeled connected regular graph on n nodes (n <= 6).
std::vector<Graph> all_regular_graphs(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) pairs.push_back({a, b});
  }
  std::vector<Graph> out;
  for (std::uint32_t mask = 1; mask < (1u << pairs.size()); ++mask) {
    std::vector<std::size_t> deg(n, 0);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (mask >> e & 1u) {
        edges.push_back(pairs[e]);
        ++deg[pairs[e].first];
        ++deg[pairs[e].second];
      }
    }
    if (std::count(deg.begin(), deg.end(), deg[0]) != static_cast<long>(n)) continue;
    try {
      out.push_back(Graph::from_edges(n, edges, GraphOrigin{}, 0.0));
    } catch (const ValidationError&) {
      // disconnected
    }
  }
  return out;
}

NodeSet subset(std::uint32_t mask, std::size_t n) {
  NodeSet s;
  for (NodeId i = 0; i < n; ++i) {
    if (mask >> i & 1u) s.push_back(i);
  }
  return s;
}

Graph oracle_graph(std::mt19937_64& gen, std::size_t max_n) {
  for (;;) {
    const std::size_t n = 6 + gen() % (max_n - 5);
    const std::size_t d = 2 + gen() % std::min<std::size_t>(n - 2, 10);
    if (auto g = oracle::random_regular(n, d, gen)) return *g;
  }
}

}  // namespace

TEST_SUITE("faults") {
  TEST_CASE("closure examples on K4") {
    const Graph k4 = make_complete(4);
    CHECK(compute_Z(k4, NodeSet{}, 0.4).empty());
    CHECK(compute_Z(k4, NodeSet{0}, 0.4) == NodeSet{0});
    CHECK(compute_Z(k4, NodeSet{0}, 0.3) == NodeSet{0, 1, 2, 3});

    const FaultPartition a = compute_P(k4, NodeSet{0}, 0.4);
    CHECK(a.P == NodeSet{1, 2, 3});
    CHECK(a.mu_achieved == doctest::Approx(1.0));
    CHECK_FALSE(a.mu_undefined);

    const FaultPartition b = compute_P(k4, NodeSet{0}, 0.3);
    CHECK(b.P.empty());
    CHECK(b.mu_achieved == doctest::Approx(4.0));

    const FaultPartition e = compute_P(k4, NodeSet{}, 0.3);
    CHECK(e.P == NodeSet{0, 1, 2, 3});
    CHECK(e.mu_undefined);
  }

  TEST_CASE("closure threshold counts neighbors only") {
    // K4 with beta0 = 2/3 needs 2 of 3 neighbors; T = {0, 1} pulls in everyone.
    const Graph k4 = make_complete(4);
    CHECK(closure_threshold(k4, 2.0 / 3.0) == 2);
    CHECK(compute_Z(k4, NodeSet{0, 1}, 2.0 / 3.0) == NodeSet{0, 1, 2, 3});
    CHECK(compute_Z(k4, NodeSet{0}, 2.0 / 3.0) == NodeSet{0});
  }

  TEST_CASE("closure matches exhaustive enumeration on every regular graph up to 6 nodes") {
    std::size_t graphs = 0, cases = 0;
    for (std::size_t n = 3; n <= 6; ++n) {
      for (const Graph& g : all_regular_graphs(n)) {
        ++graphs;
        for (double beta0 : {0.2, 0.4, 0.6}) {
          for (std::uint32_t m = 0; m < (1u << n); ++m) {
            const NodeSet T = subset(m, n);
            const NodeSet z = compute_Z(g, T, beta0);
            REQUIRE(z == oracle::minimal_closed_superset(g, T, beta0));
            REQUIRE(z == oracle::closure(g, T, beta0));
            ++cases;
          }
        }
      }
    }
    CHECK(graphs > 100);
    MESSAGE(graphs << " graphs, " << cases << " fault sets");
  }

  TEST_CASE("closure matches the rescan oracle on random graphs") {
    std::mt19937_64 gen(4242);
    for (int trial = 0; trial < 100; ++trial) {
      const Graph g = oracle_graph(gen, 64);
      for (double beta0 : {0.2, 0.4, 0.6}) {
        const std::size_t f = gen() % (g.n() / 3 + 1);
        std::vector<NodeId> ids(g.n());
        for (NodeId i = 0; i < g.n(); ++i) ids[i] = i;
        std::shuffle(ids.begin(), ids.end(), gen);
        ids.resize(f);
        const NodeSet T = make_node_set(ids);
        const NodeSet z = compute_Z(g, T, beta0);
        REQUIRE(z == oracle::closure(g, T, beta0));
        if (g.n() <= 16) REQUIRE(z == oracle::minimal_closed_superset(g, T, beta0));
      }
    }
  }

  TEST_CASE("partition invariants and minimality") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 50; ++trial) {
      const Graph g = oracle_graph(gen, 40);
      const double beta0 = 0.2 + 0.5 * static_cast<double>(gen() % 100) / 100.0;
      const NodeSet T = place_faults(g, FaultStrategy::random, g.n() / 5, gen());
      const FaultPartition part = compute_P(g, T, beta0);
      CHECK(is_subset(part.T, part.Z));
      CHECK(set_intersection(part.P, part.Z).empty());
      CHECK(part.P.size() + part.Z.size() == g.n());
      const std::size_t thr = closure_threshold(g, beta0);
      for (NodeId i : part.P) {
        std::size_t c = 0;
        for (NodeId j : g.neighbors(i)) c += contains(part.Z, j);
        CHECK(c < thr);
      }
      // Dropping any added node leaves a set that is not closed under the rule
      // or does not contain T: the added node itself has enough Z-neighbors.
      for (NodeId v : set_difference(part.Z, part.T)) {
        std::size_t c = 0;
        for (NodeId j : g.neighbors(v)) c += contains(part.Z, j) && j != v;
        CHECK(c >= thr);
      }
    }
  }

  TEST_CASE("closure is monotone in T and antitone in beta0") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 100; ++trial) {
      const Graph g = oracle_graph(gen, 48);
      const NodeSet small = place_faults(g, FaultStrategy::random, g.n() / 8, gen());
      NodeSet big = small;
      for (int extra = 0; extra < 3; ++extra) big.push_back(static_cast<NodeId>(gen() % g.n()));
      big = make_node_set(big);
      const double b = 0.1 + 0.8 * static_cast<double>(gen() % 100) / 100.0;
      const double b2 = std::min(0.95, b + 0.1);
      CHECK(is_subset(compute_Z(g, small, b), compute_Z(g, big, b)));
      CHECK(is_subset(compute_Z(g, small, b2), compute_Z(g, small, b)));
    }
  }

  TEST_CASE("placement strategies") {
    const Graph c6 = make_cycle(6);
    CHECK(place_faults(c6, FaultStrategy::random, 0, 1).empty());
    PlacementOptions at0;
    at0.center = 0;
    CHECK(place_faults(c6, FaultStrategy::ball, 3, 1, at0) == NodeSet{0, 1, 5});
    CHECK_THROWS_AS(place_faults(c6, FaultStrategy::random, 7, 1), ValidationError);
    CHECK(place_faults(c6, FaultStrategy::random, 6, 1).size() == 6);

    PlacementOptions around;
    around.anchors = {2};
    const NodeSet t = place_faults(c6, FaultStrategy::around_initiation, 2, 5, around);
    CHECK(t == NodeSet{1, 3});
    CHECK(place_faults(c6, FaultStrategy::around_initiation, 6, 5, around).size() == 6);

    CHECK(parse_fault_strategy("greedy-closure") == FaultStrategy::greedy_closure);
    CHECK(to_string(FaultStrategy::around_initiation) == "around-initiation");
    CHECK_THROWS_AS(parse_fault_strategy("worst"), ValidationError);
  }

  TEST_CASE("placement is deterministic and sized") {
    const Graph g = build_random_regular(200, 8, 3);
    for (auto s : {FaultStrategy::random, FaultStrategy::ball, FaultStrategy::greedy_closure,
                   FaultStrategy::around_initiation}) {
      const NodeSet a = place_faults(g, s, 12, 77);
      CHECK(a.size() == 12);
      CHECK(a == place_faults(g, s, 12, 77));
    }
  }

  TEST_CASE("greedy closure captures more than random placement") {
    const Graph g = build_random_regular(1024, 32, 1);
    PlacementOptions opts;
    opts.beta0 = 0.25;
    int wins = 0;
    int strict = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const std::size_t zg = compute_Z(g, place_faults(g, FaultStrategy::greedy_closure, 16, seed, opts), 0.25).size();
      const std::size_t zr = compute_Z(g, place_faults(g, FaultStrategy::random, 16, seed, opts), 0.25).size();
      wins += zg >= zr;
      strict += zg > zr;
    }
    CHECK(wins >= 95);
    CHECK(strict >= 95);
    MESSAGE("greedy >= random in " << wins << "/100, strictly in " << strict << "/100");
  }

  TEST_CASE("npc set stays large on feasible configurations") {
    const Graph g = build_random_regular(1000, 250, 5);
    const double alpha = 0.005, beta0 = 0.15;
    REQUIRE(lemma2_holds(alpha, beta0, g.d(), g.lambda()).holds);
    const double mu = mu_bound(alpha, beta0);
    for (auto s : {FaultStrategy::random, FaultStrategy::ball, FaultStrategy::greedy_closure,
                   FaultStrategy::around_initiation}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        PlacementOptions opts;
        opts.beta0 = beta0;
        const NodeSet T = place_faults(g, s, floor_count(alpha * 1000.0), seed, opts);
        const FaultPartition part = compute_P(g, T, beta0);
        CHECK(static_cast<double>(part.P.size()) > 1000.0 - mu * static_cast<double>(T.size()));
      }
    }
  }
}

#include <doctest.h>

#include <cstdlib>
#include <vector>

#include "relaycast/graph.hpp"
#include "relaycast/kernels.hpp"
#include "relaycast/rng.hpp"

using namespace relaycast;

TEST_SUITE("kernels") {
  TEST_CASE("matvec and neighbor counts agree across backends") {
    setenv("RELAYCAST_WORKERS", "3", 1);
    CHECK(worker_count() == 3);
    const Graph g = build_random_regular(500, 12, 8);
    Rng rng(5);
    std::vector<double> x(g.n());
    std::vector<std::uint8_t> bits(g.n());
    for (NodeId i = 0; i < g.n(); ++i) {
      x[i] = rng.uniform() - 0.5;
      bits[i] = static_cast<std::uint8_t>(rng.below(2));
    }
    std::vector<double> ys(g.n()), yp(g.n());
    adjacency_matvec(g, x, ys, Backend::serial);
    adjacency_matvec(g, x, yp, Backend::openmp);
    CHECK(ys == yp);
    std::vector<std::uint32_t> cs(g.n()), cp(g.n());
    neighbor_counts(g, bits, cs, Backend::serial);
    neighbor_counts(g, bits, cp, Backend::openmp);
    CHECK(cs == cp);
    for (NodeId i = 0; i < g.n(); i += 37) {
      double acc = 0.0;
      std::uint32_t c = 0;
      for (NodeId j : g.neighbors(i)) {
        acc += x[j];
        c += bits[j];
      }
      CHECK(ys[i] == doctest::Approx(acc));
      CHECK(cs[i] == c);
    }
    unsetenv("RELAYCAST_WORKERS");
  }

  TEST_CASE("all-ones is an eigenvector with eigenvalue d") {
    const Graph g = make_petersen();
    std::vector<double> one(g.n(), 1.0), out(g.n());
    adjacency_matvec(g, one, out);
    for (double v : out) CHECK(v == 3.0);
  }
}

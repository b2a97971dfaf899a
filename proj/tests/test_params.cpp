#include <doctest.h>

#include <cmath>
#include <limits>
#include <tuple>
#include <algorithm>

#include "relaycast/errors.hpp"
#include "relaycast/params.hpp"
#include "relaycast/rng.hpp"

using namespace relaycast;

namespace {

double side(const Verdict& v, const std::string& name, bool lhs) {
  for (const auto& c : v.checks) {
    if (c.name == name) return lhs ? c.lhs : c.rhs;
  }
  FAIL("missing check " << name);
  return 0.0;
}

}  // namespace

TEST_SUITE("params") {
  TEST_CASE("count rounding") {
    CHECK(ceil_count(0.7 * 10) == 7);
    CHECK(ceil_count(0.3 * 3) == 1);
    CHECK(ceil_count(0.6 * 3) == 2);
    CHECK(ceil_count(0.25 * 32) == 8);
    CHECK(floor_count(0.015625 * 1024) == 16);
    CHECK(floor_count(0.1 * 1000) == 100);
    CHECK(SystemParams::make(1000, 0.001, 1).f == 1);
    CHECK_THROWS_AS(SystemParams::make(10, 1.0, 1), ValidationError);
  }

  TEST_CASE("protocol coefficients live in (0,1)") {
    ProtocolParams p;
    CHECK_NOTHROW(p.validate());
    p.beta2 = 1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.beta2 = 0.5;
    p.beta0 = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }

  TEST_CASE("mu bound") {
    CHECK(mu_bound(0.001, 0.08) == doctest::Approx(12.6491).epsilon(1e-5));
    CHECK(mu_bound(0.5, 0.25) == doctest::Approx(1.0));
    CHECK(std::isinf(mu_bound(0.0, 0.3)));
  }

  TEST_CASE("spectral gap condition") {
    const Verdict a = lemma2_holds(0.001, 0.08, 250, 2.0 * std::sqrt(249.0));
    CHECK(a.holds);
    CHECK(side(a, "spectral_gap", true) == doctest::Approx(0.06735).epsilon(1e-4));
    CHECK(side(a, "spectral_gap", false) == doctest::Approx(0.06312).epsilon(1e-4));
    const Verdict b = lemma2_holds(0.0, 0.5, 16, 2.0 * std::sqrt(15.0));
    CHECK(b.holds);
    CHECK(side(b, "spectral_gap", false) == doctest::Approx(0.2421).epsilon(1e-4));
    const Verdict c = lemma2_holds(0.001, 0.01, 10000, 2.0 * std::sqrt(9999.0));
    CHECK_FALSE(c.holds);
    CHECK(side(c, "spectral_gap", true) == doctest::Approx(0.005528).epsilon(1e-4));
    CHECK(side(c, "spectral_gap", false) == doctest::Approx(0.0099995).epsilon(1e-5));
  }

  TEST_CASE("excitation gap condition") {
    const double lam = 2.0 * std::sqrt(249.0);
    const Verdict a = lemma3_holds(0.001, 0.08, 0.08, 0.35, 250, lam);
    CHECK(a.holds);
    CHECK(side(a, "excitation_gap", true) == doctest::Approx(0.2821).epsilon(1e-4));
    CHECK_FALSE(lemma3_holds(0.001, 0.08, 0.08, 0.28, 250, lam).holds);
    CHECK_FALSE(lemma3_holds(0.001, 0.3, 0.08, 0.3, 250, lam).holds);
  }

  TEST_CASE("linear-degree coefficients") {
    const Verdict a = lemma4_holds(0.0001, 0.05, 0.05, 0.9, 2000, 1500, 2.0 * std::sqrt(1499.0));
    CHECK(a.holds);
    REQUIRE(a.theta0);
    CHECK(*a.theta0 == doctest::Approx(0.638).epsilon(1e-9));
    CHECK(side(a, "spectral_gap", true) == doctest::Approx(0.04684).epsilon(1e-4));
    CHECK(side(a, "spectral_gap", false) == doctest::Approx(0.02581).epsilon(1e-3));
    CHECK(side(a, "excitation_gap", true) == doctest::Approx(0.1905).epsilon(1e-3));
    CHECK_FALSE(lemma4_holds(0.0001, 0.3, 0.3, 0.2, 2000, 1500, 2.0 * std::sqrt(1499.0)).holds);
  }

  TEST_CASE("logarithmic-time degree condition") {
    const Verdict a = lemma5_holds(0.001, 0.2, 22500, 0.5, 0.01, 0.01);
    CHECK(a.holds);
    // 4 / (0.2 + 0.006 - 4 sqrt(0.002)) = 147.52...
    CHECK(side(a, "degree_floor", false) == doctest::Approx(147.5217).epsilon(1e-4));
    CHECK(side(a, "initial_excitation", false) == doctest::Approx(0.04764).epsilon(1e-3));
    CHECK_FALSE(lemma5_holds(0.001, 0.2, 10000, 0.5, 0.01, 0.01).holds);
    const double alpha = 0.01;
    const Verdict unsat = lemma5_holds(alpha, 4 * std::sqrt(2 * alpha) - 6 * alpha, 1000000, 0.5, 0.01, 0.01);
    CHECK_FALSE(unsat.holds);
    CHECK_FALSE(unsat.reason.empty());
  }

  TEST_CASE("closed-form trigger constants") {
    const Theorem1Params t = theorem1_params(0.001, 10000, 2.0);
    CHECK(t.u_trigger == 1809);
    CHECK(t.s_local == 1829);
    const Theorem1Params z = theorem1_params(0.0, 500, 2.0);
    CHECK(z.u_trigger == 0);
    CHECK(z.s_local == 0);
    CHECK_THROWS_AS(theorem1_params(0.25, 1000, 2.0), ValidationError);
    CHECK_THROWS_AS(theorem1_params(0.001, 1000, 0.5), ValidationError);
  }

  TEST_CASE("feasibility search") {
    const FeasibilityReport bar = pure_propagation_feasible(0.1, 1000, 64, 2.0 * std::sqrt(63.0), 0.01);
    CHECK(bar.barrier_violated);
    CHECK(bar.feasible_assignments.empty());

    const FeasibilityReport lin = pure_propagation_feasible(0.0001, 2000, 1500, 2.0 * std::sqrt(1499.0), 0.05);
    CHECK_FALSE(lin.barrier_violated);
    bool found = false;
    for (const auto& a : lin.feasible_assignments) {
      if (std::abs(a.beta - 0.05) < 1e-12 && std::abs(a.beta0 - 0.05) < 1e-12 && std::abs(a.beta2 - 0.9) < 1e-12) {
        found = true;
      }
    }
    CHECK(found);
    REQUIRE(lin.witness);
    CHECK(lin.witness->holds);

    const FeasibilityReport free = pure_propagation_feasible(0.0, 2000, 1500, 2.0 * std::sqrt(1499.0), 0.05);
    CHECK_FALSE(free.feasible_assignments.empty());
    // Small d leaves theta0 far below beta + 3 beta0 whatever alpha is.
    CHECK(pure_propagation_feasible(0.0, 100, 16, 2.0 * std::sqrt(15.0), 0.05).feasible_assignments.empty());

    CHECK_THROWS_AS(pure_propagation_feasible(0.1, 100, 16, 1.0, 0.2), ValidationError);
    CHECK_THROWS_AS(pure_propagation_feasible(0.1, 100, 16, 1.0, 0.0), ValidationError);
  }

  TEST_CASE("every feasible triple passes lemma4_holds on its own and the list is sorted") {
    const FeasibilityReport r = pure_propagation_feasible(0.0002, 1500, 1000, 2.0 * std::sqrt(999.0), 0.02);
    REQUIRE_FALSE(r.feasible_assignments.empty());
    for (std::size_t k = 0; k < r.feasible_assignments.size(); ++k) {
      const auto& a = r.feasible_assignments[k];
      const Verdict v = lemma4_holds(0.0002, a.beta, a.beta0, a.beta2, 1500, 1000, 2.0 * std::sqrt(999.0));
      CHECK(v.holds);
      CHECK(*v.theta0 == doctest::Approx(a.theta0));
      if (k > 0) {
        const auto& p = r.feasible_assignments[k - 1];
        CHECK(std::tie(p.beta, p.beta0, p.beta2) < std::tie(a.beta, a.beta0, a.beta2));
      }
    }
    const std::size_t worst = std::max({r.rejected_spectral_gap, r.rejected_excitation_gap, r.rejected_coefficient_order});
    CHECK(r.feasible_assignments.size() + worst <= r.grid_points);
  }

  TEST_CASE("barrier holds across grid resolutions") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 200 + rng.below(3000);
      const double alpha = 0.01 + 0.2 * rng.uniform();
      const auto two_f = static_cast<std::size_t>(2.0 * alpha * static_cast<double>(n));
      if (two_f < 4) continue;
      const std::size_t d = 3 + rng.below(two_f - 3);  // d + 1 <= 2 alpha n
      for (double step : {0.02, 0.05, 0.1}) {
        const FeasibilityReport r = pure_propagation_feasible(alpha, n, d, 2.0 * std::sqrt(d - 1.0), step);
        CHECK(r.barrier_violated);
        CHECK(r.feasible_assignments.empty());
      }
    }
  }

  TEST_CASE("monotonicity of the verdicts") {
    Rng rng(77);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t d = 4 + rng.below(400);
      const double beta0 = 0.01 + 0.9 * rng.uniform();
      const double alpha = 0.05 * rng.uniform();
      const double lam = 2.0 * std::sqrt(d - 1.0) * (0.5 + rng.uniform());
      if (lemma2_holds(alpha, beta0, d, lam).holds) {
        CHECK(lemma2_holds(alpha * rng.uniform(), beta0, d, lam).holds);
        CHECK(lemma2_holds(alpha, beta0, d, lam * rng.uniform()).holds);
      }
      const double beta = 0.9 * rng.uniform() + 0.01;
      const double theta0 = rng.uniform();
      if (lemma3_holds(alpha, beta, beta0, theta0, d, lam).holds) {
        CHECK(lemma3_holds(alpha, beta, beta0, theta0 + 0.5 * rng.uniform(), d, lam).holds);
      }
    }
  }
}

#include "relaycast/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaycast/errors.hpp"

namespace relaycast {

namespace {

constexpr double kSnap = 1e-9;

InequalityCheck check(std::string name, double lhs, std::string relation, double rhs) {
  InequalityCheck c{std::move(name), lhs, rhs, std::move(relation), false};
  if (c.relation == ">=") {
    c.holds = lhs >= rhs;
  } else if (c.relation == ">") {
    c.holds = lhs > rhs;
  } else {
    c.holds = lhs < rhs;
  }
  return c;
}

bool all_hold(const std::vector<InequalityCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.holds; });
}

// Grid coordinate k*step, rounded so that 18*0.05 prints and compares as 0.9.
double grid_value(std::size_t k, double step) {
  return std::round(static_cast<double>(k) * step * 1e12) / 1e12;
}

// 1 - x rounded to 12 decimals; 1 - 0.9 would otherwise fall just below 0.1.
double one_minus(double x) { return std::round((1.0 - x) * 1e12) / 1e12; }

}  // namespace

std::size_t ceil_count(double x) {
  if (x <= 0.0) return 0;
  const double r = std::round(x);
  if (std::abs(x - r) <= kSnap * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

std::size_t floor_count(double x) {
  if (x <= 0.0) return 0;
  const double r = std::round(x);
  if (std::abs(x - r) <= kSnap * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::floor(x));
}

SystemParams SystemParams::make(std::size_t n, double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in [0, 1)");
  SystemParams s;
  s.n = n;
  s.alpha = alpha;
  s.f = floor_count(alpha * static_cast<double>(n));
  s.seed = seed;
  return s;
}

void ProtocolParams::validate() const {
  auto open_unit = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
      throw ValidationError(std::string(name) + " must lie in the open interval (0, 1)");
    }
  };
  open_unit(beta, "beta");
  open_unit(beta0, "beta0");
  open_unit(beta2, "beta2");
  open_unit(theta0, "theta0");
  open_unit(eps, "eps");
}

double mu_bound(double alpha, double beta0) {
  if (alpha == 0.0) return std::numeric_limits<double>::infinity();
  if (alpha < 0.0 || beta0 <= 0.0) throw ValidationError("mu_bound: needs alpha >= 0, beta0 > 0");
  return std::sqrt(2.0 * beta0 / alpha);
}

Verdict lemma2_holds(double alpha, double beta0, std::size_t d, double lambda) {
  Verdict v;
  v.checks.push_back(check("spectral_gap", beta0 - std::sqrt(2.0 * alpha * beta0), ">=",
                           lambda / (2.0 * static_cast<double>(d))));
  v.holds = all_hold(v.checks);
  return v;
}

Verdict lemma3_holds(double alpha, double beta, double beta0, double theta0, std::size_t d,
                     double lambda) {
  Verdict v = lemma2_holds(alpha, beta0, d, lambda);
  v.checks.push_back(
      check("excitation_gap", beta + 3.0 * (beta0 - std::sqrt(2.0 * alpha * beta0)), "<", theta0));
  v.holds = all_hold(v.checks);
  return v;
}

Verdict lemma4_holds(double alpha, double beta, double beta0, double beta2, std::size_t n,
                     std::size_t d, double lambda) {
  const double theta0 =
      ((beta2 - beta0) * static_cast<double>(d) + 1.0) / static_cast<double>(n);
  Verdict v;
  v.checks.push_back(check("coefficient_order", std::min({beta, beta2, one_minus(beta2)}), ">=", beta0));
  Verdict rest = lemma3_holds(alpha, beta, beta0, theta0, d, lambda);
  v.checks.insert(v.checks.end(), rest.checks.begin(), rest.checks.end());
  v.theta0 = theta0;
  v.holds = all_hold(v.checks);
  return v;
}

Verdict lemma5_holds(double alpha, double theta0, std::size_t d, double eps, double beta,
                     double beta0) {
  Verdict v;
  const double denom = theta0 + 6.0 * alpha - 4.0 * std::sqrt(2.0 * alpha);
  if (denom <= 0.0) {
    v.checks.push_back(check("degree_floor", std::sqrt(static_cast<double>(d)), ">",
                             std::numeric_limits<double>::infinity()));
    v.reason = "theta0 + 6 alpha - 4 sqrt(2 alpha) is not positive; the degree floor is unsatisfiable";
  } else {
    v.checks.push_back(check("degree_floor", std::sqrt(static_cast<double>(d)), ">", 4.0 / denom));
  }
  const double rhs_excitation = beta + 3.0 * beta0 / (1.0 - eps) -
                       (3.0 - eps) / (1.0 - eps) * std::sqrt(2.0 * alpha * beta0);
  v.checks.push_back(check("initial_excitation", theta0, ">", rhs_excitation));
  v.holds = all_hold(v.checks);
  return v;
}

Theorem1Params theorem1_params(double alpha, std::size_t n, double mu) {
  if (mu < 1.0) throw ValidationError("theorem1_params: mu must be at least 1");
  if (alpha < 0.0) throw ValidationError("theorem1_params: alpha must be non-negative");
  const double nn = static_cast<double>(n);
  const double poor = mu * alpha * nn;
  Theorem1Params t;
  t.u_trigger = ceil_count(poor + 4.0 * std::sqrt(2.0 * alpha) * nn);
  t.s_local = t.u_trigger + ceil_count(poor);
  if (alpha > 0.0 && t.u_trigger >= n) {
    throw ValidationError("theorem1_params: u = " + std::to_string(t.u_trigger) +
                          " is not below n = " + std::to_string(n) +
                          "; the constants are vacuous at this scale");
  }
  return t;
}

FeasibilityReport pure_propagation_feasible(double alpha, std::size_t n, std::size_t d, double lambda,
                                            double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) throw ValidationError("grid_step must lie in (0, 0.1]");
  if (n == 0 || d == 0) throw ValidationError("n and d must be positive");

  FeasibilityReport r;
  r.alpha = alpha;
  r.n = n;
  r.d = d;
  r.lambda = lambda;
  r.grid_step = grid_step;
  r.barrier = check("barrier", static_cast<double>(d) + 1.0, ">",
                    2.0 * alpha * static_cast<double>(n));
  r.barrier_violated = !r.barrier.holds;

  std::size_t steps = 0;
  while (grid_value(steps + 1, grid_step) < 1.0) ++steps;
  std::vector<double> grid(steps);
  for (std::size_t k = 0; k < steps; ++k) grid[k] = grid_value(k + 1, grid_step);
  r.grid_points = steps * steps * steps;

  struct Row {
    std::vector<FeasibleAssignment> found;
    std::size_t r_gap = 0, r_excite = 0, r_order = 0;
  };
  std::vector<Row> rows(steps);
  const auto signed_steps = static_cast<long>(steps);
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double spectral_term = lambda / (2.0 * dd);

#pragma omp parallel for schedule(dynamic)
  for (long a = 0; a < signed_steps; ++a) {
    Row& row = rows[static_cast<std::size_t>(a)];
    const double beta = grid[static_cast<std::size_t>(a)];
    for (std::size_t b = 0; b < steps; ++b) {
      const double beta0 = grid[b];
      for (std::size_t c = 0; c < steps; ++c) {
        const double beta2 = grid[c];
        // Same inequalities as lemma4_holds, without building a Verdict per point.
        const double theta0 = ((beta2 - beta0) * dd + 1.0) / nn;
        const double slack = beta0 - std::sqrt(2.0 * alpha * beta0);
        const bool ok17 = std::min({beta, beta2, one_minus(beta2)}) >= beta0;
        const bool ok15 = slack >= spectral_term;
        const bool ok16 = beta + 3.0 * slack < theta0;
        row.r_order += !ok17;
        row.r_gap += !ok15;
        row.r_excite += !ok16;
        if (ok15 && ok16 && ok17) row.found.push_back({beta, beta0, beta2, theta0});
      }
    }
  }

  for (const Row& row : rows) {
    r.rejected_spectral_gap += row.r_gap;
    r.rejected_excitation_gap += row.r_excite;
    r.rejected_coefficient_order += row.r_order;
    r.feasible_assignments.insert(r.feasible_assignments.end(), row.found.begin(), row.found.end());
  }
  if (!r.feasible_assignments.empty()) {
    const auto& first = r.feasible_assignments.front();
    r.witness = lemma4_holds(alpha, first.beta, first.beta0, first.beta2, n, d, lambda);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& fa : r.feasible_assignments) best = std::min(best, mu_bound(alpha, fa.beta0));
    r.mu_bound = best;
  }
  return r;
}

}  // namespace relaycast

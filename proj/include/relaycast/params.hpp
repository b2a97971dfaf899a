#ifndef RELAYCAST_PARAMS_HPP
#define RELAYCAST_PARAMS_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace relaycast {

/// ceil/floor for threshold counts. A product within 1e-9 (relative) of an
/// integer is taken to be that integer, so 0.7*10 counts as 7, not 8.
std::size_t ceil_count(double x);
std::size_t floor_count(double x);

struct SystemParams {
  std::size_t n = 0;
  double alpha = 0.0;
  std::size_t f = 0;  // floor(alpha * n)
  std::uint64_t seed = 0;

  static SystemParams make(std::size_t n, double alpha, std::uint64_t seed);
};

struct ProtocolParams {
  double beta = 0.25;   // propagation coefficient
  double beta0 = 0.25;  // immunity coefficient
  double beta2 = 0.5;   // triggering coefficient
  double theta0 = 0.2;  // initial-excitation fraction
  double eps = 0.5;     // expansion-rate constant
  std::size_t u_trigger = 0;
  std::size_t s_local = 0;
  std::size_t c_radius = 0;

  std::size_t excitation_threshold(std::size_t d) const { return ceil_count(beta * static_cast<double>(d)); }
  std::size_t pure_trigger_threshold(std::size_t d) const {
    return ceil_count(beta2 * static_cast<double>(d));
  }
  /// Throws ValidationError when a coefficient lies outside (0,1).
  void validate() const;
};

/// One side-by-side inequality evaluation.
struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string relation;  // ">=", ">", "<"
  bool holds = false;
};

struct Verdict {
  bool holds = false;
  std::vector<InequalityCheck> checks;
  std::optional<double> theta0;  // derived by lemma4_holds
  std::string reason;
};

/// sqrt(2 beta0 / alpha); +infinity when alpha == 0.
double mu_bound(double alpha, double beta0);

/// beta0 - sqrt(2 alpha beta0) >= lambda / (2d).
Verdict lemma2_holds(double alpha, double beta0, std::size_t d, double lambda);

/// beta + 3 (beta0 - sqrt(2 beta0 alpha)) < theta0, conjoined with lemma2_holds.
Verdict lemma3_holds(double alpha, double beta, double beta0, double theta0, std::size_t d,
                     double lambda);

/// min{beta, beta2, 1-beta2} >= beta0 with theta0 = ((beta2-beta0) d + 1)/n,
/// conjoined with lemma3_holds at that theta0.
Verdict lemma4_holds(double alpha, double beta, double beta0, double beta2, std::size_t n,
                     std::size_t d, double lambda);

/// sqrt(d) > 4/(theta0 + 6 alpha - 4 sqrt(2 alpha)) and
/// theta0 > beta + 3 beta0/(1-eps) - (3-eps)/(1-eps) sqrt(2 alpha beta0).
Verdict lemma5_holds(double alpha, double theta0, std::size_t d, double eps, double beta,
                     double beta0);

struct Theorem1Params {
  std::size_t u_trigger = 0;
  std::size_t s_local = 0;
};

/// u = ceil(mu alpha n + 4 sqrt(2 alpha) n), s = u + ceil(mu alpha n).
/// Throws ValidationError when u >= n.
Theorem1Params theorem1_params(double alpha, std::size_t n, double mu);

struct FeasibleAssignment {
  double beta = 0.0;
  double beta0 = 0.0;
  double beta2 = 0.0;
  double theta0 = 0.0;
};

struct FeasibilityReport {
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
  double lambda = 0.0;
  double grid_step = 0.0;
  bool barrier_violated = false;
  InequalityCheck barrier;  // d + 1 > 2 alpha n
  std::size_t grid_points = 0;
  std::size_t rejected_spectral_gap = 0;
  std::size_t rejected_excitation_gap = 0;
  std::size_t rejected_coefficient_order = 0;
  std::optional<double> mu_bound;      // smallest over feasible beta0
  std::optional<Verdict> witness;      // lemma4_holds verdict of the first feasible triple
  std::vector<FeasibleAssignment> feasible_assignments;  // lexicographic (beta, beta0, beta2)
};

/// Grid search over (beta, beta0, beta2) at the given resolution with theta0
/// bound as in lemma4_holds.
FeasibilityReport pure_propagation_feasible(double alpha, std::size_t n, std::size_t d, double lambda,
                                            double grid_step);

inline double ramanujan_lambda(std::size_t d) { return 2.0 * std::sqrt(static_cast<double>(d) - 1.0); }

}  // namespace relaycast

#endif  // RELAYCAST_PARAMS_HPP

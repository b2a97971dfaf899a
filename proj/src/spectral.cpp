#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "relaycast/errors.hpp"
#include "relaycast/graph.hpp"
#include "relaycast/kernels.hpp"
#include "relaycast/rng.hpp"

namespace relaycast {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void orthogonalize(Vec& v, const std::vector<Vec>& basis) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) {
    for (const Vec& b : basis) axpy(-dot(v, b), b, v);
  }
}

struct RitzExtremes {
  double lo = 0.0, hi = 0.0;
  double res_lo = 0.0, res_hi = 0.0;
};

RitzExtremes ritz(const std::vector<double>& alpha, const std::vector<double>& beta, double last_beta) {
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd diag(m), sub(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i < m; ++i) diag[i] = alpha[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < m; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  RitzExtremes r;
  r.lo = values[0];
  r.hi = values[m - 1];
  r.res_lo = std::abs(last_beta * vectors(m - 1, 0));
  r.res_hi = std::abs(last_beta * vectors(m - 1, m - 1));
  return r;
}

}  // namespace

// Lanczos with full reorthogonalization on the complement of the trivial
// eigenvectors. Extreme Ritz values converge first, which is all we need.
double spectral_bound(const Graph& g, double tol) {
  const std::size_t n = g.n();
  const double d = static_cast<double>(g.d());

  std::vector<Vec> deflate;
  deflate.emplace_back(n, 1.0 / std::sqrt(static_cast<double>(n)));
  if (g.bipartite()) {
    Vec sign(n);
    for (std::size_t i = 0; i < n; ++i) {
      sign[i] = (g.coloring()[i] ? -1.0 : 1.0) / std::sqrt(static_cast<double>(n));
    }
    deflate.push_back(std::move(sign));
  }
  const std::size_t dim = n - deflate.size();
  if (dim == 0) return 0.0;

  const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  const auto budget = static_cast<std::size_t>(10.0 * static_cast<double>(n) * logn);
  const std::size_t max_steps = std::min({dim, budget, std::size_t{1500}});

  Rng rng(derive_seed(0, Stream::spectral));
  Vec q(n);
  for (auto& v : q) v = rng.uniform() - 0.5;
  orthogonalize(q, deflate);
  {
    const double norm = std::sqrt(dot(q, q));
    for (auto& v : q) v /= norm;
  }

  std::vector<Vec> basis;
  std::vector<double> alpha, beta;
  Vec w(n);
  RitzExtremes last;
  const double breakdown = 1e-10 * d;

  for (std::size_t step = 0; step < max_steps; ++step) {
    basis.push_back(q);
    adjacency_matvec(g, basis.back(), w);
    const double a = dot(w, basis.back());
    alpha.push_back(a);
    orthogonalize(w, deflate);
    orthogonalize(w, basis);
    const double b = std::sqrt(dot(w, w));

    const bool exhausted = b <= breakdown || basis.size() == dim;
    const bool check = exhausted || step < 8 || step % 8 == 7 || step + 1 == max_steps;
    if (check) {
      last = ritz(alpha, beta, exhausted ? 0.0 : b);
      const double estimate = std::max(std::abs(last.lo), std::abs(last.hi));
      const double scale = std::max(estimate, 1e-12 * d);
      if (exhausted || (last.res_lo <= tol * scale && last.res_hi <= tol * scale)) {
        return std::min(estimate, d);
      }
    }
    beta.push_back(b);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / b;
  }
  throw NumericalError("spectral_bound did not converge in " + std::to_string(max_steps) + " steps",
                       std::max(last.res_lo, last.res_hi));
}

}  // namespace relaycast

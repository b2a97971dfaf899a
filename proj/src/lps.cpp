#include <array>
#include <cmath>
#include <unordered_map>

#include "relaycast/errors.hpp"
#include "relaycast/graph.hpp"

namespace relaycast {

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  if (x % 2 == 0) return x == 2;
  for (std::uint64_t k = 3; k * k <= x; k += 2) {
    if (x % k == 0) return false;
  }
  return true;
}

namespace {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = static_cast<std::uint64_t>((__uint128_t)result * base % mod);
    base = static_cast<std::uint64_t>((__uint128_t)base * base % mod);
    exp >>= 1;
  }
  return result;
}

std::uint64_t reduce(std::int64_t a, std::uint64_t q) {
  const auto m = static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(((a % m) + m) % m);
}

// 2x2 matrix over Z/q, row-major (a b; c d).
using Mat = std::array<std::uint64_t, 4>;

Mat multiply(const Mat& x, const Mat& y, std::uint64_t q) {
  return {(x[0] * y[0] + x[1] * y[2]) % q, (x[0] * y[1] + x[1] * y[3]) % q,
          (x[2] * y[0] + x[3] * y[2]) % q, (x[2] * y[1] + x[3] * y[3]) % q};
}

// Canonical representative of the projective class: first nonzero entry is 1.
Mat normalize(Mat m, std::uint64_t q) {
  std::uint64_t lead = 0;
  for (auto v : m) {
    if (v != 0) {
      lead = v;
      break;
    }
  }
  const std::uint64_t inv = pow_mod(lead, q - 2, q);
  for (auto& v : m) v = v * inv % q;
  return m;
}

std::uint64_t key(const Mat& m, std::uint64_t q) {
  return ((m[0] * q + m[1]) * q + m[2]) * q + m[3];
}

}  // namespace

int legendre_symbol(std::int64_t a, std::uint64_t q) {
  if (q < 3 || !is_prime(q)) {
    throw ValidationError("legendre_symbol: modulus " + std::to_string(q) + " is not an odd prime");
  }
  const std::uint64_t r = reduce(a, q);
  if (r == 0) throw ValidationError("legendre_symbol: argument divisible by the modulus");
  return pow_mod(r, (q - 1) / 2, q) == 1 ? 1 : -1;
}

Graph build_lps_graph(std::uint64_t p, std::uint64_t q) {
  if (!is_prime(p) || !is_prime(q)) throw ValidationError("lps: p and q must be prime");
  if (p == q) throw ValidationError("lps: p and q must differ");
  if (p % 4 != 1 || q % 4 != 1) throw ValidationError("lps: requires p = q = 1 (mod 4)");
  if (static_cast<double>(q) <= 2.0 * std::sqrt(static_cast<double>(p))) {
    throw ValidationError("lps: requires q > 2 sqrt(p) for a simple graph");
  }
  if (q > 2000) throw ValidationError("lps: q too large for in-memory construction");

  const bool bipartite = legendre_symbol(static_cast<std::int64_t>(p), q) == -1;

  // iota^2 = -1 mod q
  std::uint64_t iota = 0;
  for (std::uint64_t x = 1; x < q; ++x) {
    if (x * x % q == q - 1) {
      iota = x;
      break;
    }
  }

  // Solutions of a0^2+a1^2+a2^2+a3^2 = p with a0 > 0 odd, a1..a3 even.
  std::vector<Mat> generators;
  const auto bound = static_cast<std::int64_t>(std::sqrt(static_cast<double>(p))) + 1;
  for (std::int64_t a0 = 1; a0 <= bound; a0 += 2) {
    for (std::int64_t a1 = -bound; a1 <= bound; ++a1) {
      for (std::int64_t a2 = -bound; a2 <= bound; ++a2) {
        for (std::int64_t a3 = -bound; a3 <= bound; ++a3) {
          if ((a1 | a2 | a3) & 1) continue;
          if (a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 != static_cast<std::int64_t>(p)) continue;
          const auto i1 = static_cast<std::int64_t>(iota) * a1;
          const auto i3 = static_cast<std::int64_t>(iota) * a3;
          Mat m{reduce(a0 + i1, q), reduce(a2 + i3, q), reduce(-a2 + i3, q), reduce(a0 - i1, q)};
          generators.push_back(normalize(m, q));
        }
      }
    }
  }
  if (generators.size() != p + 1) {
    throw ConstructionError("lps: found " + std::to_string(generators.size()) +
                            " generators, expected p+1");
  }

  // Breadth-first enumeration of the component of the identity under left
  // multiplication by the generators.
  std::unordered_map<std::uint64_t, NodeId> index;
  std::vector<Mat> elements;
  const Mat identity{1, 0, 0, 1};
  index.emplace(key(identity, q), 0);
  elements.push_back(identity);
  std::vector<std::vector<NodeId>> adjacency;
  for (std::size_t head = 0; head < elements.size(); ++head) {
    std::vector<NodeId> row;
    row.reserve(generators.size());
    for (const Mat& s : generators) {
      const Mat next = normalize(multiply(s, elements[head], q), q);
      auto [it, inserted] = index.emplace(key(next, q), static_cast<NodeId>(elements.size()));
      if (inserted) elements.push_back(next);
      row.push_back(it->second);
    }
    adjacency.push_back(std::move(row));
  }

  const std::uint64_t expected = bipartite ? q * (q * q - 1) : q * (q * q - 1) / 2;
  if (elements.size() != expected) {
    throw ConstructionError("lps: reached " + std::to_string(elements.size()) +
                            " group elements, expected " + std::to_string(expected));
  }

  GraphOrigin origin;
  origin.kind = GraphOrigin::Kind::lps;
  origin.p = p;
  origin.q = q;
  Graph g = [&] {
    try {
      return Graph::from_adjacency(std::move(adjacency), origin);
    } catch (const ValidationError& e) {
      throw ConstructionError(std::string("lps: ") + e.what());
    }
  }();
  if (g.bipartite() != bipartite) throw ConstructionError("lps: bipartiteness mismatch");
  const double ramanujan = 2.0 * std::sqrt(static_cast<double>(p));
  if (g.lambda() > ramanujan * (1.0 + 1e-6)) {
    throw ConstructionError("lps: measured lambda " + std::to_string(g.lambda()) +
                            " exceeds 2 sqrt(d-1)");
  }
  return g;
}

}  // namespace relaycast

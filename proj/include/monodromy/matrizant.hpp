#pragma once

// Iterated-integral (matrizant) expansion of the normalized pair in the
// perturbation parameters h = (h_1, ..., h_d).
//
// With the unperturbed pair (v, u) of u'' + r u = 0 and kernels
//
//   M_j(s) = q_j(s) [ -u v   v^2 ]
//                   [ -u^2   u v ],
//
// the coefficients C_k(t) (k a multi-index, C_0 = I) satisfy
//
//   C_k(t0) = 0,   dC_k/dt = sum_{j : k_j > 0} C_{k - e_j}(t) M_j(t),
//
// and (v, u)(t, h) = [ sum_k C_k(t) h^k ] (v, u)(t).  For |k| = n the
// coefficient C_k is the A_{n-1;k} of the iterated-integral recursion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/field.hpp"
#include "monodromy/path.hpp"
#include "monodromy/path_ode.hpp"
#include "monodromy/sl2.hpp"

namespace monodromy {

using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& k) {
  int n = 0;
  for (int x : k) n += x;
  return n;
}

/// Binomial coefficient as double (counts only; exact for the sizes we allow).
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

/// Number of multi-indices of dimension d with 1 <= |k| <= n_max.
inline double multi_index_count(int d, int n_max) {
  if (d == 0) return 0.0;
  double total = 0.0;
  for (int n = 1; n <= n_max; ++n) total += binomial(n + d - 1, d - 1);
  return total;
}

namespace detail {
inline void fill_degree(int d, int remaining, std::size_t pos, MultiIndex& cur,
                        std::vector<MultiIndex>& out) {
  if (pos + 1 == static_cast<std::size_t>(d)) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int x = remaining; x >= 0; --x) {
    cur[pos] = x;
    fill_degree(d, remaining - x, pos + 1, cur, out);
  }
}
}  // namespace detail

/// All k with 1 <= |k| <= n_max: by degree, then lexicographically descending
/// ((2,0) before (1,1) before (0,2)).
inline std::vector<MultiIndex> graded_lex(int d, int n_max) {
  std::vector<MultiIndex> out;
  if (d <= 0) return out;
  MultiIndex cur(static_cast<std::size_t>(d), 0);
  for (int n = 1; n <= n_max; ++n) detail::fill_degree(d, n, 0, cur, out);
  return out;
}

/// h^k = prod_j h_j^{k_j}.
inline Complex monomial(std::span<const Complex> h, const MultiIndex& k) {
  Complex acc{1.0};
  for (std::size_t j = 0; j < k.size(); ++j) {
    for (int e = 0; e < k[j]; ++e) acc *= h[j];
  }
  return acc;
}

/// M_j(s) for basis element value q = q_j(s) and the unperturbed pair at s.
inline Mat2 kernel(Complex q, const FundamentalPair& p) {
  const Complex uv = p.u * p.v;
  return {-q * uv, q * p.v * p.v, -q * p.u * p.u, q * uv};
}

inline Mat2 kernel(const CoefficientField& field, std::size_t j, Complex s, const FundamentalPair& p) {
  return kernel(field.basis(j)(s), p);
}

struct SeriesCoefficient {
  MultiIndex k;
  Mat2 m;
};

struct MatrizantSeries {
  int d = 0;
  int order = 0;
  Path path;
  /// Unperturbed pair at the basepoint (normalized unless a frame was given)
  /// and at the endpoint.
  FundamentalPair start_pair{};
  FundamentalPair end_pair{};
  std::vector<SeriesCoefficient> coeffs;  // graded-lex order

  const Mat2* find(const MultiIndex& k) const {
    for (const auto& c : coeffs) {
      if (c.k == k) return &c.m;
    }
    return nullptr;
  }

  /// sum_{|k| = n} C_k for n = 1..order (entry 0 is the identity).
  std::vector<Mat2> degree_sums() const {
    std::vector<Mat2> out(static_cast<std::size_t>(order) + 1, Mat2::zero());
    out[0] = Mat2::identity();
    for (const auto& c : coeffs) out[static_cast<std::size_t>(degree(c.k))] += c.m;
    return out;
  }
};

inline constexpr std::size_t kDefaultCoefficientCap = 20'000;

struct SeriesOptions {
  IntegrationOptions integration{};
  std::size_t coefficient_cap = kDefaultCoefficientCap;
};

/// Integrates the pair and every coefficient C_k, 1 <= |k| <= order, as one
/// coupled system along `path`.  `initial` is the unperturbed pair at the
/// basepoint; the perturbed pair shares its initial data.
inline MatrizantSeries compute_series(const CoefficientField& field, const Path& path, int order,
                                      const SeriesOptions& opt = {},
                                      const FundamentalPair& initial = FundamentalPair::normalized()) {
  if (order < 0) throw InvalidInput("compute_series: negative order");
  const int d = static_cast<int>(field.dimension());
  const double count = multi_index_count(d, order);
  if (count > static_cast<double>(opt.coefficient_cap)) {
    throw CapExceededError("compute_series: " + std::to_string(static_cast<long long>(count)) +
                           " coefficients exceed the cap of " + std::to_string(opt.coefficient_cap));
  }

  MatrizantSeries series;
  series.d = d;
  series.order = order;
  series.path = path;

  const std::vector<MultiIndex> indices = graded_lex(d, order);
  const std::size_t n_coeff = indices.size();

  // For coefficient i: list of (j, index of k - e_j or npos for k - e_j = 0).
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::map<MultiIndex, std::size_t> position;
  for (std::size_t i = 0; i < n_coeff; ++i) position.emplace(indices[i], i);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> parents(n_coeff);
  for (std::size_t i = 0; i < n_coeff; ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(d); ++j) {
      if (indices[i][j] == 0) continue;
      MultiIndex prev = indices[i];
      --prev[j];
      parents[i].emplace_back(j, degree(prev) == 0 ? npos : position.at(prev));
    }
  }

  const std::vector<Complex> poles = field.all_poles();
  check_clearance(poles, path, opt.integration);
  const std::vector<Complex> h0 = field.zero_parameter();

  // State: u, u', v, v', then 4 entries (a, b, c, d) per coefficient.
  ode::State y(4 + 4 * n_coeff);
  y[0] = initial.u;
  y[1] = initial.du;
  y[2] = initial.v;
  y[3] = initial.dv;
  series.start_pair = initial;
  std::vector<Mat2> kern(static_cast<std::size_t>(d));
  auto coefficient = [](const ode::State& s, std::size_t i) {
    const std::size_t o = 4 + 4 * i;
    return Mat2{s[o], s[o + 1], s[o + 2], s[o + 3]};
  };
  auto rhs = [&](Complex t, const ode::State& s, ode::State& ds) {
    const Complex r = field(t, h0);
    ds[0] = s[1];
    ds[1] = -r * s[0];
    ds[2] = s[3];
    ds[3] = -r * s[2];
    const FundamentalPair p{s[2], s[3], s[0], s[1]};
    for (std::size_t j = 0; j < kern.size(); ++j) kern[j] = kernel(field.basis(j)(t), p);
    for (std::size_t i = 0; i < n_coeff; ++i) {
      Mat2 acc = Mat2::zero();
      for (const auto& [j, prev] : parents[i]) {
        acc += prev == npos ? kern[j] : coefficient(s, prev) * kern[j];
      }
      const std::size_t o = 4 + 4 * i;
      ds[o] = acc.a;
      ds[o + 1] = acc.b;
      ds[o + 2] = acc.c;
      ds[o + 3] = acc.d;
    }
  };
  integrate_along(path, rhs, y, opt.integration, [](Complex, const ode::State&) {});

  series.end_pair = {y[2], y[3], y[0], y[1]};
  series.coeffs.reserve(n_coeff);
  for (std::size_t i = 0; i < n_coeff; ++i) series.coeffs.push_back({indices[i], coefficient(y, i)});
  return series;
}

/// Omega(h) = I + sum_{1 <= |k| <= N} C_k h^k.
inline Mat2 evaluate_omega(const MatrizantSeries& series, std::span<const Complex> h) {
  if (h.size() != static_cast<std::size_t>(series.d)) {
    throw InvalidInput("evaluate_omega: parameter dimension does not match the series");
  }
  Mat2 acc = Mat2::identity();
  for (const auto& c : series.coeffs) acc += c.m * monomial(h, c.k);
  return acc;
}

/// (v, u)(t, h) ~ Omega(h) (v, u)(t) at the series endpoint.
struct PerturbedValues {
  Complex v{};
  Complex u{};
};

inline PerturbedValues perturbed_pair(const MatrizantSeries& series, std::span<const Complex> h,
                                      const FundamentalPair& pair_at_endpoint) {
  const auto w = evaluate_omega(series, h).apply(pair_at_endpoint.v, pair_at_endpoint.u);
  return {w[0], w[1]};
}

inline PerturbedValues perturbed_pair(const MatrizantSeries& series, std::span<const Complex> h) {
  return perturbed_pair(series, h, series.end_pair);
}

/// Empirical convergence radius in |h| from the growth of the degree-n
/// coefficient norms (root test on the highest available degree).  Infinite
/// when the top coefficients vanish.
inline double estimate_radius(const MatrizantSeries& series) {
  std::vector<double> norms(static_cast<std::size_t>(series.order) + 1, 0.0);
  for (const auto& c : series.coeffs) norms[static_cast<std::size_t>(degree(c.k))] += c.m.frobenius();
  for (int n = series.order; n >= 1; --n) {
    const double a = norms[static_cast<std::size_t>(n)];
    if (a > 0.0) {
      if (n >= 2 && norms[static_cast<std::size_t>(n - 1)] > 0.0) {
        return norms[static_cast<std::size_t>(n - 1)] / a;
      }
      return std::pow(a, -1.0 / n);
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace monodromy

#pragma once

// Truncated Taylor expansions ("jets") of analytic functions and the
// Schwarzian derivative.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/sl2.hpp"

namespace monodromy {

/// f(basepoint + tau) = sum_k coeffs[k] tau^k + O(tau^{K+1}), K = order().
class Jet {
 public:
  Jet() = default;
  Jet(Complex basepoint, std::vector<Complex> coeffs)
      : basepoint_(basepoint), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw InvalidInput("Jet: need at least one coefficient");
  }

  static Jet constant(Complex t0, Complex value, std::size_t order) {
    std::vector<Complex> c(order + 1);
    c[0] = value;
    return {t0, std::move(c)};
  }

  /// The identity function t at t0.
  static Jet variable(Complex t0, std::size_t order) {
    std::vector<Complex> c(order + 1);
    c[0] = t0;
    if (order >= 1) c[1] = 1.0;
    return {t0, std::move(c)};
  }

  Complex basepoint() const { return basepoint_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::size_t order() const { return coeffs_.size() - 1; }
  Complex operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Complex{}; }
  Complex value() const { return coeffs_[0]; }

  /// Evaluates the truncated series at basepoint + tau.
  Complex eval_offset(Complex tau) const {
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * tau + *it;
    return acc;
  }

  Jet truncated(std::size_t order) const {
    std::vector<Complex> c(coeffs_.begin(), coeffs_.begin() + std::min(order, this->order()) + 1);
    return {basepoint_, std::move(c)};
  }

 private:
  Complex basepoint_{};
  std::vector<Complex> coeffs_{Complex{}};
};

namespace detail {
inline std::size_t common_order(const Jet& x, const Jet& y) {
  if (std::abs(x.basepoint() - y.basepoint()) > 1e-14 * (1.0 + std::abs(x.basepoint()))) {
    throw InvalidInput("jet arithmetic: basepoints differ");
  }
  return std::min(x.order(), y.order());
}
}  // namespace detail

inline Jet operator+(const Jet& x, const Jet& y) {
  const std::size_t k = detail::common_order(x, y);
  std::vector<Complex> c(k + 1);
  for (std::size_t i = 0; i <= k; ++i) c[i] = x[i] + y[i];
  return {x.basepoint(), std::move(c)};
}

inline Jet operator-(const Jet& x, const Jet& y) {
  const std::size_t k = detail::common_order(x, y);
  std::vector<Complex> c(k + 1);
  for (std::size_t i = 0; i <= k; ++i) c[i] = x[i] - y[i];
  return {x.basepoint(), std::move(c)};
}

inline Jet operator*(Complex s, const Jet& x) {
  std::vector<Complex> c = x.coeffs();
  for (Complex& z : c) z *= s;
  return {x.basepoint(), std::move(c)};
}

inline Jet operator*(const Jet& x, const Jet& y) {
  const std::size_t k = detail::common_order(x, y);
  std::vector<Complex> c(k + 1);
  for (std::size_t n = 0; n <= k; ++n) {
    for (std::size_t i = 0; i <= n; ++i) c[n] += x[i] * y[n - i];
  }
  return {x.basepoint(), std::move(c)};
}

inline Jet operator/(const Jet& x, const Jet& y) {
  const std::size_t k = detail::common_order(x, y);
  if (y[0] == Complex{}) throw SingularJetError("jet division: divisor vanishes at basepoint");
  std::vector<Complex> c(k + 1);
  for (std::size_t n = 0; n <= k; ++n) {
    Complex acc = x[n];
    for (std::size_t i = 1; i <= n; ++i) acc -= y[i] * c[n - i];
    c[n] = acc / y[0];
  }
  return {x.basepoint(), std::move(c)};
}

/// True when c0 is off the principal branch cut (-inf, 0].
inline bool in_principal_domain(Complex c0) { return !(c0.imag() == 0.0 && c0.real() <= 0.0); }

/// Square root with the constant term fixed to `seed` (seed^2 must equal c0).
/// Without a seed the principal root is used when it is unambiguous.
inline Jet sqrt(const Jet& x, std::optional<Complex> seed = std::nullopt) {
  const Complex c0 = x[0];
  if (c0 == Complex{}) throw SingularJetError("jet sqrt: value vanishes at basepoint");
  Complex root;
  if (seed) {
    if (std::abs(*seed * *seed - c0) > 1e-8 * std::abs(c0)) {
      throw InvalidInput("jet sqrt: seed is not a square root of the constant term");
    }
    root = *seed;
  } else {
    if (!in_principal_domain(c0)) throw BranchAmbiguityError("jet sqrt: branch seed required");
    root = std::sqrt(c0);
  }
  const std::size_t k = x.order();
  std::vector<Complex> c(k + 1);
  c[0] = root;
  for (std::size_t n = 1; n <= k; ++n) {
    Complex acc = x[n];
    for (std::size_t i = 1; i < n; ++i) acc -= c[i] * c[n - i];
    c[n] = acc / (2.0 * root);
  }
  return {x.basepoint(), std::move(c)};
}

/// f o g.  The jet of f must be based at g(basepoint of g).
inline Jet compose(const Jet& f, const Jet& g) {
  if (std::abs(f.basepoint() - g[0]) > 1e-12 * (1.0 + std::abs(g[0]))) {
    throw InvalidInput("jet compose: outer jet must be based at the inner value");
  }
  const std::size_t k = std::min(f.order(), g.order());
  // delta = g - g(t0) has zero constant term; Horner in delta.
  std::vector<Complex> delta(k + 1);
  for (std::size_t i = 1; i <= k; ++i) delta[i] = g[i];
  const Jet dj(g.basepoint(), delta);
  Jet acc = Jet::constant(g.basepoint(), f[k], k);
  for (std::size_t i = k; i-- > 0;) acc = acc * dj + Jet::constant(g.basepoint(), f[i], k);
  return acc;
}

inline Jet derive(const Jet& x) {
  if (x.order() == 0) return Jet::constant(x.basepoint(), Complex{}, 0);
  std::vector<Complex> c(x.order());
  for (std::size_t i = 1; i <= x.order(); ++i) c[i - 1] = static_cast<double>(i) * x[i];
  return {x.basepoint(), std::move(c)};
}

/// Jet of a polynomial with ascending coefficients, re-expanded at t0.
inline Jet polynomial_jet(const std::vector<Complex>& ascending, Complex t0, std::size_t order) {
  Jet acc = Jet::constant(t0, Complex{}, order);
  const Jet t = Jet::variable(t0, order);
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) {
    acc = acc * t + Jet::constant(t0, *it, order);
  }
  return acc;
}

inline Jet mobius_jet(const MobiusMap& m, Complex t0, std::size_t order) {
  const Mat2& x = m.mat();
  const Jet t = Jet::variable(t0, order);
  return (x.a * t + Jet::constant(t0, x.b, order)) / (x.c * t + Jet::constant(t0, x.d, order));
}

inline Jet exp_jet(Complex t0, std::size_t order) {
  std::vector<Complex> c(order + 1);
  Complex term = std::exp(t0);
  for (std::size_t k = 0; k <= order; ++k) {
    c[k] = term;
    term /= static_cast<double>(k + 1);
  }
  return {t0, std::move(c)};
}

/// {f, t} = f'''/f' - 3/2 (f''/f')^2 at the basepoint.
///
/// Note the factor 2 convention used throughout the library: a developing map
/// z with {z, t} = 2 q gives solutions of u'' + q u = 0.
inline Complex schwarzian(const Jet& f) {
  if (f.order() < 3) throw InvalidInput("schwarzian: jet order must be at least 3");
  const Complex c1 = f[1];
  if (c1 == Complex{}) throw CriticalPointError("schwarzian: f'(t0) = 0");
  const Complex ratio = f[2] / c1;
  return 6.0 * f[3] / c1 - 6.0 * ratio * ratio;
}

struct JetPair {
  Jet v;
  Jet u;
};

/// v = z / sqrt(z'), u = 1 / sqrt(z').  `seed` picks sqrt(z'(t0)).
inline JetPair pair_from_z(const Jet& z, std::optional<Complex> seed = std::nullopt) {
  if (z.order() < 1) throw InvalidInput("pair_from_z: jet order must be at least 1");
  const Jet dz = derive(z);
  if (dz[0] == Complex{}) throw CriticalPointError("pair_from_z: z'(t0) = 0");
  const Jet root = sqrt(dz, seed);
  const Jet one = Jet::constant(z.basepoint(), 1.0, root.order());
  const Jet u = one / root;
  return {z.truncated(u.order()) * u, u};
}

inline Jet z_from_pair(const JetPair& p) { return p.v / p.u; }

/// |c0| + |c1 - 1| + |c2| for a jet expanded at t0; zero iff
/// z = (t - t0) + O((t - t0)^3).
inline double normalization_residual(const Jet& z) {
  if (z.order() < 2) throw InvalidInput("normalization_residual: jet order must be at least 2");
  return std::abs(z[0]) + std::abs(z[1] - 1.0) + std::abs(z[2]);
}

}  // namespace monodromy

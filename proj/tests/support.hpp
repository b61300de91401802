#pragma once

// Seeded random generators shared by the test binaries.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "monodromy.hpp"

namespace testing_support {

using monodromy::Complex;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  Complex complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
  Complex in_annulus(double r0, double r1) {
    return std::polar(uniform(r0, r1), uniform(0.0, 2.0 * std::numbers::pi));
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  monodromy::SL2Matrix sl2(double scale = 1.0) {
    for (;;) {
      const Complex a = complex(scale), b = complex(scale), c = complex(scale), d = complex(scale);
      const Complex det = a * d - b * c;
      if (std::abs(det) > 0.1) return monodromy::SL2Matrix::normalize({a, b, c, d});
    }
  }

  monodromy::MobiusMap mobius(double scale = 1.0) { return monodromy::MobiusMap(sl2(scale)); }

  /// sum_i a_i / (t - p_i) + b_0, poles in the annulus r0 <= |p| <= r1.
  monodromy::RationalFn rational(int poles, double r0, double r1, double coeff = 1.0) {
    using monodromy::Polynomial;
    std::vector<Complex> roots;
    for (int i = 0; i < poles; ++i) roots.push_back(in_annulus(r0, r1));
    Polynomial denom({1.0});
    for (Complex p : roots) denom = multiply(denom, Polynomial({-p, 1.0}));
    Polynomial num = multiply(Polynomial({complex(coeff)}), denom);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      Polynomial term({complex(coeff)});
      for (std::size_t k = 0; k < roots.size(); ++k) {
        if (k != i) term = multiply(term, Polynomial({-roots[k], 1.0}));
      }
      num = add(num, term);
    }
    return {num, denom};
  }

  /// Polyline with `segments` pieces inside |t| <= radius.
  monodromy::Path polyline(int segments, double radius) {
    Complex cur = in_annulus(0.0, radius);
    const Complex start = cur;
    std::vector<monodromy::Segment> segs;
    for (int i = 0; i < segments; ++i) {
      const Complex next = in_annulus(0.0, radius);
      segs.push_back(monodromy::LineSegment{cur, next});
      cur = next;
    }
    return {start, segs};
  }

  static monodromy::Polynomial multiply(const monodromy::Polynomial& x, const monodromy::Polynomial& y) {
    if (x.is_zero() || y.is_zero()) return {};
    std::vector<Complex> out(x.coeffs().size() + y.coeffs().size() - 1);
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
      for (std::size_t j = 0; j < y.coeffs().size(); ++j) out[i + j] += x.coeffs()[i] * y.coeffs()[j];
    }
    return monodromy::Polynomial(out);
  }

  static monodromy::Polynomial add(const monodromy::Polynomial& x, const monodromy::Polynomial& y) {
    std::vector<Complex> out(std::max(x.coeffs().size(), y.coeffs().size()));
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) out[i] += x.coeffs()[i];
    for (std::size_t i = 0; i < y.coeffs().size(); ++i) out[i] += y.coeffs()[i];
    return monodromy::Polynomial(out);
  }

 private:
  std::mt19937_64 gen_;
};

/// Sample magnitudes 10^-1, 10^-1.5, ..., 10^-3.
inline std::vector<double> order_grid() {
  return {1e-1, std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3};
}

}  // namespace testing_support

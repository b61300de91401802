#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/jet.hpp"

namespace monodromy {

/// Polynomial with ascending coefficients c0 + c1 t + ...
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> ascending) : c_(std::move(ascending)) { trim(); }

  const std::vector<Complex>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  Complex operator()(Complex t) const {
    Complex acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  Polynomial derivative() const {
    std::vector<Complex> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(static_cast<double>(i) * c_[i]);
    return Polynomial(std::move(d));
  }

  Jet jet(Complex t0, std::size_t order) const { return polynomial_jet(c_, t0, order); }

  /// Roots via companion-matrix eigenvalues, each polished by Newton steps.
  std::vector<Complex> roots() const {
    std::vector<Complex> out;
    if (degree() < 1) return out;
    const int n = degree();
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c_[i] / c_[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    const Polynomial dp = derivative();
    for (int i = 0; i < n; ++i) {
      Complex z = solver.eigenvalues()(i);
      for (int it = 0; it < 3; ++it) {
        const Complex slope = dp(z);
        if (slope == Complex{}) break;
        const Complex step = (*this)(z) / slope;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        z -= step;
      }
      out.push_back(z);
    }
    return out;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Complex{}) c_.pop_back();
  }
  std::vector<Complex> c_;
};

/// num(t) / den(t) with the denominator roots cached as poles.
class RationalFn {
 public:
  RationalFn() : num_(), den_(std::vector<Complex>{1.0}) {}
  RationalFn(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw InvalidInput("RationalFn: denominator is identically zero");
    poles_ = den_.roots();
  }

  static RationalFn polynomial(std::vector<Complex> ascending) {
    return {Polynomial(std::move(ascending)), Polynomial({1.0})};
  }
  static RationalFn constant(Complex c) { return polynomial({c}); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  const std::vector<Complex>& poles() const { return poles_; }
  bool is_zero() const { return num_.is_zero(); }

  Complex operator()(Complex t) const { return num_(t) / den_(t); }

  Jet jet(Complex t0, std::size_t order) const { return num_.jet(t0, order) / den_.jet(t0, order); }

 private:
  Polynomial num_;
  Polynomial den_;
  std::vector<Complex> poles_;
};

}  // namespace monodromy

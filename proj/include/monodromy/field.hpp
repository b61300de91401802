#pragma once

// Coefficient fields Q(t, h) = r(t) + sum_j h_j q_j(t).

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/rational.hpp"

namespace monodromy {

/// Black-box analytic function with an explicit list of known singularities.
struct AnalyticFn {
  std::function<Complex(Complex)> eval;
  std::vector<Complex> singularities;
  std::string label;
};

/// One component of a coefficient field.
class FieldTerm {
 public:
  FieldTerm() : impl_(RationalFn{}) {}
  FieldTerm(RationalFn f) : impl_(std::move(f)) {}  // NOLINT(google-explicit-constructor)
  FieldTerm(AnalyticFn f) : impl_(std::move(f)) {}  // NOLINT(google-explicit-constructor)

  static FieldTerm constant(Complex c) { return RationalFn::constant(c); }
  static FieldTerm zero() { return RationalFn{}; }

  Complex operator()(Complex t) const {
    if (const auto* r = std::get_if<RationalFn>(&impl_)) return (*r)(t);
    return std::get<AnalyticFn>(impl_).eval(t);
  }

  const std::vector<Complex>& poles() const {
    if (const auto* r = std::get_if<RationalFn>(&impl_)) return r->poles();
    return std::get<AnalyticFn>(impl_).singularities;
  }

  /// Identically zero (only decidable for rational terms).
  bool is_zero() const {
    const auto* r = std::get_if<RationalFn>(&impl_);
    return r != nullptr && r->is_zero();
  }

  const RationalFn* rational() const { return std::get_if<RationalFn>(&impl_); }

 private:
  std::variant<RationalFn, AnalyticFn> impl_;
};

class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(FieldTerm base, std::vector<FieldTerm> basis)
      : base_(std::move(base)), basis_(std::move(basis)) {}

  std::size_t dimension() const { return basis_.size(); }
  const FieldTerm& base() const { return base_; }
  const FieldTerm& basis(std::size_t j) const { return basis_.at(j); }
  const std::vector<FieldTerm>& basis_terms() const { return basis_; }

  void check_parameter(std::span<const Complex> h) const {
    if (h.size() != basis_.size()) {
      throw InvalidInput("parameter dimension " + std::to_string(h.size()) +
                         " does not match basis size " + std::to_string(basis_.size()));
    }
  }

  /// r(t) + sum_j h_j q_j(t).
  Complex operator()(Complex t, std::span<const Complex> h) const {
    check_parameter(h);
    Complex acc = base_(t);
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      if (h[j] != Complex{}) acc += h[j] * basis_[j](t);
    }
    return acc;
  }

  std::vector<Complex> zero_parameter() const { return std::vector<Complex>(basis_.size()); }

  /// Singularities of Q(., h): those of r and of every q_j with h_j != 0.
  std::vector<Complex> poles(std::span<const Complex> h) const {
    check_parameter(h);
    std::vector<Complex> out = base_.poles();
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      if (h[j] != Complex{}) out.insert(out.end(), basis_[j].poles().begin(), basis_[j].poles().end());
    }
    return out;
  }

  /// Singularities of r and of every basis element.
  std::vector<Complex> all_poles() const {
    std::vector<Complex> out = base_.poles();
    for (const FieldTerm& q : basis_) out.insert(out.end(), q.poles().begin(), q.poles().end());
    return out;
  }

  bool base_is_entire() const { return base_.poles().empty(); }

  /// Same base, with the basis collapsed into the single element sum_j q_j.
  CoefficientField collapsed() const {
    std::vector<FieldTerm> terms = basis_;
    AnalyticFn sum{[terms](Complex t) {
                     Complex acc{};
                     for (const FieldTerm& q : terms) acc += q(t);
                     return acc;
                   },
                   all_basis_poles(), "sum of basis"};
    return {base_, {FieldTerm(std::move(sum))}};
  }

 private:
  std::vector<Complex> all_basis_poles() const {
    std::vector<Complex> out;
    for (const FieldTerm& q : basis_) out.insert(out.end(), q.poles().begin(), q.poles().end());
    return out;
  }

  FieldTerm base_{};
  std::vector<FieldTerm> basis_;
};

}  // namespace monodromy

#pragma once

// Variational formulas as checkable computations: the monodromy family
// M(h) = Omega_loop(h) M(0), the first variation of the developing map
// z = v/u, and the conjugation identity for the kernel integral under a
// deck transformation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/field.hpp"
#include "monodromy/matrizant.hpp"
#include "monodromy/path.hpp"
#include "monodromy/path_ode.hpp"
#include "monodromy/sl2.hpp"

namespace monodromy {

/// How the series path relates to the group element whose matrix it varies.
enum class FrameKind {
  plane_loop,  // closed loop in a plane domain, chart factor trivial
  deck_path,   // path t0 -> L t0 on the universal cover
};

inline const char* to_string(FrameKind f) {
  return f == FrameKind::plane_loop ? "plane_loop" : "deck_path";
}

struct MonodromyFamily {
  SL2Matrix base{};
  MatrizantSeries series;
  FrameKind frame = FrameKind::plane_loop;

  /// M(h) = Omega(h) M(0); exactly M(0) at h = 0.
  Mat2 operator()(std::span<const Complex> h) const {
    if (std::all_of(h.begin(), h.end(), [](Complex z) { return z == Complex{}; })) {
      if (h.size() != static_cast<std::size_t>(series.d)) {
        throw InvalidInput("MonodromyFamily: parameter dimension does not match");
      }
      return base.mat();
    }
    return evaluate_omega(series, h) * base.mat();
  }
};

inline MonodromyFamily monodromy_family(const CoefficientField& field, const Loop& loop, int order,
                                        const SeriesOptions& opt = {},
                                        const FundamentalPair& frame = FundamentalPair::normalized()) {
  MonodromyFamily fam;
  fam.series = compute_series(field, loop.path(), order, opt, frame);
  fam.base = monodromy_from_pair(fam.series.end_pair, frame);
  fam.frame = FrameKind::plane_loop;
  return fam;
}

/// Least-squares slope of log(y) against log(x); pairs with y <= 0 are skipped.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

inline double max_modulus(std::span<const Complex> h) {
  double m = 0.0;
  for (Complex z : h) m = std::max(m, std::abs(z));
  return m;
}

struct ConvergenceRow {
  std::vector<Complex> h;
  double h_norm = 0.0;
  double error = std::numeric_limits<double>::quiet_NaN();  // ||M_series - M_direct||_F
  double det_residual = 0.0;                                // |det M_series - 1|
  bool direct_failed = false;
  std::string failure;
};

struct ConvergenceReport {
  int order = 0;
  std::vector<ConvergenceRow> rows;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
  double det_fitted_order = std::numeric_limits<double>::quiet_NaN();
  bool degenerate = false;
  bool partial = false;
  bool passes = false;
  static constexpr double kOrderMargin = 0.7;
};

/// Compares the series family against direct monodromy integration at every
/// sampled h and fits the order of the discrepancy.
inline ConvergenceReport verify_monodromy_family(const CoefficientField& field, const Loop& loop,
                                                 int order,
                                                 const std::vector<std::vector<Complex>>& samples,
                                                 const SeriesOptions& opt = {}) {
  ConvergenceReport rep;
  rep.order = order;
  const MonodromyFamily fam = monodromy_family(field, loop, order, opt);
  const double scale = std::max(1.0, fam.base.mat().frobenius());
  std::vector<double> xs, errs, dets;
  for (const auto& h : samples) {
    ConvergenceRow row;
    row.h = h;
    row.h_norm = max_modulus(h);
    const Mat2 series_m = fam(h);
    row.det_residual = std::abs(series_m.det() - 1.0);
    try {
      const Mat2 direct = monodromy(field, h, loop, opt.integration).mat();
      row.error = (series_m - direct).frobenius();
      xs.push_back(row.h_norm);
      errs.push_back(row.error);
      dets.push_back(row.det_residual);
    } catch (const Error& e) {
      row.direct_failed = true;
      row.failure = e.what();
      rep.partial = true;
    }
    rep.rows.push_back(std::move(row));
  }
  const bool trivial_basis = std::all_of(field.basis_terms().begin(), field.basis_terms().end(),
                                         [](const FieldTerm& q) { return q.is_zero(); });
  const double floor = 1e3 * opt.integration.tol * scale;
  const bool at_floor = std::all_of(errs.begin(), errs.end(), [&](double e) { return e <= floor; });
  if (trivial_basis || (at_floor && !errs.empty())) {
    rep.degenerate = true;
    return rep;
  }
  rep.fitted_order = loglog_slope(xs, errs);
  rep.det_fitted_order = loglog_slope(xs, dets);
  rep.passes = !rep.partial && std::isfinite(rep.fitted_order) &&
               rep.fitted_order >= order + ConvergenceReport::kOrderMargin;
  return rep;
}

/// Same audit for an open path: ||(v, u)_series(h) - (v, u)_direct(h)|| at the
/// endpoint, where the series values are Omega(h) applied to the unperturbed
/// pair.  det_residual holds |det Omega(h) - 1|.
inline ConvergenceReport verify_perturbed_pair(const CoefficientField& field, const Path& path,
                                               int order,
                                               const std::vector<std::vector<Complex>>& samples,
                                               const SeriesOptions& opt = {}) {
  ConvergenceReport rep;
  rep.order = order;
  const MatrizantSeries series = compute_series(field, path, order, opt);
  const double scale = std::max({1.0, std::abs(series.end_pair.v), std::abs(series.end_pair.u)});
  std::vector<double> xs, errs, dets;
  for (const auto& h : samples) {
    ConvergenceRow row;
    row.h = h;
    row.h_norm = max_modulus(h);
    const PerturbedValues approx = perturbed_pair(series, h);
    row.det_residual = std::abs(evaluate_omega(series, h).det() - 1.0);
    try {
      const FundamentalPair direct = integrate_pair(field, h, path, opt.integration).end;
      row.error = std::hypot(std::abs(approx.v - direct.v), std::abs(approx.u - direct.u));
      xs.push_back(row.h_norm);
      errs.push_back(row.error);
      dets.push_back(row.det_residual);
    } catch (const Error& e) {
      row.direct_failed = true;
      row.failure = e.what();
      rep.partial = true;
    }
    rep.rows.push_back(std::move(row));
  }
  const bool trivial_basis = std::all_of(field.basis_terms().begin(), field.basis_terms().end(),
                                         [](const FieldTerm& q) { return q.is_zero(); });
  const double floor = 1e3 * opt.integration.tol * scale;
  const bool at_floor = std::all_of(errs.begin(), errs.end(), [&](double e) { return e <= floor; });
  if (trivial_basis || (at_floor && !errs.empty())) {
    rep.degenerate = true;
    return rep;
  }
  rep.fitted_order = loglog_slope(xs, errs);
  rep.det_fitted_order = loglog_slope(xs, dets);
  rep.passes = !rep.partial && std::isfinite(rep.fitted_order) &&
               rep.fitted_order >= order + ConvergenceReport::kOrderMargin;
  return rep;
}

/// The developing map z = v/u of the pair normalized at the path basepoint,
/// at the path endpoint, by direct integration.
inline Complex developing_value(const CoefficientField& field, std::span<const Complex> h,
                                const Path& path, const IntegrationOptions& opt = {}) {
  const FundamentalPair p = integrate_pair(field, h, path, opt).end;
  if (std::abs(p.u) <= 1e-12 * (1.0 + std::abs(p.v))) {
    throw PoleOfZError("developing map has a pole at the path endpoint");
  }
  return p.v / p.u;
}

struct FirstVariation {
  Complex z0{};
  std::vector<Complex> coefficients;  // dz/dh_i at h = 0
};

/// c_i = int_{t0}^{t} q_i(s) (v(s) - z(t, 0) u(s))^2 ds.
///
/// Integrated as q_i v^2, q_i u v and q_i u^2 alongside the pair, then
/// combined with z(t, 0) at the endpoint.
inline FirstVariation first_variation_z(const CoefficientField& field, const Path& path,
                                        const IntegrationOptions& opt = {}) {
  check_clearance(field.all_poles(), path, opt);
  const std::size_t d = field.dimension();
  const std::vector<Complex> h0 = field.zero_parameter();
  ode::State y(4 + 3 * d);
  y[0] = 1.0;
  y[3] = 1.0;
  auto rhs = [&](Complex t, const ode::State& s, ode::State& ds) {
    const Complex r = field(t, h0);
    ds[0] = s[1];
    ds[1] = -r * s[0];
    ds[2] = s[3];
    ds[3] = -r * s[2];
    const Complex u = s[0], v = s[2];
    for (std::size_t i = 0; i < d; ++i) {
      const Complex q = field.basis(i)(t);
      ds[4 + 3 * i] = q * v * v;
      ds[5 + 3 * i] = q * u * v;
      ds[6 + 3 * i] = q * u * u;
    }
  };
  integrate_along(path, rhs, y, opt, [](Complex, const ode::State&) {});
  const Complex u = y[0], v = y[2];
  if (std::abs(u) <= 1e-12 * (1.0 + std::abs(v))) {
    throw PoleOfZError("first_variation_z: z = v/u has a pole at the endpoint");
  }
  FirstVariation out;
  out.z0 = v / u;
  for (std::size_t i = 0; i < d; ++i) {
    out.coefficients.push_back(y[4 + 3 * i] - 2.0 * out.z0 * y[5 + 3 * i] +
                               out.z0 * out.z0 * y[6 + 3 * i]);
  }
  return out;
}

/// int M_j along `path` for the pair of the base field r starting from `initial`.
inline Mat2 kernel_integral(const CoefficientField& field, std::size_t j, const Path& path,
                            const FundamentalPair& initial, const IntegrationOptions& opt = {}) {
  if (j >= field.dimension()) throw InvalidInput("kernel_integral: basis index out of range");
  check_clearance(field.all_poles(), path, opt);
  const std::vector<Complex> h0 = field.zero_parameter();
  ode::State y{initial.u, initial.du, initial.v, initial.dv, 0.0, 0.0, 0.0, 0.0};
  auto rhs = [&](Complex t, const ode::State& s, ode::State& ds) {
    const Complex r = field(t, h0);
    ds[0] = s[1];
    ds[1] = -r * s[0];
    ds[2] = s[3];
    ds[3] = -r * s[2];
    const Mat2 m = kernel(field.basis(j)(t), FundamentalPair{s[2], s[3], s[0], s[1]});
    ds[4] = m.a;
    ds[5] = m.b;
    ds[6] = m.c;
    ds[7] = m.d;
  };
  integrate_along(path, rhs, y, opt, [](Complex, const ode::State&) {});
  return {y[4], y[5], y[6], y[7]};
}

/// || [A0(Lt) - A0(Lt0)] - M_L A0(t) M_L^{-1} ||_F for the kernel of basis
/// element j, where A0 is the kernel integral from t0 of the pair normalized
/// at t0.
///
/// `base` runs t0 -> t, `connecting` runs t0 -> L t0; the image segment is
/// taken as the straight line L t0 -> L t, which is homotopic to L(base) when
/// the field is holomorphic on a convex region containing both (the disc).
/// `m_l` is the automorphy matrix of the pair for L.
inline double conjugation_identity_residual(const CoefficientField& field, std::size_t j,
                                            const MobiusMap& l, std::optional<Mat2> m_l,
                                            const Path& base, const Path& connecting,
                                            const IntegrationOptions& opt = {}) {
  const bool is_identity = psl2_distance(l.mat(), Mat2::identity()) <= 1e-14;
  if (is_identity) return 0.0;
  if (!m_l) throw UnsupportedContextError("conjugation identity needs the automorphy matrix of L");
  if (std::abs(connecting.basepoint() - base.basepoint()) > 1e-12) {
    throw InvalidInput("conjugation identity: paths must share the basepoint t0");
  }
  const Complex lt0 = l(base.basepoint());
  const Complex lt = l(base.endpoint());
  if (std::abs(connecting.endpoint() - lt0) > 1e-9) {
    throw InvalidInput("conjugation identity: connecting path must end at L t0");
  }
  const std::vector<Complex> h0 = field.zero_parameter();
  const FundamentalPair at_lt0 = integrate_pair(field, h0, connecting, opt).end;
  const Mat2 lhs = kernel_integral(field, j, Path::line(lt0, lt), at_lt0, opt);
  const Mat2 a0 = kernel_integral(field, j, base, FundamentalPair::normalized(), opt);
  const Mat2 rhs = *m_l * a0 * m_l->inverse();
  return (lhs - rhs).frobenius();
}

}  // namespace monodromy

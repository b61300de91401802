#pragma once

// Integration of u'' + Q(t, h) u = 0 along complex paths: normalized
// fundamental pairs, transfer matrices and monodromy matrices.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "monodromy/dop853.hpp"
#include "monodromy/errors.hpp"
#include "monodromy/field.hpp"
#include "monodromy/path.hpp"
#include "monodromy/sl2.hpp"

namespace monodromy {

/// Values and derivatives of the pair (v, u) at one point.
struct FundamentalPair {
  Complex v{0.0}, dv{1.0}, u{1.0}, du{0.0};

  /// Initial data u(t0) = 1, u'(t0) = 0, v(t0) = 0, v'(t0) = 1.
  static FundamentalPair normalized() { return {}; }

  Complex wronskian() const { return u * dv - v * du; }
};

struct IntegrationOptions {
  double tol = 1e-12;
  /// Minimum distance to any singularity, as a fraction of path length.
  double clearance_factor = 1e-3;
  std::size_t max_steps = 2'000'000;
  bool record_mesh = false;
};

struct MeshPoint {
  Complex t{};
  FundamentalPair pair{};
};

struct PairSolution {
  FundamentalPair end{};
  std::vector<MeshPoint> mesh;  // accepted steps, when requested
  std::size_t steps = 0;
};

/// Throws ContourError when the path comes within the clearance of a singularity.
inline void check_clearance(std::span<const Complex> poles, const Path& path,
                            const IntegrationOptions& opt) {
  const double clearance = opt.clearance_factor * std::max(path.length(), 1e-300);
  for (Complex p : poles) {
    const double dist = path.distance_to(p);
    if (dist <= clearance) {
      throw ContourError("path passes within " + std::to_string(dist) + " of singularity (" +
                         std::to_string(p.real()) + ", " + std::to_string(p.imag()) + ")");
    }
  }
}

/// Integrates dy/dt = rhs(t, y) along every segment of `path`.
///
/// `rhs(Complex t, const State& y, State& dydt)`;  `on_step(Complex t, const State& y)`
/// sees every accepted step.
template <class Rhs, class OnStep>
std::size_t integrate_along(const Path& path, Rhs&& rhs, ode::State& y, const IntegrationOptions& opt,
                            OnStep&& on_step) {
  if (opt.tol <= 0.0) throw InvalidInput("integration tolerance must be positive");
  ode::StepperOptions so;
  so.rtol = opt.tol;
  so.atol = opt.tol;
  so.max_steps = opt.max_steps;
  std::size_t steps = 0;
  ode::State dydt(y.size());
  for (const Segment& seg : path.segments()) {
    auto rhs_s = [&](double s, const ode::State& state, ode::State& ds) {
      const Complex t = segment_point(seg, s);
      const Complex speed = segment_tangent(seg, s);
      rhs(t, state, ds);
      for (auto& z : ds) z *= speed;
    };
    auto step_s = [&](double s, const ode::State& state) { on_step(segment_point(seg, s), state); };
    steps += ode::integrate_dop853(rhs_s, y, 0.0, 1.0, so, step_s).accepted;
  }
  return steps;
}

/// Pair solution of u'' + Q(., h) u = 0 from `initial` at the basepoint of `path`.
inline PairSolution integrate_pair_from(const CoefficientField& field, std::span<const Complex> h,
                                        const Path& path, const FundamentalPair& initial,
                                        const IntegrationOptions& opt = {}) {
  const std::vector<Complex> poles = field.poles(h);
  check_clearance(poles, path, opt);
  const std::vector<Complex> hv(h.begin(), h.end());

  // State layout: u, u', v, v'.
  ode::State y{initial.u, initial.du, initial.v, initial.dv};
  PairSolution out;
  auto rhs = [&](Complex t, const ode::State& s, ode::State& ds) {
    const Complex q = field(t, hv);
    ds[0] = s[1];
    ds[1] = -q * s[0];
    ds[2] = s[3];
    ds[3] = -q * s[2];
  };
  auto to_pair = [](const ode::State& s) { return FundamentalPair{s[2], s[3], s[0], s[1]}; };
  if (opt.record_mesh) out.mesh.push_back({path.basepoint(), initial});
  out.steps = integrate_along(path, rhs, y, opt, [&](Complex t, const ode::State& s) {
    if (opt.record_mesh) out.mesh.push_back({t, to_pair(s)});
  });
  out.end = to_pair(y);
  return out;
}

/// The pair normalized at the basepoint of `path`, evaluated at its endpoint.
inline PairSolution integrate_pair(const CoefficientField& field, std::span<const Complex> h,
                                   const Path& path, const IntegrationOptions& opt = {}) {
  return integrate_pair_from(field, h, path, FundamentalPair::normalized(), opt);
}

/// Propagator of (y, y') from the start of `path` to its end:
///
///   [ y(end)  ]   [ u   v  ] [ y(start)  ]
///   [ y'(end) ] = [ u'  v' ] [ y'(start) ]
///
/// where (u, v) is the pair normalized at the start.  Concatenation of paths
/// multiplies transfer matrices on the left.
inline SL2Matrix transfer_matrix(const CoefficientField& field, std::span<const Complex> h,
                                 const Path& path, const IntegrationOptions& opt = {}) {
  const FundamentalPair p = integrate_pair(field, h, path, opt).end;
  return SL2Matrix::unchecked({p.u, p.v, p.du, p.dv});
}

/// [ v  v' ]
/// [ u  u' ]
inline Mat2 wronski_matrix(const FundamentalPair& p) { return {p.v, p.dv, p.u, p.du}; }

/// Monodromy matrix in the (v, u) frame: after continuation around a loop
/// the column (v, u) becomes M (v, u).  For the pair normalized at the
/// basepoint this is S T^T S with S the swap and T the transfer matrix.
inline SL2Matrix monodromy_from_pair(const FundamentalPair& end,
                                     const FundamentalPair& start = FundamentalPair::normalized()) {
  if (start.v == 0.0 && start.dv == 1.0 && start.u == 1.0 && start.du == 0.0) {
    return SL2Matrix::unchecked({end.dv, end.v, end.du, end.u});
  }
  return SL2Matrix::unchecked(wronski_matrix(end) * wronski_matrix(start).inverse());
}

inline SL2Matrix monodromy(const CoefficientField& field, std::span<const Complex> h,
                           const Loop& loop, const IntegrationOptions& opt = {}) {
  return monodromy_from_pair(integrate_pair(field, h, loop.path(), opt).end);
}

}  // namespace monodromy

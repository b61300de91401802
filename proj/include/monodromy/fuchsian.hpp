#pragma once

// Genus-2 laboratory: the regular hyperbolic octagon group, truncated
// Poincare theta series of weight 4, developing maps of u'' + Theta u = 0 on
// the unit disc, and their monodromy homomorphism.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/field.hpp"
#include "monodromy/jet.hpp"
#include "monodromy/path.hpp"
#include "monodromy/path_ode.hpp"
#include "monodromy/rational.hpp"
#include "monodromy/sl2.hpp"
#include "monodromy/variation.hpp"

namespace monodromy::fuchsian {

inline constexpr int kSides = 8;
inline constexpr double kTargetAngle = std::numbers::pi / 4.0;
/// Truncated theta series are only evaluated inside this radius.
inline constexpr double kEvaluationRadius = 0.95;

/// Interior angle of the regular hyperbolic octagon centered at 0 whose
/// vertices sit at Euclidean radius `r` in the unit disc.
inline double vertex_angle(double r) {
  const double big_r = 2.0 * std::atanh(r);
  const double ch = std::cosh(big_r), sh = std::sinh(big_r);
  const double central = 2.0 * std::numbers::pi / kSides;
  const double cosh_side = ch * ch - sh * sh * std::cos(central);
  const double sinh_side = std::sqrt(cosh_side * cosh_side - 1.0);
  const double cos_half = ch * (cosh_side - 1.0) / (sh * sinh_side);
  return 2.0 * std::acos(std::clamp(cos_half, -1.0, 1.0));
}

/// Euclidean circumradius with vertex angle `target`; the angle decreases
/// monotonically from the Euclidean value 3 pi / 4 at r -> 0 to 0 at r -> 1.
inline double solve_circumradius(double target = kTargetAngle) {
  double lo = 1e-6, hi = 1.0 - 1e-12;
  if (!(vertex_angle(lo) > target && vertex_angle(hi) < target)) {
    throw ConstructionError("octagon: target angle not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    (vertex_angle(mid) > target ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  if (std::abs(vertex_angle(r) - target) > 1e-12) throw ConstructionError("octagon: root-find failed");
  return r;
}

/// Rotation z -> e^{i theta} z.
inline MobiusMap rotation(double theta) {
  return MobiusMap(SL2Matrix(std::polar(1.0, theta / 2.0), 0.0, 0.0, std::polar(1.0, -theta / 2.0)));
}

/// Hyperbolic translation of length `length` along the real diameter.
inline MobiusMap real_translation(double length) {
  const double c = std::cosh(length / 2.0), s = std::sinh(length / 2.0);
  return MobiusMap(SL2Matrix(c, s, s, c));
}

struct OctagonGroup {
  double circumradius = 0.0;
  double vertex_angle = 0.0;
  double translation_length = 0.0;
  std::array<Complex, kSides> vertices{};
  /// s_k: translation along the diameter through the midpoints of sides k
  /// and k + 4, mapping side k + 4 onto side k.  Relation:
  /// s0 s1^-1 s2 s3^-1 s0^-1 s1 s2^-1 s3 = 1.
  std::array<MobiusMap, 4> side_pairings{};
  /// Marked generators A1 = s0 s1^-1, B1 = s2 s3^-1 s0^-1, A2 = s2, B2 = s3^-1,
  /// satisfying [A1, B1][A2, B2] = 1.
  std::array<MobiusMap, 4> marked{};

  static constexpr std::array<const char*, 4> kSideLabels{"s0", "s1", "s2", "s3"};
  static constexpr std::array<const char*, 4> kMarkedLabels{"A1", "B1", "A2", "B2"};

  GroupPresentation marked_presentation() const {
    GroupPresentation p;
    for (std::size_t i = 0; i < 4; ++i) {
      p.labels.emplace_back(kMarkedLabels[i]);
      p.generators.push_back(marked[i]);
    }
    Word w = commutator(0, 1);
    const Word w2 = commutator(2, 3);
    w.insert(w.end(), w2.begin(), w2.end());
    p.relators.push_back(std::move(w));
    return p;
  }

  GroupPresentation side_presentation() const {
    GroupPresentation p;
    for (std::size_t i = 0; i < 4; ++i) {
      p.labels.emplace_back(kSideLabels[i]);
      p.generators.push_back(side_pairings[i]);
    }
    p.relators.push_back({{0, 1}, {1, -1}, {2, 1}, {3, -1}, {0, -1}, {1, 1}, {2, -1}, {3, 1}});
    return p;
  }
};

/// | |a|^2 - |c|^2 - 1 | + |d - conj(a)| + |c - conj(b)|: zero iff the
/// representative is in SU(1,1) normal form (up to sign).
inline double disc_preservation_residual(const MobiusMap& m) {
  const Mat2& x = m.mat();
  const double su11 = std::abs(std::norm(x.a) - std::norm(x.c) - 1.0);
  const double same =
      std::abs(x.d - std::conj(x.a)) + std::abs(x.c - std::conj(x.b));
  const double flipped =
      std::abs(x.d + std::conj(x.a)) + std::abs(x.c + std::conj(x.b));
  return su11 + std::min(same, flipped);
}

inline OctagonGroup build_octagon_group() {
  OctagonGroup g;
  g.circumradius = solve_circumradius();
  g.vertex_angle = vertex_angle(g.circumradius);
  const double step = 2.0 * std::numbers::pi / kSides;
  for (int k = 0; k < kSides; ++k) g.vertices[static_cast<std::size_t>(k)] = std::polar(g.circumradius, k * step);
  // Distance from the center to a side midpoint: tanh m = tanh R cos(pi / n).
  const double big_r = 2.0 * std::atanh(g.circumradius);
  const double mid = std::atanh(std::tanh(big_r) * std::cos(std::numbers::pi / kSides));
  g.translation_length = 2.0 * mid;
  const MobiusMap t = real_translation(g.translation_length);
  for (int k = 0; k < 4; ++k) {
    const MobiusMap rot = rotation((k + 0.5) * step);
    g.side_pairings[static_cast<std::size_t>(k)] = rot * t * rot.inverse();
  }
  const auto& s = g.side_pairings;
  g.marked = {s[0] * s[1].inverse(), s[2] * s[3].inverse() * s[0].inverse(), s[2], s[3].inverse()};
  const double residual = relation_residual(g.marked_presentation()).value;
  if (residual > 1e-8) throw ConstructionError("octagon: marked relation residual too large");
  return g;
}

struct GroupElement {
  Word word;  // letters index side pairings
  MobiusMap map;
};

struct GroupEnumeration {
  int max_length = 0;
  bool includes_identity = true;
  std::vector<GroupElement> elements;
};

inline constexpr int kDefaultEnumerationCap = 6;

/// Upper estimate of the ball size for 8 letters (free-group count).
inline double enumeration_estimate(int n) {
  double total = 1.0, sphere = 8.0;
  for (int i = 1; i <= n; ++i, sphere *= 7.0) total += sphere;
  return total;
}

namespace detail {
struct CellHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const {
    return std::hash<std::int64_t>{}(k.first * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(k.second));
  }
};
}  // namespace detail

/// All distinct elements of word length <= n in the side pairings and their
/// inverses.  Breadth-first; within a level, parents in discovery order and
/// letters in the order s0, s0^-1, s1, s1^-1, ...
inline GroupEnumeration enumerate(const OctagonGroup& g, int n, bool include_identity = true,
                                  int cap = kDefaultEnumerationCap) {
  if (n < 0) throw InvalidInput("enumerate: negative length");
  if (n > cap) {
    throw CapExceededError("enumerate: length " + std::to_string(n) + " exceeds cap " +
                           std::to_string(cap) + " (about " +
                           std::to_string(static_cast<long long>(enumeration_estimate(n))) +
                           " elements)");
  }
  std::vector<Letter> letters;
  std::vector<Mat2> letter_mats;
  for (std::size_t k = 0; k < 4; ++k) {
    for (int e : {1, -1}) {
      letters.push_back({k, e});
      const Mat2& m = g.side_pairings[k].mat();
      letter_mats.push_back(e > 0 ? m : m.inverse());
    }
  }

  constexpr double kGrid = 1e5;
  constexpr double kSame = 1e-9;
  using Key = std::pair<std::int64_t, std::int64_t>;
  std::unordered_map<Key, std::vector<std::size_t>, detail::CellHash> cells;
  auto key_of = [&](Complex a) {
    return Key{std::llround(a.real() * kGrid), std::llround(a.imag() * kGrid)};
  };

  std::vector<GroupElement> all;
  std::vector<Mat2> mats;
  auto known = [&](const Mat2& m) {
    for (Complex a : {m.a, -m.a}) {
      const Key k = key_of(a);
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          auto it = cells.find({k.first + dx, k.second + dy});
          if (it == cells.end()) continue;
          for (std::size_t idx : it->second) {
            if (psl2_distance(mats[idx], m) <= kSame * std::max(1.0, m.frobenius())) return true;
          }
        }
      }
    }
    return false;
  };
  auto insert = [&](Word w, const Mat2& m) {
    const MobiusMap map(SL2Matrix::unchecked(m));
    cells[key_of(map.mat().a)].push_back(mats.size());
    mats.push_back(map.mat());
    all.push_back({std::move(w), map});
  };

  insert({}, Mat2::identity());
  std::vector<std::size_t> frontier{0};
  for (int len = 1; len <= n; ++len) {
    std::vector<std::size_t> next;
    for (std::size_t parent : frontier) {
      for (std::size_t li = 0; li < letters.size(); ++li) {
        const Word& pw = all[parent].word;
        if (!pw.empty() && pw.back().generator == letters[li].generator &&
            pw.back().exponent == -letters[li].exponent) {
          continue;
        }
        const Mat2 m = mats[parent] * letter_mats[li];
        if (known(m)) continue;
        Word w = pw;
        w.push_back(letters[li]);
        next.push_back(all.size());
        insert(std::move(w), m);
      }
    }
    frontier = std::move(next);
  }

  GroupEnumeration out;
  out.max_length = n;
  out.includes_identity = include_identity;
  if (!include_identity) all.erase(all.begin());
  out.elements = std::move(all);
  return out;
}

/// Theta(t) = sum_L p(L t) L'(t)^2 over an enumeration of the group.
class ThetaDifferential {
 public:
  ThetaDifferential() = default;
  ThetaDifferential(Polynomial seed, const GroupEnumeration& elements)
      : seed_(std::move(seed)), truncation_(elements.max_length) {
    if (seed_.degree() > 10) throw InvalidInput("theta_series: seed degree must be at most 10");
    mats_.reserve(elements.elements.size());
    for (const auto& e : elements.elements) mats_.push_back(e.map.mat());
  }

  const Polynomial& seed() const { return seed_; }
  int truncation() const { return truncation_; }
  std::size_t terms() const { return mats_.size(); }
  bool is_zero() const { return seed_.is_zero(); }

  Complex operator()(Complex t) const {
    if (std::abs(t) > kEvaluationRadius + 1e-12) {
      throw PreconditionError("theta: evaluation restricted to |t| <= 0.95");
    }
    if (seed_.is_zero()) return Complex{};
    Complex acc{};
    for (const Mat2& m : mats_) {
      const Complex den = m.c * t + m.d;
      const Complex inv = 1.0 / den;
      const Complex w = (m.a * t + m.b) * inv;
      const Complex d2 = inv * inv;
      acc += seed_(w) * d2 * d2;
    }
    return acc;
  }

  /// As a coefficient-field component (shares the element table).
  FieldTerm as_field_term(Complex scale = 1.0) const {
    auto self = std::make_shared<const ThetaDifferential>(*this);
    return AnalyticFn{[self, scale](Complex t) { return scale * (*self)(t); }, {}, "theta"};
  }

 private:
  Polynomial seed_;
  int truncation_ = 0;
  std::vector<Mat2> mats_;
};

inline ThetaDifferential theta_series(const OctagonGroup& g, const Polynomial& seed, int n,
                                      int cap = kDefaultEnumerationCap) {
  return {seed, enumerate(g, n, true, cap)};
}

/// Points of a polar grid inside radius `radius`: `rings` circles of
/// `per_ring` points each (no center point).
inline std::vector<Complex> disc_grid(double radius, int rings, int per_ring) {
  std::vector<Complex> out;
  for (int i = 1; i <= rings; ++i) {
    const double r = radius * i / rings;
    for (int k = 0; k < per_ring; ++k) {
      out.push_back(std::polar(r, 2.0 * std::numbers::pi * (k + 0.5 * (i % 2)) / per_ring));
    }
  }
  return out;
}

/// sup over `grid` of (1 - |t|^2)^2 |Theta(t)|.
inline double weighted_sup_norm(const ThetaDifferential& theta, const std::vector<Complex>& grid) {
  double best = 0.0;
  for (Complex t : grid) {
    const double w = 1.0 - std::norm(t);
    best = std::max(best, w * w * std::abs(theta(t)));
  }
  return best;
}

/// max over generators L and grid points t (with L t inside the evaluation
/// radius) of |Theta(L t) L'(t)^2 - Theta(t)|.
inline double automorphy_residual(const ThetaDifferential& theta,
                                  const std::vector<MobiusMap>& generators,
                                  const std::vector<Complex>& grid) {
  double worst = 0.0;
  for (const MobiusMap& l : generators) {
    for (Complex t : grid) {
      const Complex lt = l(t);
      if (std::abs(lt) > kEvaluationRadius) continue;
      const Complex dl = l.derivative(t);
      worst = std::max(worst, std::abs(theta(lt) * dl * dl - theta(t)));
    }
  }
  return worst;
}

/// |f(c) - mean of f over the circle |t - c| = rho|, trapezoid rule with
/// `samples` nodes.  Vanishes (spectrally) for holomorphic f.
template <class F>
double circle_mean_residual(const F& f, Complex center, double rho, int samples = 64) {
  Complex mean{};
  for (int k = 0; k < samples; ++k) {
    mean += f(center + std::polar(rho, 2.0 * std::numbers::pi * k / samples));
  }
  mean /= static_cast<double>(samples);
  return std::abs(f(center) - mean);
}

/// Mobius map sending (z1, z2, z3) to (0, 1, infinity), unnormalized.
inline Mat2 cross_ratio_matrix(Complex z1, Complex z2, Complex z3) {
  return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}

/// The Mobius map with z_i -> w_i, i = 1..3.
inline MobiusMap fit_mobius(const std::array<Complex, 3>& z, const std::array<Complex, 3>& w) {
  auto distinct = [](const std::array<Complex, 3>& p) {
    const double scale = 1.0 + std::abs(p[0]) + std::abs(p[1]) + std::abs(p[2]);
    const double tol = 1e-12 * scale;
    return std::abs(p[0] - p[1]) > tol && std::abs(p[1] - p[2]) > tol && std::abs(p[0] - p[2]) > tol;
  };
  if (!distinct(z) || !distinct(w)) throw FitError("fit_mobius: degenerate three-point configuration");
  const Mat2 fz = cross_ratio_matrix(z[0], z[1], z[2]);
  const Mat2 fw = cross_ratio_matrix(w[0], w[1], w[2]);
  return MobiusMap(SL2Matrix::normalize(fw.inverse() * fz));
}

/// sqrt(L'(t)) continued along `path` from `seed` at its basepoint; each step's
/// branch is chosen closest to the jet prediction from the previous point.
inline Complex continue_sqrt_derivative(const MobiusMap& l, const Path& path, Complex seed,
                                        int steps_per_segment = 64) {
  const Complex d0 = l.derivative(path.basepoint());
  if (std::abs(seed * seed - d0) > 1e-10 * std::abs(d0)) {
    throw InvalidInput("continue_sqrt_derivative: seed is not a square root of L'(t0)");
  }
  Complex prev_t = path.basepoint();
  Complex root = seed;
  for (const Segment& seg : path.segments()) {
    for (int i = 1; i <= steps_per_segment; ++i) {
      const Complex t = segment_point(seg, static_cast<double>(i) / steps_per_segment);
      const Jet dl = derive(mobius_jet(l, prev_t, 4));
      const Complex predicted = sqrt(dl, root).eval_offset(t - prev_t);
      const Complex cand = std::sqrt(l.derivative(t));
      root = std::abs(cand - predicted) <= std::abs(-cand - predicted) ? cand : -cand;
      prev_t = t;
    }
  }
  return root;
}

/// xi_L(t) = 1 / (c t + d) for the SL2 representative of L: a square root of
/// L'(t), holomorphic wherever L is.
inline Complex xi_from_rep(const Mat2& l, Complex t) { return 1.0 / (l.c * t + l.d); }

/// Three sample points around `center`: the center and two points offset
/// perpendicular to the radius, so all share nearly the same modulus.
inline std::array<Complex, 3> sample_cluster(Complex center, double delta = 0.05) {
  if (std::abs(center) < 1e-3) return {center, center + delta, center + Complex(0.0, delta)};
  const Complex normal = Complex(0.0, delta) * center / std::abs(center);
  return {center, center + normal, center - normal};
}

/// The hyperbolic midpoint of 0 and L^-1(0).  It is equidistant from 0 and
/// L^-1(0), so |t| = |L t|, and has the least modulus among such points.
inline Complex symmetric_basepoint(const MobiusMap& l) {
  const Complex p = l.inverse()(Complex{});
  const double rho = std::abs(p);
  if (rho < 1e-14) return Complex{};
  const double dist = 2.0 * std::atanh(rho);
  return p / rho * std::tanh(dist / 4.0);
}

/// The developing map z = v/u of u'' + q u = 0 for the pair normalized at t0,
/// continued along straight lines inside the disc.
class DevelopingMap {
 public:
  DevelopingMap(const FieldTerm& q, Complex t0, IntegrationOptions opt = {})
      : field_(q, {}), t0_(t0), opt_(opt) {}

  Complex basepoint() const { return t0_; }

  FundamentalPair pair(Complex t) const {
    if (std::abs(t) > kEvaluationRadius) {
      throw PreconditionError("developing map: point leaves the evaluation disc");
    }
    if (t == t0_) return FundamentalPair::normalized();
    return integrate_pair(field_, std::span<const Complex>{}, Path::line(t0_, t), opt_).end;
  }

  Complex operator()(Complex t) const {
    const FundamentalPair p = pair(t);
    if (std::abs(p.u) <= 1e-12 * (1.0 + std::abs(p.v))) throw PoleOfZError("developing map pole");
    return p.v / p.u;
  }

 private:
  CoefficientField field_;
  Complex t0_;
  IntegrationOptions opt_;
};

struct DevelopingMonodromy {
  MobiusMap rho;                   // three-point fit route
  std::optional<Mat2> automorphy;  // M from (v, u)(L t) = xi_L(t) M (v, u)(t)
  double route_discrepancy = std::numeric_limits<double>::quiet_NaN();
  std::array<Complex, 3> samples{};
};

/// Automorphy matrix M with (v, u)(L t) = xi_L(t) M (v, u)(t), from the pair at
/// t and at L t; xi_L(t) = 1/(c t + d) and xi'/xi = -c xi.
inline Mat2 automorphy_matrix(const MobiusMap& l, Complex t, const FundamentalPair& at_t,
                              const FundamentalPair& at_lt) {
  const Complex xi = xi_from_rep(l.mat(), t);
  const Complex dl = xi * xi;
  const Complex log_dxi = -l.mat().c * xi;
  const Mat2 lhs{at_lt.v, dl * at_lt.dv - log_dxi * at_lt.v, at_lt.u,
                 dl * at_lt.du - log_dxi * at_lt.u};
  return lhs * (1.0 / xi) * wronski_matrix(at_t).inverse();
}

/// rho(L) with z(L t) = rho(L) z(t), fitted on three samples around `center`
/// (default: the symmetric axis point of L); cross-checked against the
/// matrix of the pair's automorphy at the first sample.
inline DevelopingMonodromy developing_monodromy(const DevelopingMap& z, const MobiusMap& l,
                                                std::optional<Complex> center = std::nullopt) {
  DevelopingMonodromy out;
  out.samples = sample_cluster(center.value_or(symmetric_basepoint(l)));
  std::array<Complex, 3> zs{}, ws{};
  std::array<FundamentalPair, 2> first{};
  for (std::size_t i = 0; i < 3; ++i) {
    const FundamentalPair a = z.pair(out.samples[i]);
    const FundamentalPair b = z.pair(l(out.samples[i]));
    if (std::abs(a.u) <= 1e-12 * (1.0 + std::abs(a.v)) || std::abs(b.u) <= 1e-12 * (1.0 + std::abs(b.v))) {
      throw PoleOfZError("developing_monodromy: sample at a pole of z");
    }
    zs[i] = a.v / a.u;
    ws[i] = b.v / b.u;
    if (i == 0) first = {a, b};
  }
  out.rho = fit_mobius(zs, ws);
  const Mat2 m = automorphy_matrix(l, out.samples[0], first[0], first[1]);
  out.automorphy = m;
  out.route_discrepancy = psl2_distance(MobiusMap(SL2Matrix::normalize(m)).mat(), out.rho.mat());
  return out;
}

/// Conjugation residual of the kernel integral for a base differential r and
/// perturbation direction q, both automorphic for L.  The pair is normalized
/// at t0; M_L is its automorphy matrix at t0.
inline double conjugation_residual(const FieldTerm& r, const FieldTerm& q, const MobiusMap& l,
                                   Complex t0, Complex t, const IntegrationOptions& opt = {}) {
  for (Complex p : {t0, t, l(t0), l(t)}) {
    if (std::abs(p) > kEvaluationRadius) {
      throw PreconditionError("conjugation_residual: point leaves the evaluation disc");
    }
  }
  const CoefficientField field(r, {q});
  const Path connecting = Path::line(t0, l(t0));
  const FundamentalPair at_lt0 =
      integrate_pair(field, std::vector<Complex>{0.0}, connecting, opt).end;
  const Mat2 m = automorphy_matrix(l, t0, FundamentalPair::normalized(), at_lt0);
  return conjugation_identity_residual(field, 0, l, m, Path::line(t0, t), connecting, opt);
}

}  // namespace monodromy::fuchsian

#pragma once

// SL(2,C) / PSL(2,C) algebra, group presentations, Koebe signatures.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "monodromy/errors.hpp"

namespace monodromy {

using Complex = std::complex<double>;

/// Plain 2x2 complex matrix, row-major.  No determinant constraint.
struct Mat2 {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static constexpr Mat2 identity() { return {}; }
  static constexpr Mat2 zero() { return {Complex{}, Complex{}, Complex{}, Complex{}}; }

  Complex det() const { return a * d - b * c; }
  Complex trace() const { return a + d; }

  bool finite() const {
    auto ok = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return ok(a) && ok(b) && ok(c) && ok(d);
  }

  double frobenius() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  }

  Mat2 inverse() const {
    const Complex det_value = det();
    return {d / det_value, -b / det_value, -c / det_value, a / det_value};
  }

  Mat2& operator+=(const Mat2& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    d += o.d;
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    d -= o.d;
    return *this;
  }
  Mat2& operator*=(Complex s) {
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    return *this;
  }

  friend Mat2 operator+(Mat2 x, const Mat2& y) { return x += y; }
  friend Mat2 operator-(Mat2 x, const Mat2& y) { return x -= y; }
  friend Mat2 operator-(const Mat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }
  friend Mat2 operator*(Mat2 x, Complex s) { return x *= s; }
  friend Mat2 operator*(Complex s, Mat2 x) { return x *= s; }
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;

  /// Matrix times column vector (top, bottom).
  std::array<Complex, 2> apply(Complex top, Complex bottom) const {
    return {a * top + b * bottom, c * top + d * bottom};
  }
};

inline double frobenius_distance(const Mat2& x, const Mat2& y) { return (x - y).frobenius(); }

/// Frobenius distance in PSL2: min over the two sign lifts.
inline double psl2_distance(const Mat2& x, const Mat2& y) {
  return std::min((x - y).frobenius(), (x + y).frobenius());
}

inline constexpr double kDefaultDetTolerance = 1e-10;

/// 2x2 complex matrix of unit determinant.
class SL2Matrix {
 public:
  SL2Matrix() = default;

  /// Checks |det - 1| <= tol; throws InvalidInput otherwise.
  explicit SL2Matrix(const Mat2& m, double det_tol = kDefaultDetTolerance) : m_(m) {
    if (!m.finite()) throw InvalidInput("SL2Matrix: non-finite entries");
    if (std::abs(m.det() - 1.0) > det_tol) {
      throw InvalidInput("SL2Matrix: |det - 1| exceeds tolerance");
    }
  }

  SL2Matrix(Complex a, Complex b, Complex c, Complex d, double det_tol = kDefaultDetTolerance)
      : SL2Matrix(Mat2{a, b, c, d}, det_tol) {}

  /// Rescales any invertible matrix to determinant one (principal square root).
  static SL2Matrix normalize(const Mat2& raw) {
    if (!raw.finite()) throw InvalidInput("normalize: non-finite entries");
    const Complex det_value = raw.det();
    if (det_value == Complex{}) throw InvalidInput("normalize: singular matrix");
    SL2Matrix out;
    out.m_ = raw * (1.0 / std::sqrt(det_value));
    return out;
  }

  /// Skips the determinant check.  For values produced by numerical propagation
  /// whose determinant is audited separately.
  static SL2Matrix unchecked(const Mat2& m) {
    SL2Matrix out;
    out.m_ = m;
    return out;
  }

  const Mat2& mat() const { return m_; }
  Complex a() const { return m_.a; }
  Complex b() const { return m_.b; }
  Complex c() const { return m_.c; }
  Complex d() const { return m_.d; }
  Complex det() const { return m_.det(); }
  Complex trace() const { return m_.trace(); }

  SL2Matrix inverse() const { return unchecked({m_.d, -m_.b, -m_.c, m_.a}); }
  SL2Matrix operator-() const { return unchecked(-m_); }

 private:
  Mat2 m_{};
};

/// Matrix product m1 * m2 (apply m2 first).
inline SL2Matrix compose(const SL2Matrix& m1, const SL2Matrix& m2) {
  if (!m1.mat().finite() || !m2.mat().finite()) throw InvalidInput("compose: non-finite entries");
  return SL2Matrix::unchecked(m1.mat() * m2.mat());
}

/// Point on the Riemann sphere.
struct SpherePoint {
  Complex value{};
  bool infinite = false;

  static SpherePoint at_infinity() { return {Complex{}, true}; }
  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;
};

namespace detail {
// First entry of (a, b, c, d) with nonzero modulus decides the sign.
inline bool needs_flip(const Mat2& m) {
  for (Complex z : {m.a, m.b, m.c, m.d}) {
    if (z == Complex{}) continue;
    if (z.real() > 0.0) return false;
    if (z.real() < 0.0) return true;
    return z.imag() < 0.0;
  }
  return false;
}
}  // namespace detail

/// Projective class of an SL2 matrix with a canonical sign.
class MobiusMap {
 public:
  MobiusMap() = default;
  explicit MobiusMap(const SL2Matrix& m) : rep_(canonical(m)) {}

  static MobiusMap identity() { return MobiusMap(SL2Matrix{}); }

  /// z -> (a z + b) / (c z + d), normalizing the determinant first.
  static MobiusMap from_coefficients(Complex a, Complex b, Complex c, Complex d) {
    return MobiusMap(SL2Matrix::normalize({a, b, c, d}));
  }

  static SL2Matrix canonical(const SL2Matrix& m) {
    return detail::needs_flip(m.mat()) ? -m : m;
  }

  const SL2Matrix& rep() const { return rep_; }
  const Mat2& mat() const { return rep_.mat(); }

  MobiusMap inverse() const { return MobiusMap(rep_.inverse()); }

  friend MobiusMap operator*(const MobiusMap& x, const MobiusMap& y) {
    return MobiusMap(compose(x.rep_, y.rep_));
  }

  SpherePoint operator()(const SpherePoint& z) const;
  Complex operator()(Complex z) const {
    const SpherePoint w = (*this)(SpherePoint{z, false});
    if (w.infinite) throw PreconditionError("MobiusMap: finite evaluation hit the pole");
    return w.value;
  }

  /// L'(z) = 1 / (c z + d)^2.
  Complex derivative(Complex z) const {
    const Complex den = mat().c * z + mat().d;
    return 1.0 / (den * den);
  }

 private:
  SL2Matrix rep_{};
};

inline SpherePoint MobiusMap::operator()(const SpherePoint& z) const {
  const Mat2& m = mat();
  if (z.infinite) {
    if (m.c == Complex{}) return SpherePoint::at_infinity();
    return {m.a / m.c, false};
  }
  const Complex den = m.c * z.value + m.d;
  if (den == Complex{}) return SpherePoint::at_infinity();
  return {(m.a * z.value + m.b) / den, false};
}

inline SpherePoint apply(const MobiusMap& m, const SpherePoint& z) { return m(z); }

enum class MobiusClass { identity, parabolic, elliptic, loxodromic };

inline const char* to_string(MobiusClass c) {
  switch (c) {
    case MobiusClass::identity: return "identity";
    case MobiusClass::parabolic: return "parabolic";
    case MobiusClass::elliptic: return "elliptic";
    case MobiusClass::loxodromic: return "hyperbolic-loxodromic";
  }
  return "?";
}

inline constexpr double kClassifyTolerance = 1e-9;

inline MobiusClass classify(const MobiusMap& m, double tol = kClassifyTolerance) {
  const Mat2& x = m.mat();
  if (std::abs(x.det() - 1.0) > kDefaultDetTolerance) {
    throw PreconditionError("classify: determinant is not 1");
  }
  if (psl2_distance(x, Mat2::identity()) <= tol) return MobiusClass::identity;
  const Complex tr2 = x.trace() * x.trace();
  if (std::abs(tr2 - 4.0) <= tol) return MobiusClass::parabolic;
  if (std::abs(tr2.imag()) <= tol && tr2.real() >= -tol && tr2.real() < 4.0) {
    return MobiusClass::elliptic;
  }
  return MobiusClass::loxodromic;
}

/// One letter of a group word: generator index raised to +1 or -1.
struct Letter {
  std::size_t generator = 0;
  int exponent = 1;
  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

/// [x, y] = x y x^-1 y^-1.
inline Word commutator(std::size_t x, std::size_t y) {
  return {{x, 1}, {y, 1}, {x, -1}, {y, -1}};
}

inline Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->generator, -it->exponent});
  return out;
}

struct GroupPresentation {
  std::vector<std::string> labels;
  std::vector<MobiusMap> generators;
  std::vector<Word> relators;

  bool well_formed() const {
    if (labels.size() != generators.size()) return false;
    for (const Word& w : relators) {
      for (const Letter& l : w) {
        if (l.generator >= generators.size() || (l.exponent != 1 && l.exponent != -1)) return false;
      }
    }
    return true;
  }
};

/// Product of SL2 representatives along the word, left to right.
inline Mat2 evaluate_word(const std::vector<MobiusMap>& generators, const Word& w) {
  Mat2 acc = Mat2::identity();
  for (const Letter& l : w) {
    if (l.generator >= generators.size()) throw InvalidInput("word references unknown generator");
    const Mat2& g = generators[l.generator].mat();
    acc = acc * (l.exponent > 0 ? g : g.inverse());
  }
  return acc;
}

struct RelationResidual {
  double value = 0.0;
  bool no_relators = false;  // warning flag
};

inline RelationResidual relation_residual(const GroupPresentation& p) {
  if (!p.well_formed()) throw InvalidInput("relation_residual: malformed presentation");
  RelationResidual out;
  if (p.relators.empty()) {
    out.no_relators = true;
    return out;
  }
  for (const Word& w : p.relators) {
    out.value = std::max(out.value, psl2_distance(evaluate_word(p.generators, w), Mat2::identity()));
  }
  return out;
}

/// Koebe group signature (h, s; i_1, ..., i_m).
struct Signature {
  int h = 0;
  int s = 0;
  std::vector<int> parts;

  int genus() const {
    int g = h + s;
    for (int i : parts) g += i;
    return g;
  }
};

struct SignatureCheck {
  bool valid = true;
  std::vector<std::string> diagnostics;
};

inline SignatureCheck validate_signature(const Signature& sigma, int g) {
  SignatureCheck out;
  auto fail = [&](std::string why) {
    out.valid = false;
    out.diagnostics.push_back(std::move(why));
  };
  if (g <= 0) fail("genus must be positive");
  if (sigma.h < 0 || sigma.s < 0) fail("h and s must be nonnegative");
  for (int i : sigma.parts) {
    if (i < 0) fail("parts must be nonnegative");
    if (i == 1) fail("part equal to 1 is not allowed");
  }
  if (sigma.genus() != g) {
    fail("|sigma| = " + std::to_string(sigma.genus()) + " does not match genus " + std::to_string(g));
  }
  bool all_zero = true;
  for (int i : sigma.parts) all_zero = all_zero && i == 0;
  if (sigma.h == 0 && sigma.s == 2 && all_zero) fail("signature (0, 2; 0, ..., 0) is excluded");
  return out;
}

/// Labels and relator words of the marked Koebe group of signature sigma.
struct RelatorScheme {
  std::vector<std::string> labels;  // T_1..T_h, U_1..U_{g-h}, V_1..V_{g-h}
  std::vector<Word> relators;
};

inline RelatorScheme koebe_relators(const Signature& sigma) {
  const int g = sigma.genus();
  const SignatureCheck check = validate_signature(sigma, g);
  if (!check.valid) throw InvalidInput("koebe_relators: " + check.diagnostics.front());

  RelatorScheme out;
  const auto pairs = static_cast<std::size_t>(g - sigma.h);
  for (int i = 1; i <= sigma.h; ++i) out.labels.push_back("T" + std::to_string(i));
  for (std::size_t i = 1; i <= pairs; ++i) out.labels.push_back("U" + std::to_string(i));
  for (std::size_t i = 1; i <= pairs; ++i) out.labels.push_back("V" + std::to_string(i));

  const auto base = static_cast<std::size_t>(sigma.h);
  auto u = [&](std::size_t j) { return base + j; };
  auto v = [&](std::size_t j) { return base + pairs + j; };

  std::size_t next = 0;
  for (int j = 0; j < sigma.s; ++j, ++next) out.relators.push_back(commutator(u(next), v(next)));
  for (int part : sigma.parts) {
    if (part == 0) continue;
    Word w;
    for (int j = 0; j < part; ++j, ++next) {
      const Word c = commutator(u(next), v(next));
      w.insert(w.end(), c.begin(), c.end());
    }
    out.relators.push_back(std::move(w));
  }
  return out;
}

}  // namespace monodromy

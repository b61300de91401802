#pragma once

// JSON schema for problem files and reports.  Complex numbers are [re, im]
// pairs, matrices are row-major [[a, b], [c, d]].

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "monodromy/errors.hpp"
#include "monodromy/field.hpp"
#include "monodromy/matrizant.hpp"
#include "monodromy/path.hpp"
#include "monodromy/rational.hpp"
#include "monodromy/sl2.hpp"
#include "monodromy/variation.hpp"

namespace monodromy::io {

using json = nlohmann::json;

/// Validation failure at a JSON pointer into the input document.
class SpecError : public InvalidInput {
 public:
  SpecError(std::string pointer, const std::string& what)
      : InvalidInput(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline double real_from_json(const json& j, const std::string& at) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw SpecError(at, "expected a number");
  return j.get<double>();
}

inline Complex complex_from_json(const json& j, const std::string& at) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw SpecError(at, "expected a complex number [re, im]");
  return {real_from_json(j[0], at + "/0"), real_from_json(j[1], at + "/1")};
}

inline json complex_list_to_json(const std::vector<Complex>& v) {
  json out = json::array();
  for (Complex z : v) out.push_back(complex_to_json(z));
  return out;
}

inline std::vector<Complex> complex_list_from_json(const json& j, const std::string& at) {
  if (!j.is_array()) throw SpecError(at, "expected a list of complex numbers");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], at + "/" + std::to_string(i)));
  return out;
}

inline json matrix_to_json(const Mat2& m) {
  return json::array({json::array({complex_to_json(m.a), complex_to_json(m.b)}),
                      json::array({complex_to_json(m.c), complex_to_json(m.d)})});
}

inline Mat2 matrix_from_json(const json& j, const std::string& at) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
      j[1].size() != 2) {
    throw SpecError(at, "expected a 2x2 matrix [[a, b], [c, d]]");
  }
  return {complex_from_json(j[0][0], at + "/0/0"), complex_from_json(j[0][1], at + "/0/1"),
          complex_from_json(j[1][0], at + "/1/0"), complex_from_json(j[1][1], at + "/1/1")};
}

inline const json& member(const json& j, const char* key, const std::string& at) {
  if (!j.is_object()) throw SpecError(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SpecError(at + "/" + key, "missing required field");
  return *it;
}

inline json rational_to_json(const RationalFn& f) {
  return {{"num", complex_list_to_json(f.numerator().coeffs())},
          {"den", complex_list_to_json(f.denominator().coeffs())}};
}

inline RationalFn rational_from_json(const json& j, const std::string& at) {
  if (!j.is_object()) throw SpecError(at, "expected {\"num\": [...], \"den\": [...]}");
  Polynomial num(complex_list_from_json(member(j, "num", at), at + "/num"));
  Polynomial den({1.0});
  if (j.contains("den")) den = Polynomial(complex_list_from_json(j["den"], at + "/den"));
  if (den.is_zero()) throw SpecError(at + "/den", "denominator is identically zero");
  return {std::move(num), std::move(den)};
}

inline json segment_to_json(const Segment& seg) {
  if (const auto* l = std::get_if<LineSegment>(&seg)) {
    return {{"line", json::array({complex_to_json(l->from), complex_to_json(l->to)})}};
  }
  const auto& a = std::get<ArcSegment>(seg);
  return {{"arc",
           {{"center", complex_to_json(a.center)},
            {"radius", a.radius},
            {"theta", json::array({a.theta_from, a.theta_to})}}}};
}

inline Segment segment_from_json(const json& j, const std::string& at) {
  if (!j.is_object()) throw SpecError(at, "expected {\"line\": ...} or {\"arc\": ...}");
  if (j.contains("line")) {
    const json& l = j["line"];
    if (!l.is_array() || l.size() != 2) throw SpecError(at + "/line", "expected [from, to]");
    return LineSegment{complex_from_json(l[0], at + "/line/0"), complex_from_json(l[1], at + "/line/1")};
  }
  if (j.contains("arc")) {
    const json& a = j["arc"];
    const std::string p = at + "/arc";
    const json& theta = member(a, "theta", p);
    if (!theta.is_array() || theta.size() != 2) throw SpecError(p + "/theta", "expected [from, to]");
    ArcSegment arc{complex_from_json(member(a, "center", p), p + "/center"),
                   real_from_json(member(a, "radius", p), p + "/radius"),
                   real_from_json(theta[0], p + "/theta/0"), real_from_json(theta[1], p + "/theta/1")};
    if (!(arc.radius > 0.0)) throw SpecError(p + "/radius", "radius must be positive");
    return arc;
  }
  throw SpecError(at, "segment must be a line or an arc");
}

inline json path_to_json(const Path& p) {
  json segs = json::array();
  for (const Segment& s : p.segments()) segs.push_back(segment_to_json(s));
  return {{"t0", complex_to_json(p.basepoint())}, {"segments", segs}, {"closed", p.closed()}};
}

struct Geometry {
  Path path;
  bool closed = false;
};

inline Geometry geometry_from_json(const json& j, const std::string& at) {
  const Complex t0 = complex_from_json(member(j, "t0", at), at + "/t0");
  const json& segs = member(j, "segments", at);
  if (!segs.is_array() || segs.empty()) throw SpecError(at + "/segments", "expected a nonempty list");
  std::vector<Segment> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    out.push_back(segment_from_json(segs[i], at + "/segments/" + std::to_string(i)));
  }
  Geometry g;
  try {
    g.path = Path(t0, std::move(out));
  } catch (const InvalidInput& e) {
    throw SpecError(at + "/segments", e.what());
  }
  g.closed = j.value("closed", false);
  if (g.closed && !g.path.closed()) throw SpecError(at + "/closed", "path does not return to t0");
  return g;
}

inline json series_to_json(const MatrizantSeries& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs) coeffs.push_back({{"k", c.k}, {"m", matrix_to_json(c.m)}});
  return {{"d", s.d}, {"N", s.order}, {"coeffs", coeffs}};
}

/// Coefficients only; the path and pairs are not part of the serialized form.
inline MatrizantSeries series_from_json(const json& j, const std::string& at = "") {
  MatrizantSeries s;
  s.d = member(j, "d", at).get<int>();
  s.order = member(j, "N", at).get<int>();
  const json& coeffs = member(j, "coeffs", at);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::string p = at + "/coeffs/" + std::to_string(i);
    s.coeffs.push_back({member(coeffs[i], "k", p).get<MultiIndex>(), matrix_from_json(member(coeffs[i], "m", p), p + "/m")});
  }
  return s;
}

inline json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json convergence_to_json(const ConvergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr = {{"h", complex_list_to_json(row.h)},
               {"h_norm", row.h_norm},
               {"error", nullable(row.error)},
               {"det_residual", nullable(row.det_residual)},
               {"direct_failed", row.direct_failed}};
    if (row.direct_failed) jr["failure"] = row.failure;
    rows.push_back(std::move(jr));
  }
  return {{"order", r.order},
          {"rows", rows},
          {"fitted_order", nullable(r.fitted_order)},
          {"det_fitted_order", nullable(r.det_fitted_order)},
          {"degenerate", r.degenerate},
          {"partial", r.partial},
          {"passes", r.passes}};
}

inline ConvergenceReport convergence_from_json(const json& j, const std::string& at = "") {
  ConvergenceReport r;
  r.order = member(j, "order", at).get<int>();
  const json& rows = member(j, "rows", at);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string p = at + "/rows/" + std::to_string(i);
    ConvergenceRow row;
    row.h = complex_list_from_json(member(rows[i], "h", p), p + "/h");
    row.h_norm = real_from_json(member(rows[i], "h_norm", p), p + "/h_norm");
    row.error = real_from_json(member(rows[i], "error", p), p + "/error");
    row.det_residual = real_from_json(member(rows[i], "det_residual", p), p + "/det_residual");
    row.direct_failed = member(rows[i], "direct_failed", p).get<bool>();
    row.failure = rows[i].value("failure", "");
    r.rows.push_back(std::move(row));
  }
  r.fitted_order = real_from_json(member(j, "fitted_order", at), at + "/fitted_order");
  r.det_fitted_order = real_from_json(member(j, "det_fitted_order", at), at + "/det_fitted_order");
  r.degenerate = member(j, "degenerate", at).get<bool>();
  r.partial = member(j, "partial", at).get<bool>();
  r.passes = member(j, "passes", at).get<bool>();
  return r;
}

/// A parsed problem file.
struct ProblemSpec {
  CoefficientField field;
  Path path;
  bool closed = false;
  int order = 0;
  double tol = 1e-12;
  /// Explicit parameter samples, each of dimension d.
  std::vector<std::vector<Complex>> h_grid;
  /// Direction used when samples are given as scalars (default all ones).
  std::vector<Complex> h_direction;
  bool diagonal_check = false;
};

/// Default sample magnitudes 10^-1, 10^-1.5, ..., 10^-3.
inline std::vector<double> default_h_magnitudes() { return {1e-1, std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3}; }

inline std::vector<std::vector<Complex>> scaled_samples(const std::vector<Complex>& direction,
                                                        const std::vector<Complex>& scalars) {
  std::vector<std::vector<Complex>> out;
  for (Complex s : scalars) {
    std::vector<Complex> h;
    for (Complex c : direction) h.push_back(s * c);
    out.push_back(std::move(h));
  }
  return out;
}

inline ProblemSpec problem_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("", "problem file must be a JSON object");
  ProblemSpec spec;
  const json& field = member(j, "field", "");
  const RationalFn base = rational_from_json(member(field, "r", "/field"), "/field/r");
  std::vector<FieldTerm> basis;
  if (field.contains("basis")) {
    const json& b = field["basis"];
    if (!b.is_array()) throw SpecError("/field/basis", "expected a list");
    for (std::size_t i = 0; i < b.size(); ++i) {
      basis.emplace_back(rational_from_json(b[i], "/field/basis/" + std::to_string(i)));
    }
  }
  spec.field = CoefficientField(base, std::move(basis));
  const std::size_t d = spec.field.dimension();

  const Geometry g = geometry_from_json(member(j, "geometry", ""), "/geometry");
  spec.path = g.path;
  spec.closed = g.closed;
  if (j.contains("t0")) {
    const Complex t0 = complex_from_json(j["t0"], "/t0");
    if (std::abs(t0 - spec.path.basepoint()) > kContiguityTolerance * (1.0 + std::abs(t0))) {
      throw SpecError("/geometry/t0", "geometry basepoint does not match the declared t0");
    }
  }

  if (j.contains("order")) {
    if (!j["order"].is_number_integer() || j["order"].get<int>() < 0) {
      throw SpecError("/order", "expected a nonnegative integer");
    }
    spec.order = j["order"].get<int>();
  }
  if (j.contains("tol")) {
    spec.tol = real_from_json(j["tol"], "/tol");
    if (!(spec.tol > 0.0)) throw SpecError("/tol", "tolerance must be positive");
  }
  spec.h_direction = std::vector<Complex>(d, 1.0);
  if (j.contains("h_direction")) {
    spec.h_direction = complex_list_from_json(j["h_direction"], "/h_direction");
    if (spec.h_direction.size() != d) {
      throw SpecError("/h_direction", "dimension " + std::to_string(spec.h_direction.size()) +
                                          " does not match basis size " + std::to_string(d));
    }
  }
  if (j.contains("h_grid")) {
    const json& grid = j["h_grid"];
    if (!grid.is_array()) throw SpecError("/h_grid", "expected a list of samples");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const std::string p = "/h_grid/" + std::to_string(i);
      std::vector<Complex> h;
      if (grid[i].is_number() || (grid[i].is_array() && grid[i].size() == 2 && grid[i][0].is_number())) {
        h = scaled_samples(spec.h_direction, {complex_from_json(grid[i], p)}).front();
      } else {
        h = complex_list_from_json(grid[i], p);
      }
      if (h.size() != d) {
        throw SpecError(p, "sample dimension " + std::to_string(h.size()) + " does not match basis size " +
                               std::to_string(d));
      }
      spec.h_grid.push_back(std::move(h));
    }
  }
  if (j.contains("options")) spec.diagonal_check = j["options"].value("diagonal_check", false);
  return spec;
}

}  // namespace monodromy::io

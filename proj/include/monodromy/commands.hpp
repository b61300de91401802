#pragma once

// Command bodies behind the CLI.  Each returns a JSON report plus the
// numerical-acceptance verdict; rendering and exit codes live in the tool.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "monodromy/errors.hpp"
#include "monodromy/field.hpp"
#include "monodromy/fuchsian.hpp"
#include "monodromy/io.hpp"
#include "monodromy/matrizant.hpp"
#include "monodromy/path_ode.hpp"
#include "monodromy/sl2.hpp"
#include "monodromy/variation.hpp"

namespace monodromy::commands {

using io::json;

enum class ExitCode : int { ok = 0, validation = 2, acceptance = 3, internal = 4 };

struct CommandResult {
  json report;
  bool accepted = true;
};

/// Eigenvalues of an SL2 matrix: roots of x^2 - tr x + det.
inline std::vector<Complex> eigenvalues(const Mat2& m) {
  const Complex tr = m.trace();
  const Complex disc = std::sqrt(tr * tr - 4.0 * m.det());
  std::vector<Complex> ev{(tr + disc) / 2.0, (tr - disc) / 2.0};
  std::sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
  });
  return ev;
}

struct Overrides {
  std::optional<double> tol;
  std::optional<int> order;
  std::optional<std::vector<double>> h_grid;  // scalars along the problem's h direction
};

inline void apply_overrides(io::ProblemSpec& spec, const Overrides& o) {
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw InvalidInput("--tol must be positive");
    spec.tol = *o.tol;
  }
  if (o.order) {
    if (*o.order < 0) throw InvalidInput("--order must be nonnegative");
    spec.order = *o.order;
  }
  if (o.h_grid) {
    std::vector<Complex> scalars(o.h_grid->begin(), o.h_grid->end());
    spec.h_grid = io::scaled_samples(spec.h_direction, scalars);
  }
}

inline CommandResult cmd_monodromy(const io::ProblemSpec& spec) {
  if (!spec.closed) throw io::SpecError("/geometry/closed", "monodromy needs a closed loop");
  IntegrationOptions opt;
  opt.tol = spec.tol;
  const std::vector<Complex> h0 = spec.field.zero_parameter();
  const SL2Matrix m = monodromy(spec.field, h0, Loop(spec.path), opt);
  const double det_residual = std::abs(m.mat().det() - 1.0);
  CommandResult out;
  out.report = {{"command", "monodromy"},
                {"tol", spec.tol},
                {"loop", io::path_to_json(spec.path)},
                {"matrix", io::matrix_to_json(m.mat())},
                {"trace", io::complex_to_json(m.mat().trace())},
                {"eigenvalues", io::complex_list_to_json(eigenvalues(m.mat()))},
                {"det_residual", det_residual}};
  if (spec.field.poles(h0).empty() || (m.mat() - Mat2::identity()).frobenius() <= 1e3 * spec.tol) {
    out.report["note"] = "trivial monodromy";
  }
  const double budget = 1e3 * spec.tol * std::max(1.0, m.mat().frobenius() * m.mat().frobenius());
  out.report["det_within_tolerance"] = det_residual <= budget;
  out.accepted = det_residual <= budget;
  return out;
}

/// max over |k| = n of || sum_{|k|=n} C_k(d-parameter) - C_n(collapsed) || relative.
inline double diagonal_consistency(const io::ProblemSpec& spec, const MatrizantSeries& series,
                                   const SeriesOptions& opt) {
  const MatrizantSeries collapsed =
      compute_series(spec.field.collapsed(), spec.path, spec.order, opt);
  const std::vector<Mat2> sums = series.degree_sums();
  const std::vector<Mat2> single = collapsed.degree_sums();
  double worst = 0.0;
  for (std::size_t n = 1; n < sums.size(); ++n) {
    const double scale = std::max(1.0, single[n].frobenius());
    worst = std::max(worst, (sums[n] - single[n]).frobenius() / scale);
  }
  return worst;
}

inline constexpr double kDiagonalTolerance = 1e-10;

inline CommandResult cmd_variation(io::ProblemSpec spec) {
  SeriesOptions opt;
  opt.integration.tol = spec.tol;
  if (spec.h_grid.empty()) {
    std::vector<Complex> scalars;
    for (double x : io::default_h_magnitudes()) scalars.emplace_back(x);
    spec.h_grid = io::scaled_samples(spec.h_direction, scalars);
  }
  CommandResult out;
  json& r = out.report;
  r = {{"command", "variation"},
       {"tol", spec.tol},
       {"order", spec.order},
       {"d", spec.field.dimension()},
       {"frame", spec.closed ? to_string(FrameKind::plane_loop) : "open_path"},
       {"geometry", io::path_to_json(spec.path)}};
  if (spec.order == 0) {
    r["series"] = io::series_to_json(compute_series(spec.field, spec.path, 0, opt));
    r["note"] = "order 0: Omega is the identity";
    return out;
  }
  const MatrizantSeries series = compute_series(spec.field, spec.path, spec.order, opt);
  r["series"] = io::series_to_json(series);
  r["radius_estimate"] = io::nullable(estimate_radius(series));

  json omega = json::array();
  for (const auto& h : spec.h_grid) {
    spec.field.check_parameter(h);
    omega.push_back({{"h", io::complex_list_to_json(h)},
                     {"omega", io::matrix_to_json(evaluate_omega(series, h))}});
  }
  r["omega"] = omega;

  ConvergenceReport rep;
  if (spec.closed) {
    const Loop loop(spec.path);
    rep = verify_monodromy_family(spec.field, loop, spec.order, spec.h_grid, opt);
    r["base_monodromy"] = io::matrix_to_json(monodromy_from_pair(series.end_pair).mat());
  } else {
    rep = verify_perturbed_pair(spec.field, spec.path, spec.order, spec.h_grid, opt);
  }
  r["convergence"] = io::convergence_to_json(rep);
  out.accepted = rep.degenerate || rep.passes;

  if (spec.diagonal_check) {
    if (spec.field.dimension() < 2) throw io::SpecError("/options/diagonal_check", "needs d >= 2");
    const double residual = diagonal_consistency(spec, series, opt);
    r["diagonal"] = {{"residual", residual}, {"consistent", residual <= kDiagonalTolerance}};
    out.accepted = out.accepted && residual <= kDiagonalTolerance;
  }
  return out;
}

struct DemoOptions {
  int order = 3;
  double tol = 1e-11;
  std::vector<Complex> seed{1.0, 0.5, 0.0, 0.2};
};

inline constexpr double kRelationTolerance = 1e-8;

inline json map_entry(const std::string& label, const MobiusMap& m) {
  return {{"label", label},
          {"matrix", io::matrix_to_json(m.mat())},
          {"trace", io::complex_to_json(m.mat().trace())},
          {"class", to_string(classify(m))},
          {"disc_residual", fuchsian::disc_preservation_residual(m)}};
}

inline CommandResult cmd_fuchsian_demo(const DemoOptions& o) {
  using namespace fuchsian;
  if (o.order < 0) throw InvalidInput("--order must be nonnegative");
  if (o.order > kDefaultEnumerationCap) {
    throw CapExceededError("--order " + std::to_string(o.order) + " exceeds the enumeration cap " +
                           std::to_string(kDefaultEnumerationCap));
  }
  const OctagonGroup g = build_octagon_group();
  CommandResult out;
  json& r = out.report;
  const double marked_res = relation_residual(g.marked_presentation()).value;
  const double side_res = relation_residual(g.side_presentation()).value;
  json sides = json::array(), marked = json::array(), vertices = json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    sides.push_back(map_entry(OctagonGroup::kSideLabels[i], g.side_pairings[i]));
    marked.push_back(map_entry(OctagonGroup::kMarkedLabels[i], g.marked[i]));
  }
  for (Complex v : g.vertices) vertices.push_back(io::complex_to_json(v));
  r = {{"command", "fuchsian demo"},
       {"order", o.order},
       {"tol", o.tol},
       {"seed", io::complex_list_to_json(o.seed)},
       {"group",
        {{"circumradius", g.circumradius},
         {"vertex_angle", g.vertex_angle},
         {"vertex_angle_error", std::abs(g.vertex_angle - kTargetAngle)},
         {"translation_length", g.translation_length},
         {"vertices", vertices},
         {"side_pairings", sides},
         {"marked_generators", marked},
         {"relation_residual", marked_res},
         {"side_relation_residual", side_res}}}};
  out.accepted = marked_res <= kRelationTolerance && side_res <= kRelationTolerance;

  const Polynomial seed(o.seed);
  const std::vector<MobiusMap> gens(g.side_pairings.begin(), g.side_pairings.end());
  const std::vector<Complex> grid = disc_grid(0.5, 5, 20);
  json automorphy = json::array();
  for (int n = 1; n <= o.order; ++n) {
    const ThetaDifferential th = theta_series(g, seed, n);
    automorphy.push_back({{"N", n},
                          {"elements", th.terms()},
                          {"automorphy_residual", automorphy_residual(th, gens, grid)},
                          {"weighted_sup_norm", weighted_sup_norm(th, grid)}});
  }
  r["automorphy"] = automorphy;

  IntegrationOptions opt;
  opt.tol = o.tol;
  FieldTerm q = FieldTerm::zero();
  if (o.order == 0) {
    r["note"] = "order 0: zero differential, developing map is the identity chart z = t";
  } else {
    q = theta_series(g, seed, o.order).as_field_term();
  }
  const DevelopingMap z(q, 0.0, opt);
  std::vector<DevelopingMonodromy> single;
  for (const MobiusMap& s : g.side_pairings) single.push_back(developing_monodromy(z, s));
  json hom = json::array();
  double worst = 0.0, worst_route = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const MobiusMap l = g.side_pairings[i] * g.side_pairings[j];
      const DevelopingMonodromy dm = developing_monodromy(z, l);
      const double res = psl2_distance(dm.rho.mat(), (single[i].rho * single[j].rho).mat());
      worst = std::max(worst, res);
      worst_route = std::max(worst_route, dm.route_discrepancy);
      hom.push_back({{"pair", std::string(OctagonGroup::kSideLabels[i]) + "*" + OctagonGroup::kSideLabels[j]},
                     {"rho", io::matrix_to_json(dm.rho.mat())},
                     {"residual", res},
                     {"route_discrepancy", dm.route_discrepancy}});
    }
  }
  r["homomorphism"] = {{"rows", hom}, {"max_residual", worst}, {"max_route_discrepancy", worst_route}};
  return out;
}

inline std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << std::scientific << x;
  return s.str();
}

inline std::string fmt(const json& z) {
  if (z.is_null()) return "nan";
  if (z.is_number()) return fmt(z.get<double>());
  if (z.is_array() && z.size() == 2 && z[0].is_number()) {
    const double im = z[1].get<double>();
    return fmt(z[0].get<double>()) + (im < 0 ? "-" : "+") + fmt(std::abs(im)) + "i";
  }
  return z.dump();
}

inline std::string matrix_rows(const json& m, const std::string& indent) {
  return indent + fmt(m[0][0]) + "  " + fmt(m[0][1]) + "\n" + indent + fmt(m[1][0]) + "  " +
         fmt(m[1][1]) + "\n";
}

/// Human-readable rendering; tables are tab-separated with a header row.
inline std::string render_table(const json& r) {
  std::ostringstream o;
  const std::string cmd = r.at("command").get<std::string>();
  if (cmd == "monodromy") {
    o << "monodromy matrix (v, u frame)\n" << matrix_rows(r["matrix"], "  ");
    o << "trace\t" << fmt(r["trace"]) << "\n";
    o << "eigenvalues\t" << fmt(r["eigenvalues"][0]) << "\t" << fmt(r["eigenvalues"][1]) << "\n";
    o << "det_residual\t" << fmt(r["det_residual"]) << "\n";
    if (r.contains("note")) o << "note\t" << r["note"].get<std::string>() << "\n";
  } else if (cmd == "variation") {
    o << "order\t" << r["order"] << "\nd\t" << r["d"] << "\nframe\t" << r["frame"].get<std::string>() << "\n";
    o << "k\tm00\tm01\tm10\tm11\n";
    for (const auto& c : r["series"]["coeffs"]) {
      o << c["k"].dump() << "\t" << fmt(c["m"][0][0]) << "\t" << fmt(c["m"][0][1]) << "\t"
        << fmt(c["m"][1][0]) << "\t" << fmt(c["m"][1][1]) << "\n";
    }
    if (r.contains("note")) o << "note\t" << r["note"].get<std::string>() << "\n";
    if (r.contains("convergence")) {
      const json& c = r["convergence"];
      o << "h_norm\terror\tdet_residual\n";
      for (const auto& row : c["rows"]) {
        o << fmt(row["h_norm"]) << "\t" << fmt(row["error"]) << "\t" << fmt(row["det_residual"]) << "\n";
      }
      o << "fitted_order\t" << fmt(c["fitted_order"]) << "\n";
      o << "degenerate\t" << c["degenerate"] << "\npasses\t" << c["passes"] << "\n";
      o << "radius_estimate\t" << fmt(r["radius_estimate"]) << "\n";
    }
    if (r.contains("diagonal")) {
      o << "diagonal_residual\t" << fmt(r["diagonal"]["residual"]) << "\n";
      o << "consistent\t" << r["diagonal"]["consistent"] << "\n";
    }
  } else {
    const json& g = r["group"];
    o << "circumradius\t" << fmt(g["circumradius"]) << "\nvertex_angle_error\t" << fmt(g["vertex_angle_error"])
      << "\nrelation_residual\t" << fmt(g["relation_residual"]) << "\nside_relation_residual\t"
      << fmt(g["side_relation_residual"]) << "\n";
    for (const char* key : {"side_pairings", "marked_generators"}) {
      for (const auto& e : g[key]) {
        o << e["label"].get<std::string>() << " (" << e["class"].get<std::string>() << ")\n"
          << matrix_rows(e["matrix"], "  ");
      }
    }
    o << "N\telements\tautomorphy_residual\tweighted_sup_norm\n";
    for (const auto& row : r["automorphy"]) {
      o << row["N"] << "\t" << row["elements"] << "\t" << fmt(row["automorphy_residual"]) << "\t"
        << fmt(row["weighted_sup_norm"]) << "\n";
    }
    if (r.contains("note")) o << "note\t" << r["note"].get<std::string>() << "\n";
    o << "pair\tresidual\troute_discrepancy\n";
    for (const auto& row : r["homomorphism"]["rows"]) {
      o << row["pair"].get<std::string>() << "\t" << fmt(row["residual"]) << "\t"
        << fmt(row["route_discrepancy"]) << "\n";
    }
    o << "max_residual\t" << fmt(r["homomorphism"]["max_residual"]) << "\n";
  }
  return o.str();
}

}  // namespace monodromy::commands

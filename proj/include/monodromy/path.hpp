#pragma once

// Piecewise contours in the complex plane: straight lines and circular arcs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/sl2.hpp"

namespace monodromy {

struct LineSegment {
  Complex from{};
  Complex to{};
};

/// center + radius * exp(i theta), theta running from theta_from to theta_to.
struct ArcSegment {
  Complex center{};
  double radius = 1.0;
  double theta_from = 0.0;
  double theta_to = 2.0 * std::numbers::pi;
};

using Segment = std::variant<LineSegment, ArcSegment>;

/// Position on a segment at parameter s in [0, 1].
inline Complex segment_point(const Segment& seg, double s) {
  if (const auto* l = std::get_if<LineSegment>(&seg)) return l->from + s * (l->to - l->from);
  const auto& a = std::get<ArcSegment>(seg);
  const double theta = a.theta_from + s * (a.theta_to - a.theta_from);
  return a.center + std::polar(a.radius, theta);
}

/// d(position)/ds.
inline Complex segment_tangent(const Segment& seg, double s) {
  if (const auto* l = std::get_if<LineSegment>(&seg)) return l->to - l->from;
  const auto& a = std::get<ArcSegment>(seg);
  const double sweep = a.theta_to - a.theta_from;
  const double theta = a.theta_from + s * sweep;
  return Complex(0.0, sweep) * std::polar(a.radius, theta);
}

inline Complex segment_start(const Segment& seg) { return segment_point(seg, 0.0); }
inline Complex segment_end(const Segment& seg) { return segment_point(seg, 1.0); }

inline double segment_length(const Segment& seg) {
  if (const auto* l = std::get_if<LineSegment>(&seg)) return std::abs(l->to - l->from);
  const auto& a = std::get<ArcSegment>(seg);
  return a.radius * std::abs(a.theta_to - a.theta_from);
}

inline Segment reversed(const Segment& seg) {
  if (const auto* l = std::get_if<LineSegment>(&seg)) return LineSegment{l->to, l->from};
  const auto& a = std::get<ArcSegment>(seg);
  return ArcSegment{a.center, a.radius, a.theta_to, a.theta_from};
}

inline double distance_to(const Segment& seg, Complex p) {
  if (const auto* l = std::get_if<LineSegment>(&seg)) {
    const Complex dir = l->to - l->from;
    const double len2 = std::norm(dir);
    if (len2 == 0.0) return std::abs(p - l->from);
    const double s = std::clamp(((p - l->from) * std::conj(dir)).real() / len2, 0.0, 1.0);
    return std::abs(p - (l->from + s * dir));
  }
  const auto& a = std::get<ArcSegment>(seg);
  const double endpoint_dist =
      std::min(std::abs(p - segment_start(seg)), std::abs(p - segment_end(seg)));
  const Complex rel = p - a.center;
  if (rel == Complex{}) return a.radius;
  const double sweep = a.theta_to - a.theta_from;
  const double two_pi = 2.0 * std::numbers::pi;
  bool covered = std::abs(sweep) >= two_pi;
  if (!covered) {
    const double phi = std::arg(rel);
    double delta = sweep >= 0.0 ? phi - a.theta_from : a.theta_from - phi;
    delta = std::fmod(delta, two_pi);
    if (delta < 0.0) delta += two_pi;
    covered = delta <= std::abs(sweep);
  }
  if (!covered) return endpoint_dist;
  return std::min(endpoint_dist, std::abs(std::abs(rel) - a.radius));
}

inline constexpr double kContiguityTolerance = 1e-12;

class Path {
 public:
  Path() = default;
  Path(Complex basepoint, std::vector<Segment> segments)
      : basepoint_(basepoint), segments_(std::move(segments)) {
    Complex cursor = basepoint_;
    for (const Segment& seg : segments_) {
      if (std::abs(segment_start(seg) - cursor) > kContiguityTolerance * (1.0 + std::abs(cursor))) {
        throw InvalidInput("Path: segments are not contiguous");
      }
      cursor = segment_end(seg);
    }
  }

  static Path line(Complex from, Complex to) { return {from, {LineSegment{from, to}}}; }

  /// Full counterclockwise circle around `center` starting at center + radius e^{i theta0}.
  static Path circle(Complex center, double radius, double theta0 = 0.0, int turns = 1) {
    const Complex start = center + std::polar(radius, theta0);
    return {start,
            {ArcSegment{center, radius, theta0, theta0 + 2.0 * std::numbers::pi * turns}}};
  }

  Complex basepoint() const { return basepoint_; }
  Complex endpoint() const { return segments_.empty() ? basepoint_ : segment_end(segments_.back()); }
  std::span<const Segment> segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }

  double length() const {
    double total = 0.0;
    for (const Segment& s : segments_) total += segment_length(s);
    return total;
  }

  bool closed(double tol = kContiguityTolerance) const {
    return std::abs(endpoint() - basepoint_) <= tol * (1.0 + std::abs(basepoint_));
  }

  double distance_to(Complex p) const {
    if (segments_.empty()) return std::abs(p - basepoint_);
    double best = std::numeric_limits<double>::infinity();
    for (const Segment& s : segments_) best = std::min(best, monodromy::distance_to(s, p));
    return best;
  }

  double max_modulus() const;

  Path reversed() const {
    std::vector<Segment> segs;
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
      segs.push_back(monodromy::reversed(*it));
    }
    return {endpoint(), std::move(segs)};
  }

  /// This path followed by `next`; next must start where this one ends.
  Path then(const Path& next) const {
    std::vector<Segment> segs = segments_;
    segs.insert(segs.end(), next.segments_.begin(), next.segments_.end());
    if (std::abs(next.basepoint_ - endpoint()) > kContiguityTolerance * (1.0 + std::abs(endpoint()))) {
      throw InvalidInput("Path::then: paths do not join");
    }
    return {basepoint_, std::move(segs)};
  }

 private:
  Complex basepoint_{};
  std::vector<Segment> segments_;
};

inline double Path::max_modulus() const {
  double best = std::abs(basepoint_);
  for (const Segment& s : segments_) {
    for (int i = 0; i <= 64; ++i) best = std::max(best, std::abs(segment_point(s, i / 64.0)));
  }
  return best;
}

/// A path returning to its basepoint.
class Loop {
 public:
  explicit Loop(Path p) : path_(std::move(p)) {
    if (!path_.closed()) throw InvalidInput("Loop: path does not return to its basepoint");
  }

  const Path& path() const { return path_; }
  Complex basepoint() const { return path_.basepoint(); }

  /// The loop traversed `times` times.
  Loop power(int times) const {
    if (times < 1) throw InvalidInput("Loop::power: need a positive count");
    Path out = path_;
    for (int i = 1; i < times; ++i) out = out.then(path_);
    return Loop(out);
  }

 private:
  Path path_;
};

}  // namespace monodromy

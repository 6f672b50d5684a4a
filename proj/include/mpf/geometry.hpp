#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace mpf {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 unit_from_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }
inline Vec2 left_normal(double heading) { return {-std::sin(heading), std::cos(heading)}; }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

struct Projection {
  double arc_length{0.0};
  double lateral_offset{0.0};  // positive left of the travel direction
  double tangent_heading{0.0};
  Vec2 foot;                   // closest point on the polyline
  std::size_t segment{0};
};

/// Closest-point projection onto a polyline. Ties at vertices go to the
/// earlier segment. |lateral_offset| always equals the point-to-foot distance.
Projection project_to_polyline(Vec2 point, std::span<const Vec2> polyline);

/// Same answer as project_to_polyline, but segments are grouped into chunks
/// whose bounding boxes let most of a long polyline be skipped.
class PolylineIndex {
 public:
  PolylineIndex() = default;
  explicit PolylineIndex(std::span<const Vec2> polyline);

  Projection project(Vec2 point) const;

 private:
  struct Box {
    Vec2 lo, hi;
  };
  static constexpr std::size_t kChunk = 16;

  std::vector<Vec2> points_;
  std::vector<double> seg_start_;
  std::vector<Box> boxes_;
};

/// Total length of a polyline.
double polyline_length(std::span<const Vec2> polyline);

}  // namespace mpf

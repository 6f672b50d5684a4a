#include "mpf/geometry.hpp"

#include <algorithm>
#include <limits>

namespace mpf {

namespace {

struct Best {
  double d2{std::numeric_limits<double>::infinity()};
  double arc_length{0.0};
  Vec2 foot;
  std::size_t segment{0};
};

// Strict comparison keeps the earlier segment on ties.
void consider(Vec2 point, Vec2 a, Vec2 b, double seg_start, std::size_t i, Best& best) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  double u = dot(point - a, d) / len2;
  if (u < 0.0) u = 0.0;
  if (u > 1.0) u = 1.0;
  const Vec2 foot = a + u * d;
  const Vec2 r = point - foot;
  const double d2 = dot(r, r);
  if (d2 < best.d2) {
    best.d2 = d2;
    best.arc_length = seg_start + u * std::sqrt(len2);
    best.foot = foot;
    best.segment = i;
  }
}

Projection finish(Vec2 point, std::span<const Vec2> polyline, const Best& best) {
  const Vec2 d = polyline[best.segment + 1] - polyline[best.segment];
  const double dist = std::sqrt(best.d2);
  Projection out;
  out.arc_length = best.arc_length;
  out.tangent_heading = std::atan2(d.y, d.x);
  out.foot = best.foot;
  out.segment = best.segment;
  out.lateral_offset = cross(d, point - best.foot) >= 0.0 ? dist : -dist;
  return out;
}

}  // namespace

Projection project_to_polyline(Vec2 point, std::span<const Vec2> polyline) {
  Best best;
  double seg_start = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    consider(point, polyline[i], polyline[i + 1], seg_start, i, best);
    const Vec2 d = polyline[i + 1] - polyline[i];
    seg_start += std::sqrt(dot(d, d));
  }
  return finish(point, polyline, best);
}

PolylineIndex::PolylineIndex(std::span<const Vec2> polyline) : points_(polyline.begin(), polyline.end()) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    seg_start_.push_back(s);
    const Vec2 d = points_[i + 1] - points_[i];
    s += std::sqrt(dot(d, d));
  }
  // Padding absorbs rounding in the foot computation so pruning stays exact.
  constexpr double pad = 1e-9;
  for (std::size_t first = 0; first < seg_start_.size(); first += kChunk) {
    const std::size_t last = std::min(first + kChunk, seg_start_.size());
    Box box{points_[first], points_[first]};
    for (std::size_t k = first; k <= last; ++k) {
      box.lo = {std::min(box.lo.x, points_[k].x), std::min(box.lo.y, points_[k].y)};
      box.hi = {std::max(box.hi.x, points_[k].x), std::max(box.hi.y, points_[k].y)};
    }
    box.lo = box.lo - Vec2{pad, pad};
    box.hi = box.hi + Vec2{pad, pad};
    boxes_.push_back(box);
  }
}

Projection PolylineIndex::project(Vec2 point) const {
  Best best;
  for (std::size_t c = 0; c < boxes_.size(); ++c) {
    const Box& box = boxes_[c];
    const double dx = std::max({box.lo.x - point.x, 0.0, point.x - box.hi.x});
    const double dy = std::max({box.lo.y - point.y, 0.0, point.y - box.hi.y});
    if (dx * dx + dy * dy > best.d2) continue;
    const std::size_t first = c * kChunk;
    const std::size_t last = std::min(first + kChunk, seg_start_.size());
    for (std::size_t i = first; i < last; ++i) consider(point, points_[i], points_[i + 1], seg_start_[i], i, best);
  }
  return finish(point, points_, best);
}

double polyline_length(std::span<const Vec2> polyline) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) total += distance(polyline[i], polyline[i + 1]);
  return total;
}

}  // namespace mpf

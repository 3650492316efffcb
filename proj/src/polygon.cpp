#include "ncj/polygon.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <algorithm>
#include <limits>

namespace bg = boost::geometry;

namespace ncj::poly {
namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, /*ClockWise=*/false, /*Closed=*/true>;

BPolygon to_boost(std::span<const Vec2> ring) {
  BPolygon out;
  auto& outer = out.outer();
  outer.reserve(ring.size() + 1);
  for (const auto& p : ring) outer.emplace_back(p.x(), p.y());
  if (!ring.empty()) outer.emplace_back(ring.front().x(), ring.front().y());
  bg::correct(out);
  return out;
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  double d = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
  return (d > 0.0) - (d < 0.0);
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
         p.y() <= std::max(a.y(), b.y());
}

// Closed segments [a,b] and [c,d] share at least one point.
bool segments_touch(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  int o1 = orientation(a, b, c);
  int o2 = orientation(a, b, d);
  int o3 = orientation(c, d, a);
  int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) || (o3 == 0 && on_segment(c, d, a)) ||
         (o4 == 0 && on_segment(c, d, b));
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - p).norm();
}

double ring_boundary_distance(std::span<const Vec2> ring, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ring.size(); ++i) {
    best = std::min(best, segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
  }
  return best;
}

double one_sided_penetration(std::span<const Vec2> inner, std::span<const Vec2> outer,
                             const BPolygon& outer_poly) {
  double depth = 0.0;
  for (const auto& p : inner) {
    if (bg::within(BPoint(p.x(), p.y()), outer_poly)) {
      depth = std::max(depth, ring_boundary_distance(outer, p));
    }
  }
  return depth;
}

}  // namespace

double signed_area(std::span<const Vec2> ring) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[(i + 1) % ring.size()];
    acc += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * acc;
}

double area(std::span<const Vec2> ring) { return std::abs(signed_area(ring)); }

bool is_simple_ring(std::span<const Vec2> ring) {
  if (ring.size() < 3) return false;
  auto p = to_boost(ring);
  return bg::is_valid(p) && bg::area(p) > 0.0;
}

bool is_simple_polyline(std::span<const Vec2> line) {
  const std::size_t m = line.size() < 2 ? 0 : line.size() - 1;  // segment count
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = line[i];
    const Vec2& b = line[i + 1];
    if (a == b) return false;
    if (i + 1 < m) {
      // Adjacent segments may only share their joint vertex.
      const Vec2& c = line[i + 2];
      if (orientation(a, b, c) == 0 && (a - b).dot(c - b) > 0.0) return false;
    }
    for (std::size_t j = i + 2; j < m; ++j) {
      if (segments_touch(a, b, line[j], line[j + 1])) return false;
    }
  }
  return true;
}

double overlap_area(std::span<const Vec2> a, std::span<const Vec2> b) {
  std::vector<BPolygon> out;
  bg::intersection(to_boost(a), to_boost(b), out);
  double total = 0.0;
  for (const auto& p : out) total += bg::area(p);
  return total;
}

double max_penetration(std::span<const Vec2> a, std::span<const Vec2> b) {
  auto pa = to_boost(a);
  auto pb = to_boost(b);
  return std::max(one_sided_penetration(a, b, pb), one_sided_penetration(b, a, pa));
}

bool contains(std::span<const Vec2> ring, const Vec2& p) {
  // Even-odd crossing test; boundary points may land on either side.
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_polyline(std::span<const Vec2> line, const Vec2& p) {
  if (line.size() == 1) return (line.front() - p).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    best = std::min(best, segment_distance(p, line[i], line[i + 1]));
  }
  return best;
}

}  // namespace ncj::poly

#pragma once

#include "ncj/geometry.hpp"

#include <span>
#include <vector>

namespace ncj::poly {

/// Open ring (first vertex not repeated). Either orientation is accepted on
/// input; functions normalize internally.
using Ring = std::vector<Vec2>;

double signed_area(std::span<const Vec2> ring);
double area(std::span<const Vec2> ring);

/// True when the ring has no self-intersections and non-zero area.
bool is_simple_ring(std::span<const Vec2> ring);

/// True when the open polyline does not cross or touch itself (adjacent
/// segments sharing their common vertex are fine).
bool is_simple_polyline(std::span<const Vec2> line);

/// Area of the intersection of two simple rings.
double overlap_area(std::span<const Vec2> a, std::span<const Vec2> b);

/// Largest distance by which a vertex of one ring lies inside the other.
double max_penetration(std::span<const Vec2> a, std::span<const Vec2> b);

bool contains(std::span<const Vec2> ring, const Vec2& p);

double distance_to_polyline(std::span<const Vec2> line, const Vec2& p);

}  // namespace ncj::poly

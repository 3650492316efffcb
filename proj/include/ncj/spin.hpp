#pragma once

// Electrospinning jet targeting. The jet is a right circular cone from the
// manipulator tip along the tip axis; deposition is modeled as uniform inside
// its intersection with a planar target.

#include "ncj/chain.hpp"
#include "ncj/geometry.hpp"
#include "ncj/polygon.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ncj {

/// Target plane with an explicit in-plane basis (u, v); normal = u x v.
struct Plane {
  Vec3 origin = Vec3::Zero();
  Vec3 u = Vec3::UnitX();
  Vec3 v = Vec3::UnitY();

  Vec3 normal() const { return u.cross(v); }
  Vec2 project(const Vec3& p) const { return {(p - origin).dot(u), (p - origin).dot(v)}; }
  Vec3 lift(const Vec2& q) const { return origin + q.x() * u + q.y() * v; }

  /// Basis chosen deterministically from the normal: u is world x projected
  /// into the plane (world y if x is nearly normal), v = n x u.
  static Plane from_point_normal(const Vec3& point, const Vec3& normal);
};

struct JetCone {
  Pose3 apex;
  double half_angle = deg_to_rad(5.0);
  double range = 120.0;

  Vec3 axis() const { return apex.axis(); }
};

struct SpinParams {
  double voltage_kv = 10.0;
  double feed_rate_ml_per_h = 0.5;
  std::string solution = "PVP 15 wt% in ethanol";
  double spun_distance = 120.0;

  /// Throws ValidationError on non-positive values.
  void validate() const;

  bool operator==(const SpinParams&) const = default;
};

enum class ConicType { kEllipse, kDegenerate };

struct FootprintConic {
  ConicType type = ConicType::kEllipse;
  Vec2 center = Vec2::Zero();  // target-plane coordinates, mm
  double semi_major = 0.0;
  double semi_minor = 0.0;
  double orientation = 0.0;  // major axis angle in plane coordinates
  double area = 0.0;
  double axis_distance = 0.0;  // apex to the axis piercing point, mm
  poly::Ring boundary;

  /// Analytic membership test of the closed ellipse.
  bool contains(const Vec2& q) const;
};

/// Throws DomainError for "plane behind apex", "grazing incidence" (unbounded
/// conic) or a piercing distance beyond range * (1 + kRangeSlack).
FootprintConic footprint(const JetCone& cone, const Plane& plane, int boundary_vertices = 128);

inline constexpr double kRangeSlack = 0.5;

struct AimOptions {
  double tolerance = 1e-4;         // converged below this residual, rad
  int max_iterations = 100;
  double jacobian_step = 1e-5;     // central differences, rad
  double reach_tolerance = 1e-3;   // reachable if the final residual is below this
};

struct AimResult {
  ConfigState config;
  std::vector<double> section_angles;
  double residual = 0.0;  // angle between tip axis and target direction, rad
  int iterations = 0;
  bool converged = false;
  bool reachable = false;
  bool at_limit = false;
};

/// Angle between the tip axis and the tip-to-target direction.
double aim_residual(const ManipulatorSpec& spec, std::span<const double> section_angles, const Vec3& target);

/// Damped Gauss-Newton over the section angles with bound clamping.
AimResult aim_at(const ManipulatorSpec& spec, const Vec3& target, const ConfigState& initial,
                 const AimOptions& options = {});

struct CoverageMetrics {
  double cell = 0.5;
  double region_area = 0.0;
  double covered_area = 0.0;
  double coverage_fraction = 0.0;
  double union_area = 0.0;
  double overspray_area = 0.0;
};

/// Raster coverage of `region` by the union of footprints (cell centers).
CoverageMetrics rasterize_coverage(std::span<const FootprintConic> footprints, std::span<const Vec2> region,
                                   double cell);

struct ScheduleEntry {
  int waypoint_id = 0;
  Vec3 target = Vec3::Zero();
  std::vector<double> raw_angles;
  std::vector<double> angles;  // quantized to motor steps
  std::vector<std::int64_t> steps;
  std::vector<double> step_width;
  double residual = 0.0;
  bool reachable = false;
  FootprintConic footprint;
  double deposited_volume_ml = 0.0;
};

struct CoverageSchedule {
  std::vector<ScheduleEntry> entries;
  std::vector<int> unreachable;
  CoverageMetrics metrics;
  SpinParams params;
};

struct CoverageRequest {
  std::vector<Vec3> targets;
  poly::Ring region;  // target-plane coordinates
  Plane plane;
  double half_angle = deg_to_rad(5.0);
  double dwell_s = 60.0;
  double cell = 0.5;
};

/// Aims at each waypoint, snaps to motor steps and rasterizes coverage.
/// Unreachable waypoints are listed but the remaining schedule is kept.
CoverageSchedule plan_coverage(const ManipulatorSpec& spec, const CoverageRequest& request,
                               const SpinParams& params);

/// Direct angle test: p lies in the forward nappe of the cone.
bool cone_contains(const JetCone& cone, const Vec3& p);

/// Seeded Monte-Carlo estimate of the area of the union of cone sections on
/// `plane`, sampling `samples` points uniformly in the box [lo, hi].
double monte_carlo_area(std::span<const JetCone> cones, const Plane& plane, const Vec2& lo, const Vec2& hi,
                        std::size_t samples, std::uint64_t seed);

/// Target plane perpendicular to the straight tip axis at `distance` ahead of the straight tip.
Plane default_target_plane(const ManipulatorSpec& spec, double distance);

}  // namespace ncj

#pragma once

// Tubular environment: a polyline centerline with per-vertex radius. The
// tube is the union of spheres swept along it, so the wall sits at the
// linearly interpolated radius around the nearest centerline point.

#include "ncj/chain.hpp"
#include "ncj/geometry.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace ncj {

struct LumenPath {
  std::vector<Vec3> vertices;
  std::vector<double> radii;

  /// >= 2 vertices, matching radii, radii > 0, consecutive vertices distinct.
  void validate() const;
};

/// Reads `x_mm, y_mm, z_mm, radius_mm` rows; a non-numeric first row is a header.
LumenPath load_path_csv(const std::filesystem::path& file);

struct NearestPoint {
  Vec3 point = Vec3::Zero();
  double distance = 0.0;
  double radius = 0.0;  // interpolated tube radius at `point`
  std::size_t segment = 0;
  double t = 0.0;
};

NearestPoint nearest_on_path(const LumenPath& path, const Vec3& p);

/// Base pose at insertion depth s: the path start advanced by s along the
/// first segment's tangent, +z aligned with that tangent.
Pose3 insertion_pose(const LumenPath& path, double depth);

struct InsertionState {
  double depth = 0.0;
  Pose3 base;
  ConfigState config;
};

InsertionState make_insertion(const LumenPath& path, const ManipulatorSpec& spec, double depth,
                              ConfigState config);

/// Backbone points: `samples_per_joint` per joint arc plus the rigid tip
/// extension, in world coordinates.
std::vector<Vec3> backbone_samples(const ManipulatorSpec& spec, const ConfigState& config, const Pose3& base,
                                   int samples_per_joint);

struct ClearanceResult {
  double min_clearance = 0.0;  // negative means the body crosses the wall
  Vec3 location = Vec3::Zero();
  std::size_t sample_index = 0;
};

ClearanceResult clearance(const LumenPath& path, const ManipulatorSpec& spec, const InsertionState& state,
                          int samples_per_joint);

struct SteerStep {
  double depth = 0.0;
  std::vector<double> section_angles;
  double clearance = 0.0;
  bool passable = false;
};

/// Default search grid per section: -30..+30 deg in 1 deg steps.
std::vector<double> default_angle_grid();

/// Exhaustive grid search per depth maximizing min clearance. Ties go to the
/// smaller sum of |angles|, then to the lexicographically smaller angles.
std::vector<SteerStep> auto_steer(const LumenPath& path, const ManipulatorSpec& spec,
                                  std::span<const double> depths,
                                  const std::vector<std::vector<double>>& grids, int samples_per_joint = 8);

/// Illustrative bronchus-like path: 45 mm straight, a 30 deg bend of radius
/// 80 mm toward +x, then 30 mm straight. Not derived from measured anatomy.
LumenPath demo_bronchus_path();

}  // namespace ncj

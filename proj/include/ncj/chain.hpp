#pragma once

// Multi-section manipulator built from identical rolling joints.
//
// The base frame has +z along the straight backbone. Each section bends in
// one plane; a positive section angle bends toward +y (up/down plane) or
// toward +x (left/right plane).

#include "ncj/geometry.hpp"
#include "ncj/profile.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ncj {

enum class BendPlane { kUpDown, kLeftRight };

std::string to_string(BendPlane plane);

struct Section {
  std::vector<int> joints;  // ascending joint indices (joint i connects S_i and S_{i+1})
  BendPlane plane = BendPlane::kUpDown;
  double limit = deg_to_rad(30.0);  // section bend limit, rad

  bool operator==(const Section&) const = default;
};

struct ManipulatorSpec {
  int segment_count = 13;
  std::vector<Section> sections;
  JointDesign joint;
  double outer_diameter = 5.0;
  double lumen_diameter = 1.2;
  double tendon_radius = 1.75;
  double rigid_extra = 3.0;  // appended beyond the last segment origin (needle mount)
  double motor_step = deg_to_rad(0.4);
  double wheel_radius = 0.01 / deg_to_rad(0.4);  // one step == 0.01 mm of tendon travel

  int joint_count() const { return segment_count - 1; }

  /// Effective section limit: min(configured limit, joints * theta_max).
  double section_limit(std::size_t section) const;

  /// Tendon travel for one motor step, mm.
  double step_travel() const { return motor_step * wheel_radius; }

  /// Lists every violated invariant; throws ValidationError if any.
  void validate() const;

  bool operator==(const ManipulatorSpec&) const = default;
};

/// Default prototype: 13 segments, 5 mm OD, two 6-joint sections.
ManipulatorSpec default_manipulator();

struct ConfigState {
  std::vector<double> joint_angles;

  bool operator==(const ConfigState&) const = default;
};

/// Straight configuration for `spec`.
ConfigState straight_config(const ManipulatorSpec& spec);

/// Distributes each section angle equally over that section's joints.
ConfigState section_config(const ManipulatorSpec& spec, std::span<const double> section_angles);

/// Per-section sums of joint angles.
std::vector<double> section_angles(const ManipulatorSpec& spec, const ConfigState& config);

/// Throws DomainError on size mismatch, joint over theta_max, or a non-zero
/// angle on a joint that belongs to no section.
void validate_config(const ManipulatorSpec& spec, const ConfigState& config);

/// 3D relative pose of one joint bent by theta in `plane`.
Pose3 joint_transform(const JointDesign& joint, BendPlane plane, double theta);

BendPlane joint_plane(const ManipulatorSpec& spec, int joint);

struct ChainPose {
  std::vector<Pose3> segments;  // one per segment origin, base first
  Pose3 tip;
  double centerline_length = 0.0;
};

ChainPose forward_kinematics(const ManipulatorSpec& spec, const ConfigState& config);

/// Relative pose of segment `last` in the frame of segment `first`.
Pose3 chain_transform(const ManipulatorSpec& spec, const ConfigState& config, int first, int last);

double straight_length(const ManipulatorSpec& spec);

struct AuditRow {
  int config_id = 0;
  double length = 0.0;
  double circular_length = 0.0;
  double deviation = 0.0;           // |length - straight|
  double circular_deviation = 0.0;  // straight - circular_length
};

struct AuditReport {
  double straight_length = 0.0;
  std::vector<AuditRow> rows;
  double max_deviation = 0.0;
  double max_circular_deviation = 0.0;
};

AuditReport centerline_audit(const ManipulatorSpec& spec, std::span<const ConfigState> configs);

enum class Tendon { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

std::string to_string(Tendon t);

struct TendonState {
  std::array<double, 4> length{};
  std::array<double, 4> displacement{};

  double operator[](Tendon t) const { return displacement[static_cast<int>(t)]; }
};

/// Tendons run through guide holes at tendon_radius on every segment disc
/// (the disc sits at the segment origin) from S_0 to the last segment of the
/// owning section. Length is the sum of hole-to-hole chords.
TendonState tendon_lengths(const ManipulatorSpec& spec, const ConfigState& config);

/// Chord between consecutive guide holes across one joint, for a hole at
/// signed in-plane offset `offset` (positive on the side a positive bend opens).
double joint_tendon_chord(double half_pitch, double offset, double theta);

/// Tendon shortened by a positive bend of the section (up or right).
Tendon pulling_tendon(BendPlane plane);
Tendon antagonist_tendon(BendPlane plane);

struct ActuationResult {
  ConfigState config;
  std::vector<double> section_angles;
  std::vector<bool> saturated;
};

/// Section angles reproducing the given pull-tendon travels (mm, positive =
/// pulled in). Sections are solved in order of their distal joint because
/// distal tendons pass through proximal sections.
ActuationResult solve_tendon_travel(const ManipulatorSpec& spec, std::span<const double> travel);

/// Motor steps per section -> configuration (steps * motor_step * wheel_radius of travel).
ActuationResult actuate(const ManipulatorSpec& spec, std::span<const std::int64_t> steps);

/// Pull-tendon travel (mm) of every section at `config`.
std::vector<double> tendon_travel(const ManipulatorSpec& spec, const ConfigState& config);

struct QuantizedAngles {
  std::vector<double> angles;
  std::vector<std::int64_t> steps;
  std::vector<double> step_width;  // angle spanned by the bracketing step, rad
};

/// Snaps section angles to the nearest motor-step-reachable values.
QuantizedAngles quantize_to_steps(const ManipulatorSpec& spec, std::span<const double> angles);

struct WorkspacePoint {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  Vec3 tip = Vec3::Zero();
};

struct WorkspaceResult {
  std::vector<WorkspacePoint> points;  // alpha1-major grid order
  /// Largest section angle reached toward up, down, left, right (rad).
  std::array<double, 4> max_bend{};
};

/// Tip positions over the Cartesian product of two section-angle grids.
WorkspaceResult workspace(const ManipulatorSpec& spec, std::span<const double> grid1,
                          std::span<const double> grid2);

}  // namespace ncj

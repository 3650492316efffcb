#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace ncj {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;

/// Below this magnitude (rad) joint angles use series expansions instead of
/// the 2L/theta closed forms.
inline constexpr double kAngleEpsilon = 1e-6;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline Vec2 mirror_x(const Vec2& p) { return {-p.x(), p.y()}; }

/// Planar rigid pose: position plus anticlockwise orientation.
struct Pose2 {
  Vec2 position = Vec2::Zero();
  double angle = 0.0;
};

/// Rigid 3D pose. `rotation` maps local coordinates into the parent frame.
struct Pose3 {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& local) const { return rotation * local + translation; }

  Pose3 operator*(const Pose3& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }

  Pose3 inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  /// Local +z expressed in the parent frame (the forward/axial direction).
  Vec3 axis() const { return rotation.col(2); }
};

}  // namespace ncj

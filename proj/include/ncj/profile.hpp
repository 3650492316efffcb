#pragma once

// Rolling-joint contour synthesis for a constant-length centerline.
//
// Frame convention: the lower segment origin sits at (0, 0) with its axis
// along +y. A straight joint spans 2L between adjacent origins and the
// contact plane is at y = L. Positive angles are anticlockwise and bend the
// upper segment toward -x.

#include "ncj/geometry.hpp"
#include "ncj/polygon.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ncj {

/// Scalar design of one joint. `chord` (S) is always n * half_pitch.
struct JointDesign {
  double half_pitch = 3.5;  // L, mm
  double n = 0.6;           // normalization factor N
  double chord = 2.1;       // S = N * L, mm
  double theta_max = kPi / 4;

  /// Validates L > 0, 0 < N < 2, 0 < theta_max <= pi/2; throws ValidationError.
  static JointDesign make(double half_pitch, double n, double theta_max);

  bool operator==(const JointDesign&) const = default;
};

struct CircularBaseline {
  bool straight = false;
  double radius = 0.0;  // signed; +inf when straight
  double arc_length = 0.0;
  Vec2 tip = Vec2::Zero();
  double shortening = 0.0;  // L - arc_length
};

/// Circular-joint reference model with chord L. Throws DomainError for |theta| > pi/2.
CircularBaseline circular_baseline(double half_pitch, double theta);

struct ContactPair {
  bool straight = false;
  double radius = 0.0;  // R* = 2L / theta, +inf when straight
  Vec2 midpoint = Vec2::Zero();
  Vec2 left = Vec2::Zero();
  Vec2 right = Vec2::Zero();
};

ContactPair contact_pair(const JointDesign& design, double theta);

/// Homogeneous 2D rigid transform: rotation by theta/2, translation to the
/// deflected arc midpoint. Maps straight-state contact coordinates (taken
/// relative to the straight contact midpoint) to their deflected positions.
class PlanarTransform {
 public:
  PlanarTransform() = default;
  explicit PlanarTransform(const Mat3& m) : m_(m) {}

  Vec2 apply(const Vec2& p) const { return m_.topLeftCorner<2, 2>() * p + m_.topRightCorner<2, 1>(); }
  Mat2 rotation() const { return m_.topLeftCorner<2, 2>(); }
  Vec2 translation() const { return m_.topRightCorner<2, 1>(); }
  const Mat3& matrix() const { return m_; }
  PlanarTransform inverse() const;

 private:
  Mat3 m_ = Mat3::Identity();
};

PlanarTransform deflect_transform(double half_pitch, double theta);

/// Pose of the upper segment origin in the lower segment frame.
Pose2 upper_segment_pose(double half_pitch, double theta);

/// Arc length between adjacent segment origins, recovered from the pose
/// (chord / (2 sin(theta/2)) * theta). Equals 2L for every admissible theta.
double centerline_span(const JointDesign& design, double theta);

/// Length a circular-joint pitch of nominal 2L would have at theta: the
/// chord-L arc of the baseline model plus the other, undeflected half.
double circular_span(double half_pitch, double theta);

struct ClosureChecks {
  bool apex_found = false;      // (a) apex in (0, pi/2] inside the sweep
  bool branch_simple = false;   // (b) branch_R simple on [0, apex]
  bool stays_positive = false;  // (c) x > 0 strictly before the apex
  bool contour_simple = false;  // (d) closed contour polygon simple

  bool all() const { return apex_found && branch_simple && stays_positive && contour_simple; }
};

struct JointProfile {
  JointDesign design;
  double sweep = 0.0;
  std::vector<double> theta_samples;
  std::vector<Vec2> branch_r;  // P_R(theta_i)
  std::vector<Vec2> branch_l;  // P_L(theta_i) == mirror(P_R(-theta_i))
  std::optional<double> theta_apex;
  ClosureChecks closure;
  bool closed = false;
  bool simple = false;
  std::vector<std::string> diagnostics;

  std::size_t zero_index() const { return theta_samples.size() / 2; }
};

inline constexpr int kDefaultProfileSamples = 256;

/// Samples the contact loci on a symmetric grid. The sample count is rounded
/// up to an odd number so that theta = 0 is always a grid point.
JointProfile generate_profile(const JointDesign& design, double sweep,
                              int n_samples = kDefaultProfileSamples);

/// Closed trajectory of the contact loci (right branch up to the apex, its
/// mirror, base closed at y = 0). Empty when there is no apex.
poly::Ring contour_polygon(const JointProfile& profile);

/// Contact-bearing head of the lower segment: right flank P_R(theta <= 0),
/// the contact chord, left flank P_L(theta >= 0) over +-theta_max, closed
/// down to the segment origin plane.
poly::Ring head_polygon(const JointProfile& profile);

/// Upper segment's mating surface in the upper frame: the contact loci
/// expressed there, which is the lower branch reflected across its contact
/// plane, i.e. (x, -y).
std::vector<Vec2> mating_contour(const JointProfile& profile);

/// Upper segment head (mirror of head_polygon) placed at upper_segment_pose(theta).
poly::Ring placed_mating_polygon(const JointProfile& profile, double theta);

inline constexpr double kTouchAreaTolerance = 1e-9;  // mm^2

struct InterferenceReport {
  double theta = 0.0;
  double overlap_area = 0.0;     // mm^2
  double max_penetration = 0.0;  // mm

  bool interferes() const { return overlap_area > kTouchAreaTolerance; }
};

/// Rigid overlap between the lower head and the placed upper head.
/// Throws StructuralError when either polygon is self-intersecting.
InterferenceReport check_interference(const JointProfile& profile, double theta);

/// Sweep check_interference over [-theta_max, +theta_max] with the given step.
std::vector<InterferenceReport> interference_sweep(const JointProfile& profile, double step);

inline constexpr double kPaperCriticalN = 0.60;

struct CriticalNResult {
  double n_star = 0.0;
  double paper_reference = kPaperCriticalN;
  double deviation = 0.0;  // n_star - paper_reference
  double theta_apex = 0.0;
  int iterations = 0;
  /// Worst overlap of the N* profile over +-theta_max (0.5 deg grid).
  double max_overlap_at_n_star = 0.0;
  std::string criterion;
};

/// Closure predicate used by the critical-N search (sweep pi/2, 256 samples).
bool closure_holds(double half_pitch, double n, double theta_max);

/// Bisection over N in (0, 2) for the supremum of N whose contour closes.
/// Throws DomainError when the bracket does not straddle the criterion.
CriticalNResult find_critical_n(double half_pitch, double theta_max, double tolerance);

std::string closure_criterion_text();

}  // namespace ncj

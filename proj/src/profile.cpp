#include "ncj/profile.hpp"

#include "ncj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncj {
namespace {

constexpr double kApexTolerance = 1e-10;
constexpr double kInterferenceStep = deg_to_rad(0.5);

void require_angle(double theta, const char* op) {
  if (!(std::abs(theta) <= kPi / 2)) {
    throw DomainError(std::string(op) + ": |theta| must not exceed pi/2");
  }
}

// (2/theta) * (cos(theta/2) - 1) and (2/theta) * sin(theta/2); the arc
// midpoint at distance L along a circle of radius 2L/theta is L times these.
// The cosine difference is rewritten as -2 sin^2(theta/4) to avoid cancellation.
Vec2 midpoint_coefficients(double theta) {
  if (std::abs(theta) < kAngleEpsilon) {
    double t2 = theta * theta;
    return {-theta / 4.0 + theta * t2 / 192.0, 1.0 - t2 / 24.0};
  }
  double s4 = std::sin(theta / 4.0);
  return {-4.0 * s4 * s4 / theta, 2.0 * std::sin(theta / 2.0) / theta};
}

Vec2 rotate(const Vec2& p, double angle) {
  double c = std::cos(angle);
  double s = std::sin(angle);
  return {c * p.x() - s * p.y(), s * p.x() + c * p.y()};
}

Vec2 right_contact(const JointDesign& d, double theta) {
  Vec2 m = d.half_pitch * midpoint_coefficients(theta);
  double h = d.chord / 2.0;
  return {m.x() + h * std::cos(theta / 2.0), m.y() + h * std::sin(theta / 2.0)};
}

// Smallest theta in (lo, hi] where P_R.x crosses zero, assuming x(lo) > 0 >= x(hi).
double bisect_apex(const JointDesign& d, double lo, double hi) {
  while (hi - lo > kApexTolerance) {
    double mid = 0.5 * (lo + hi);
    if (right_contact(d, mid).x() > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<Vec2> right_flank(const JointProfile& profile) {
  const double tmax = profile.design.theta_max;
  std::vector<Vec2> flank;
  flank.push_back(right_contact(profile.design, -tmax));
  for (std::size_t i = 0; i < profile.theta_samples.size(); ++i) {
    double t = profile.theta_samples[i];
    if (t > -tmax && t <= 0.0) flank.push_back(profile.branch_r[i]);
  }
  return flank;
}

}  // namespace

JointDesign JointDesign::make(double half_pitch, double n, double theta_max) {
  std::vector<std::string> errors;
  if (!(half_pitch > 0.0)) errors.emplace_back("joint.L must be > 0");
  if (!(n > 0.0 && n < 2.0)) errors.emplace_back("joint.N out of (0,2)");
  if (!(theta_max > 0.0 && theta_max <= kPi / 2)) errors.emplace_back("joint.theta_max out of (0,pi/2]");
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return JointDesign{half_pitch, n, n * half_pitch, theta_max};
}

CircularBaseline circular_baseline(double half_pitch, double theta) {
  require_angle(theta, "circular_baseline");
  CircularBaseline out;
  const double l = half_pitch;
  if (std::abs(theta) < kAngleEpsilon) {
    double t2 = theta * theta;
    out.straight = true;
    out.radius = std::numeric_limits<double>::infinity();
    out.arc_length = l * (1.0 - t2 / 12.0);
    out.tip = {-l * theta / 2.0, l * (1.0 - t2 / 4.0)};
  } else {
    double half_tan = std::tan(theta / 2.0);
    double s2 = std::sin(theta / 2.0);
    out.radius = l / (2.0 * half_tan);
    out.arc_length = l * theta / (2.0 * half_tan);
    // cos(theta) - 1 == -2 sin^2(theta/2)
    out.tip = {out.radius * (-2.0 * s2 * s2), out.radius * std::sin(theta)};
  }
  out.shortening = l - out.arc_length;
  return out;
}

ContactPair contact_pair(const JointDesign& design, double theta) {
  require_angle(theta, "contact_pair");
  ContactPair out;
  out.straight = std::abs(theta) < kAngleEpsilon;
  out.radius = out.straight ? std::numeric_limits<double>::infinity() : 2.0 * design.half_pitch / theta;
  out.midpoint = design.half_pitch * midpoint_coefficients(theta);
  Vec2 half_chord = 0.5 * design.chord * Vec2(std::cos(theta / 2.0), std::sin(theta / 2.0));
  out.left = out.midpoint - half_chord;
  out.right = out.midpoint + half_chord;
  return out;
}

PlanarTransform PlanarTransform::inverse() const {
  Mat2 rt = rotation().transpose();
  Mat3 m = Mat3::Identity();
  m.topLeftCorner<2, 2>() = rt;
  m.topRightCorner<2, 1>() = -(rt * translation());
  return PlanarTransform(m);
}

PlanarTransform deflect_transform(double half_pitch, double theta) {
  require_angle(theta, "deflect_transform");
  double c = std::cos(theta / 2.0);
  double s = std::sin(theta / 2.0);
  Vec2 t = half_pitch * midpoint_coefficients(theta);
  Mat3 m;
  m << c, -s, t.x(),
       s, c, t.y(),
       0.0, 0.0, 1.0;
  return PlanarTransform(m);
}

Pose2 upper_segment_pose(double half_pitch, double theta) {
  require_angle(theta, "upper_segment_pose");
  const double l = half_pitch;
  if (std::abs(theta) < kAngleEpsilon) {
    double t2 = theta * theta;
    return {{-l * theta + l * theta * t2 / 12.0, 2.0 * l * (1.0 - t2 / 6.0)}, theta};
  }
  double r = 2.0 * l / theta;
  double s = std::sin(theta / 2.0);
  return {{r * (-2.0 * s * s), r * std::sin(theta)}, theta};
}

double centerline_span(const JointDesign& design, double theta) {
  Pose2 pose = upper_segment_pose(design.half_pitch, theta);
  double chord = pose.position.norm();
  if (std::abs(theta) < kAngleEpsilon) {
    // arc / chord = (theta/2) / sin(theta/2) = 1 + theta^2/24 + ...
    return chord * (1.0 + theta * theta / 24.0);
  }
  double radius = chord / (2.0 * std::sin(std::abs(theta) / 2.0));
  return radius * std::abs(theta);
}

double circular_span(double half_pitch, double theta) {
  return half_pitch + circular_baseline(half_pitch, theta).arc_length;
}

JointProfile generate_profile(const JointDesign& design, double sweep, int n_samples) {
  if (n_samples < 16) throw DomainError("generate_profile: n_samples must be >= 16");
  if (!(sweep >= design.theta_max) || sweep > kPi / 2) {
    throw DomainError("generate_profile: sweep must lie in [theta_max, pi/2]");
  }
  const int n = n_samples % 2 == 0 ? n_samples + 1 : n_samples;
  const int half = (n - 1) / 2;

  JointProfile p;
  p.design = design;
  p.sweep = sweep;
  p.theta_samples.resize(n);
  p.branch_r.resize(n);
  p.branch_l.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = sweep * static_cast<double>(i - half) / static_cast<double>(half);
    p.theta_samples[i] = t;
    p.branch_r[i] = right_contact(design, t);
  }
  for (int i = 0; i < n; ++i) p.branch_l[i] = mirror_x(p.branch_r[n - 1 - i]);

  for (int i = half + 1; i < n; ++i) {
    if (p.branch_r[i].x() <= 0.0) {
      p.theta_apex = bisect_apex(design, p.theta_samples[i - 1], p.theta_samples[i]);
      break;
    }
  }
  if (!p.theta_apex) p.diagnostics.emplace_back("no apex in sweep");

  p.simple = poly::is_simple_polyline(p.branch_r);
  if (!p.simple) p.diagnostics.emplace_back("branch self-intersects");

  ClosureChecks& c = p.closure;
  c.apex_found = p.theta_apex.has_value() && *p.theta_apex > 0.0 && *p.theta_apex <= kPi / 2;
  if (c.apex_found) {
    std::vector<Vec2> rising;
    c.stays_positive = true;
    for (int i = half; i < n && p.theta_samples[i] < *p.theta_apex; ++i) {
      rising.push_back(p.branch_r[i]);
      if (!(p.branch_r[i].x() > 0.0)) c.stays_positive = false;
    }
    rising.push_back(right_contact(design, *p.theta_apex));
    c.branch_simple = poly::is_simple_polyline(rising);
    c.contour_simple = poly::is_simple_ring(contour_polygon(p));
  }
  p.closed = c.all();
  return p;
}

poly::Ring contour_polygon(const JointProfile& profile) {
  if (!profile.theta_apex) return {};
  std::vector<Vec2> right;
  for (std::size_t i = 0; i < profile.theta_samples.size(); ++i) {
    if (profile.theta_samples[i] < *profile.theta_apex) right.push_back(profile.branch_r[i]);
  }
  Vec2 apex = right_contact(profile.design, *profile.theta_apex);
  apex.x() = 0.0;

  poly::Ring ring;
  ring.reserve(2 * right.size() + 3);
  ring.emplace_back(right.front().x(), 0.0);
  ring.insert(ring.end(), right.begin(), right.end());
  ring.push_back(apex);
  for (auto it = right.rbegin(); it != right.rend(); ++it) ring.push_back(mirror_x(*it));
  ring.emplace_back(-right.front().x(), 0.0);
  return ring;
}

poly::Ring head_polygon(const JointProfile& profile) {
  if (profile.design.theta_max > profile.sweep) {
    throw DomainError("head_polygon: theta_max exceeds the sampled sweep");
  }
  std::vector<Vec2> flank = right_flank(profile);
  const double width = flank.front().x();

  poly::Ring ring;
  ring.reserve(2 * flank.size() + 2);
  ring.emplace_back(width, 0.0);
  ring.insert(ring.end(), flank.begin(), flank.end());
  for (auto it = flank.rbegin(); it != flank.rend(); ++it) ring.push_back(mirror_x(*it));
  ring.emplace_back(-width, 0.0);
  return ring;
}

std::vector<Vec2> mating_contour(const JointProfile& profile) {
  std::vector<Vec2> out;
  out.reserve(profile.branch_r.size());
  for (const auto& p : profile.branch_r) out.emplace_back(p.x(), -p.y());
  return out;
}

poly::Ring placed_mating_polygon(const JointProfile& profile, double theta) {
  poly::Ring head = head_polygon(profile);
  Pose2 pose = upper_segment_pose(profile.design.half_pitch, theta);
  poly::Ring out;
  out.reserve(head.size());
  // Reflection reverses orientation; walk backwards to keep the ring CCW.
  for (auto it = head.rbegin(); it != head.rend(); ++it) {
    out.push_back(rotate(Vec2(it->x(), -it->y()), pose.angle) + pose.position);
  }
  return out;
}

InterferenceReport check_interference(const JointProfile& profile, double theta) {
  if (!(std::abs(theta) <= profile.design.theta_max + 1e-15)) {
    throw DomainError("check_interference: |theta| exceeds theta_max");
  }
  poly::Ring lower = head_polygon(profile);
  poly::Ring upper = placed_mating_polygon(profile, theta);
  if (!poly::is_simple_ring(lower) || !poly::is_simple_ring(upper)) {
    throw StructuralError("check_interference: head polygon is self-intersecting");
  }
  InterferenceReport r;
  r.theta = theta;
  r.overlap_area = poly::overlap_area(lower, upper);
  r.max_penetration = poly::max_penetration(lower, upper);
  return r;
}

std::vector<InterferenceReport> interference_sweep(const JointProfile& profile, double step) {
  const double tmax = profile.design.theta_max;
  const int count = static_cast<int>(std::lround(2.0 * tmax / step)) + 1;
  std::vector<InterferenceReport> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    double t = -tmax + 2.0 * tmax * static_cast<double>(k) / static_cast<double>(count - 1);
    out.push_back(check_interference(profile, std::clamp(t, -tmax, tmax)));
  }
  return out;
}

bool closure_holds(double half_pitch, double n, double theta_max) {
  JointDesign d = JointDesign::make(half_pitch, n, theta_max);
  return generate_profile(d, kPi / 2, kDefaultProfileSamples).closed;
}

std::string closure_criterion_text() {
  return "closed iff (a) P_R.x reaches 0 at some theta_apex in (0, pi/2]; "
         "(b) the rising branch P_R on [0, theta_apex] is simple; "
         "(c) P_R.x > 0 for every sample before theta_apex; "
         "(d) the closed contour polygon is simple. "
         "Sweep pi/2, 257 samples; N* is the supremum of closed N.";
}

CriticalNResult find_critical_n(double half_pitch, double theta_max, double tolerance) {
  if (!(half_pitch > 0.0)) throw DomainError("find_critical_n: L must be > 0");
  if (!(tolerance >= 1e-6)) throw DomainError("find_critical_n: tolerance must be >= 1e-6");

  double lo = 1e-3;
  double hi = 2.0 - 1e-9;
  if (!closure_holds(half_pitch, lo, theta_max)) {
    throw DomainError("find_critical_n: criterion never satisfied");
  }
  if (closure_holds(half_pitch, hi, theta_max)) {
    throw DomainError("find_critical_n: criterion always satisfied");
  }
  CriticalNResult r;
  while (hi - lo > tolerance) {
    double mid = 0.5 * (lo + hi);
    if (closure_holds(half_pitch, mid, theta_max)) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++r.iterations;
  }
  r.n_star = lo;
  r.deviation = r.n_star - r.paper_reference;
  JointProfile best = generate_profile(JointDesign::make(half_pitch, lo, theta_max), kPi / 2);
  r.theta_apex = best.theta_apex.value_or(0.0);
  for (const auto& rep : interference_sweep(best, kInterferenceStep)) {
    r.max_overlap_at_n_star = std::max(r.max_overlap_at_n_star, rep.overlap_area);
  }
  r.criterion = closure_criterion_text();
  return r;
}

}  // namespace ncj

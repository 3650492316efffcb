#include "ncj/chain.hpp"

#include "ncj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncj {
namespace {

// In-plane transverse direction d: a positive bend moves the chain toward -d.
Vec3 plane_direction(BendPlane plane) {
  return plane == BendPlane::kUpDown ? Vec3(0.0, -1.0, 0.0) : Vec3(-1.0, 0.0, 0.0);
}

Vec3 hole_offset(Tendon t, double radius) {
  switch (t) {
    case Tendon::kUp: return {0.0, radius, 0.0};
    case Tendon::kDown: return {0.0, -radius, 0.0};
    case Tendon::kLeft: return {-radius, 0.0, 0.0};
    case Tendon::kRight: return {radius, 0.0, 0.0};
  }
  return Vec3::Zero();
}

int last_joint(const Section& s) { return s.joints.empty() ? -1 : s.joints.back(); }

const Section* section_for_plane(const ManipulatorSpec& spec, BendPlane plane) {
  for (const auto& s : spec.sections) {
    if (s.plane == plane) return &s;
  }
  return nullptr;
}

double tendon_length(const ManipulatorSpec& spec, const ChainPose& fk, Tendon t, int through_joint) {
  const Vec3 h = hole_offset(t, spec.tendon_radius);
  double len = 0.0;
  for (int j = 0; j <= through_joint; ++j) {
    len += (fk.segments[j + 1].apply(h) - fk.segments[j].apply(h)).norm();
  }
  return len;
}

double section_travel(const ManipulatorSpec& spec, const ConfigState& config, std::size_t k) {
  const Section& s = spec.sections[k];
  ChainPose fk = forward_kinematics(spec, config);
  ChainPose straight = forward_kinematics(spec, straight_config(spec));
  Tendon pull = pulling_tendon(s.plane);
  int through = last_joint(s);
  return tendon_length(spec, straight, pull, through) - tendon_length(spec, fk, pull, through);
}

std::vector<std::size_t> solve_order(const ManipulatorSpec& spec) {
  std::vector<std::size_t> order(spec.sections.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return last_joint(spec.sections[a]) < last_joint(spec.sections[b]);
  });
  return order;
}

struct SectionSolve {
  double angle = 0.0;
  bool saturated = false;
};

// Section k's angle giving `target` pull travel, other section angles fixed.
SectionSolve solve_section(const ManipulatorSpec& spec, std::vector<double> angles, std::size_t k,
                           double target) {
  const double lim = spec.section_limit(k);
  auto f = [&](double a) {
    angles[k] = a;
    return section_travel(spec, section_config(spec, angles), k) - target;
  };
  double f_lo = f(-lim);
  double f_hi = f(lim);
  if (f_lo > f_hi) throw std::logic_error("tendon model is not monotone in the section angle");
  if (f_hi < 0.0) return {lim, true};
  if (f_lo > 0.0) return {-lim, true};
  if (f(0.0) == 0.0) return {0.0, false};
  double lo = -lim;
  double hi = lim;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), false};
}

}  // namespace

std::string to_string(BendPlane plane) {
  return plane == BendPlane::kUpDown ? "up_down" : "left_right";
}

std::string to_string(Tendon t) {
  switch (t) {
    case Tendon::kUp: return "up";
    case Tendon::kDown: return "down";
    case Tendon::kLeft: return "left";
    case Tendon::kRight: return "right";
  }
  return "?";
}

double ManipulatorSpec::section_limit(std::size_t section) const {
  const Section& s = sections.at(section);
  return std::min(s.limit, static_cast<double>(s.joints.size()) * joint.theta_max);
}

void ManipulatorSpec::validate() const {
  std::vector<std::string> errors;
  if (segment_count < 2) errors.emplace_back("manipulator.segment_count must be >= 2");
  if (!(joint.half_pitch > 0.0)) errors.emplace_back("joint.L must be > 0");
  if (!(joint.n > 0.0 && joint.n < 2.0)) errors.emplace_back("joint.N out of (0,2)");
  if (!(joint.theta_max > 0.0 && joint.theta_max <= kPi / 2)) {
    errors.emplace_back("joint.theta_max out of (0,pi/2]");
  }
  if (!(outer_diameter > 0.0)) errors.emplace_back("manipulator.outer_diameter_mm must be > 0");
  if (!(lumen_diameter > 0.0 && lumen_diameter < outer_diameter)) {
    errors.emplace_back("manipulator.lumen_diameter_mm must lie in (0, outer_diameter)");
  }
  if (!(tendon_radius > 0.0 && tendon_radius < outer_diameter / 2.0)) {
    errors.emplace_back("manipulator.tendon_radius_mm must lie in (0, outer_diameter/2)");
  }
  if (!(rigid_extra >= 0.0)) errors.emplace_back("manipulator.rigid_extra_mm must be >= 0");
  if (!(motor_step > 0.0)) errors.emplace_back("manipulator.motor_step must be > 0");
  if (!(wheel_radius > 0.0)) errors.emplace_back("manipulator.wheel_radius_mm must be > 0");

  std::vector<int> seen(std::max(segment_count - 1, 0), 0);
  int prev_last = -1;
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const Section& s = sections[k];
    std::string where = "manipulator.sections[" + std::to_string(k) + "]";
    if (s.joints.empty()) errors.push_back(where + ".joints must not be empty");
    for (std::size_t i = 0; i < s.joints.size(); ++i) {
      int j = s.joints[i];
      if (j < 0 || j >= segment_count - 1) {
        errors.push_back(where + ".joints: index " + std::to_string(j) + " out of range");
        continue;
      }
      if (seen[j]++) errors.push_back(where + ".joints: joint " + std::to_string(j) + " assigned twice");
      if (i > 0 && j <= s.joints[i - 1]) errors.push_back(where + ".joints must be ascending");
    }
    if (!s.joints.empty() && s.joints.front() <= prev_last) {
      errors.push_back(where + ".joints must follow the previous section");
    }
    prev_last = std::max(prev_last, last_joint(s));
    if (!(s.limit > 0.0)) errors.push_back(where + ".limit must be > 0");
    for (std::size_t m = 0; m < k; ++m) {
      if (sections[m].plane == s.plane) errors.push_back(where + ".plane duplicates another section");
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

ManipulatorSpec default_manipulator() {
  ManipulatorSpec spec;
  spec.joint = JointDesign::make(3.5, 0.6, kPi / 4);
  spec.sections = {
      Section{{0, 1, 2, 3, 4, 5}, BendPlane::kUpDown, deg_to_rad(30.0)},
      Section{{6, 7, 8, 9, 10, 11}, BendPlane::kLeftRight, deg_to_rad(30.0)},
  };
  return spec;
}

ConfigState straight_config(const ManipulatorSpec& spec) {
  return ConfigState{std::vector<double>(static_cast<std::size_t>(spec.joint_count()), 0.0)};
}

ConfigState section_config(const ManipulatorSpec& spec, std::span<const double> angles) {
  if (angles.size() != spec.sections.size()) {
    throw DomainError("section_config: expected one angle per section");
  }
  ConfigState c = straight_config(spec);
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const auto& joints = spec.sections[k].joints;
    double per_joint = angles[k] / static_cast<double>(joints.size());
    for (int j : joints) c.joint_angles[j] = per_joint;
  }
  return c;
}

std::vector<double> section_angles(const ManipulatorSpec& spec, const ConfigState& config) {
  std::vector<double> out;
  out.reserve(spec.sections.size());
  for (const auto& s : spec.sections) {
    double sum = 0.0;
    for (int j : s.joints) sum += config.joint_angles.at(j);
    out.push_back(sum);
  }
  return out;
}

void validate_config(const ManipulatorSpec& spec, const ConfigState& config) {
  if (config.joint_angles.size() != static_cast<std::size_t>(spec.joint_count())) {
    throw DomainError("config/spec size mismatch: " + std::to_string(config.joint_angles.size()) +
                      " angles for " + std::to_string(spec.joint_count()) + " joints");
  }
  std::vector<bool> active(config.joint_angles.size(), false);
  for (const auto& s : spec.sections) {
    for (int j : s.joints) active[j] = true;
  }
  for (std::size_t j = 0; j < active.size(); ++j) {
    double a = config.joint_angles[j];
    if (!(std::abs(a) <= spec.joint.theta_max * (1.0 + 1e-12))) {
      throw DomainError("joint " + std::to_string(j) + " exceeds theta_max");
    }
    if (!active[j] && a != 0.0) {
      throw DomainError("joint " + std::to_string(j) + " belongs to no section but is bent");
    }
  }
}

Pose3 joint_transform(const JointDesign& joint, BendPlane plane, double theta) {
  const Vec3 d = plane_direction(plane);
  const Vec3 z = Vec3::UnitZ();
  const Vec3 w = d.cross(z);
  Pose2 p = upper_segment_pose(joint.half_pitch, theta);
  double c = std::cos(theta);
  double s = std::sin(theta);
  Pose3 out;
  out.rotation = c * (d * d.transpose() + z * z.transpose()) + s * (z * d.transpose() - d * z.transpose()) +
                 w * w.transpose();
  out.translation = p.position.x() * d + p.position.y() * z;
  return out;
}

BendPlane joint_plane(const ManipulatorSpec& spec, int joint) {
  for (const auto& s : spec.sections) {
    if (std::find(s.joints.begin(), s.joints.end(), joint) != s.joints.end()) return s.plane;
  }
  return BendPlane::kUpDown;
}

ChainPose forward_kinematics(const ManipulatorSpec& spec, const ConfigState& config) {
  validate_config(spec, config);
  ChainPose out;
  out.segments.reserve(static_cast<std::size_t>(spec.segment_count));
  out.segments.emplace_back();
  for (int j = 0; j < spec.joint_count(); ++j) {
    double theta = config.joint_angles[j];
    out.segments.push_back(out.segments.back() * joint_transform(spec.joint, joint_plane(spec, j), theta));
    out.centerline_length += centerline_span(spec.joint, theta);
  }
  Pose3 extra;
  extra.translation = Vec3(0.0, 0.0, spec.rigid_extra);
  out.tip = out.segments.back() * extra;
  out.centerline_length += spec.rigid_extra;
  return out;
}

Pose3 chain_transform(const ManipulatorSpec& spec, const ConfigState& config, int first, int last) {
  validate_config(spec, config);
  if (first < 0 || last >= spec.segment_count || first > last) {
    throw DomainError("chain_transform: invalid segment range");
  }
  Pose3 out;
  for (int j = first; j < last; ++j) {
    out = out * joint_transform(spec.joint, joint_plane(spec, j), config.joint_angles[j]);
  }
  return out;
}

double straight_length(const ManipulatorSpec& spec) {
  return spec.joint_count() * 2.0 * spec.joint.half_pitch + spec.rigid_extra;
}

AuditReport centerline_audit(const ManipulatorSpec& spec, std::span<const ConfigState> configs) {
  AuditReport r;
  r.straight_length = straight_length(spec);
  int id = 0;
  for (const auto& c : configs) {
    validate_config(spec, c);
    AuditRow row;
    row.config_id = id++;
    row.length = spec.rigid_extra;
    row.circular_length = spec.rigid_extra;
    for (double theta : c.joint_angles) {
      row.length += centerline_span(spec.joint, theta);
      row.circular_length += circular_span(spec.joint.half_pitch, theta);
    }
    row.deviation = std::abs(row.length - r.straight_length);
    row.circular_deviation = r.straight_length - row.circular_length;
    r.max_deviation = std::max(r.max_deviation, row.deviation);
    r.max_circular_deviation = std::max(r.max_circular_deviation, row.circular_deviation);
    r.rows.push_back(row);
  }
  return r;
}

double joint_tendon_chord(double half_pitch, double offset, double theta) {
  if (std::abs(theta) < kAngleEpsilon) {
    // 2 (2L/theta + h) sin(theta/2) expanded around 0
    return 2.0 * half_pitch * (1.0 - theta * theta / 24.0) + offset * theta;
  }
  return 2.0 * std::abs(2.0 * half_pitch / theta + offset) * std::abs(std::sin(theta / 2.0));
}

Tendon pulling_tendon(BendPlane plane) { return plane == BendPlane::kUpDown ? Tendon::kUp : Tendon::kRight; }

Tendon antagonist_tendon(BendPlane plane) {
  return plane == BendPlane::kUpDown ? Tendon::kDown : Tendon::kLeft;
}

TendonState tendon_lengths(const ManipulatorSpec& spec, const ConfigState& config) {
  ChainPose fk = forward_kinematics(spec, config);
  ChainPose straight = forward_kinematics(spec, straight_config(spec));
  TendonState out;
  for (Tendon t : {Tendon::kUp, Tendon::kDown, Tendon::kLeft, Tendon::kRight}) {
    BendPlane plane = (t == Tendon::kUp || t == Tendon::kDown) ? BendPlane::kUpDown : BendPlane::kLeftRight;
    const Section* s = section_for_plane(spec, plane);
    if (!s) continue;
    int i = static_cast<int>(t);
    out.length[i] = tendon_length(spec, fk, t, last_joint(*s));
    out.displacement[i] = out.length[i] - tendon_length(spec, straight, t, last_joint(*s));
  }
  return out;
}

std::vector<double> tendon_travel(const ManipulatorSpec& spec, const ConfigState& config) {
  std::vector<double> out;
  for (std::size_t k = 0; k < spec.sections.size(); ++k) out.push_back(section_travel(spec, config, k));
  return out;
}

ActuationResult solve_tendon_travel(const ManipulatorSpec& spec, std::span<const double> travel) {
  if (travel.size() != spec.sections.size()) {
    throw DomainError("solve_tendon_travel: expected one travel per section");
  }
  ActuationResult r;
  r.section_angles.assign(spec.sections.size(), 0.0);
  r.saturated.assign(spec.sections.size(), false);
  for (std::size_t k : solve_order(spec)) {
    SectionSolve s = solve_section(spec, r.section_angles, k, travel[k]);
    r.section_angles[k] = s.angle;
    r.saturated[k] = s.saturated;
  }
  r.config = section_config(spec, r.section_angles);
  return r;
}

ActuationResult actuate(const ManipulatorSpec& spec, std::span<const std::int64_t> steps) {
  if (!(spec.wheel_radius > 0.0)) throw DomainError("actuate: wheel_radius not configured");
  if (steps.size() != spec.sections.size()) throw DomainError("actuate: expected one step count per section");
  std::vector<double> travel;
  travel.reserve(steps.size());
  for (auto s : steps) travel.push_back(static_cast<double>(s) * spec.step_travel());
  return solve_tendon_travel(spec, travel);
}

QuantizedAngles quantize_to_steps(const ManipulatorSpec& spec, std::span<const double> angles) {
  if (angles.size() != spec.sections.size()) throw DomainError("quantize_to_steps: one angle per section");
  QuantizedAngles q;
  q.angles.assign(angles.begin(), angles.end());
  q.steps.assign(angles.size(), 0);
  q.step_width.assign(angles.size(), 0.0);
  const double step = spec.step_travel();
  for (std::size_t k : solve_order(spec)) {
    std::vector<double> probe = q.angles;
    probe[k] = angles[k];
    double travel = section_travel(spec, section_config(spec, probe), k);
    auto s0 = static_cast<std::int64_t>(std::floor(travel / step));
    double a_lo = solve_section(spec, q.angles, k, static_cast<double>(s0) * step).angle;
    double a_hi = solve_section(spec, q.angles, k, static_cast<double>(s0 + 1) * step).angle;
    bool take_hi = (a_hi - angles[k]) < (angles[k] - a_lo);
    q.angles[k] = take_hi ? a_hi : a_lo;
    q.steps[k] = take_hi ? s0 + 1 : s0;
    q.step_width[k] = a_hi - a_lo;
  }
  return q;
}

WorkspaceResult workspace(const ManipulatorSpec& spec, std::span<const double> grid1,
                          std::span<const double> grid2) {
  if (spec.sections.size() != 2) throw DomainError("workspace: expects a two-section manipulator");
  for (std::size_t k = 0; k < 2; ++k) {
    double lim = spec.section_limit(k) * (1.0 + 1e-12);
    for (double a : (k == 0 ? grid1 : grid2)) {
      if (std::abs(a) > lim) throw DomainError("workspace: grid exceeds section limit");
    }
  }
  WorkspaceResult r;
  r.points.reserve(grid1.size() * grid2.size());
  auto record = [&](BendPlane plane, double a) {
    int pos = plane == BendPlane::kUpDown ? static_cast<int>(Tendon::kUp) : static_cast<int>(Tendon::kRight);
    int neg = plane == BendPlane::kUpDown ? static_cast<int>(Tendon::kDown) : static_cast<int>(Tendon::kLeft);
    r.max_bend[pos] = std::max(r.max_bend[pos], a);
    r.max_bend[neg] = std::max(r.max_bend[neg], -a);
  };
  for (double a1 : grid1) {
    for (double a2 : grid2) {
      std::array<double, 2> angles{a1, a2};
      ChainPose fk = forward_kinematics(spec, section_config(spec, angles));
      r.points.push_back({a1, a2, fk.tip.translation});
      record(spec.sections[0].plane, a1);
      record(spec.sections[1].plane, a2);
    }
  }
  return r;
}

}  // namespace ncj

#include "ncj/lumen.hpp"

#include "ncj/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace ncj {
namespace {

bool parse_row(const std::string& line, std::array<double, 4>& out) {
  std::stringstream ss(line);
  std::string cell;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(ss, cell, ',')) return false;
    try {
      std::size_t used = 0;
      out[i] = std::stod(cell, &used);
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

struct Candidate {
  double clearance;
  double abs_sum;
  std::vector<double> angles;
};

// Strict total order: larger clearance, then smaller |angles|, then lexicographic.
bool better(const Candidate& a, const Candidate& b) {
  if (a.clearance != b.clearance) return a.clearance > b.clearance;
  if (a.abs_sum != b.abs_sum) return a.abs_sum < b.abs_sum;
  return a.angles < b.angles;
}

}  // namespace

void LumenPath::validate() const {
  std::vector<std::string> errors;
  if (vertices.size() < 2) errors.emplace_back("path needs at least 2 vertices");
  if (radii.size() != vertices.size()) errors.emplace_back("path radii count must match vertices");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) errors.push_back("path radius " + std::to_string(i) + " must be > 0");
  }
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i] == vertices[i - 1]) errors.push_back("path vertices " + std::to_string(i) + " repeated");
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

LumenPath load_path_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read path file " + file.string());
  LumenPath path;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::array<double, 4> v{};
    if (!parse_row(line, v)) {
      if (row == 1) continue;
      throw ValidationError({"path file row " + std::to_string(row) + " is not 4 numbers"});
    }
    path.vertices.emplace_back(v[0], v[1], v[2]);
    path.radii.push_back(v[3]);
  }
  path.validate();
  return path;
}

NearestPoint nearest_on_path(const LumenPath& path, const Vec3& p) {
  NearestPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    const Vec3& a = path.vertices[i];
    Vec3 ab = path.vertices[i + 1] - a;
    double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    Vec3 q = a + t * ab;
    double d = (p - q).norm();
    if (d < best.distance) {
      best.point = q;
      best.distance = d;
      best.segment = i;
      best.t = t;
      best.radius = (1.0 - t) * path.radii[i] + t * path.radii[i + 1];
    }
  }
  return best;
}

Pose3 insertion_pose(const LumenPath& path, double depth) {
  if (depth < 0.0) throw DomainError("insertion depth must be >= 0");
  Vec3 tangent = (path.vertices[1] - path.vertices[0]).normalized();
  Pose3 base;
  base.rotation = Eigen::Quaterniond::FromTwoVectors(Vec3::UnitZ(), tangent).toRotationMatrix();
  base.translation = path.vertices[0] + depth * tangent;
  return base;
}

InsertionState make_insertion(const LumenPath& path, const ManipulatorSpec& spec, double depth,
                              ConfigState config) {
  validate_config(spec, config);
  return InsertionState{depth, insertion_pose(path, depth), std::move(config)};
}

std::vector<Vec3> backbone_samples(const ManipulatorSpec& spec, const ConfigState& config, const Pose3& base,
                                   int samples_per_joint) {
  ChainPose fk = forward_kinematics(spec, config);
  const double l = spec.joint.half_pitch;
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(spec.joint_count() * samples_per_joint + samples_per_joint + 1));
  for (int j = 0; j < spec.joint_count(); ++j) {
    double theta = config.joint_angles[j];
    BendPlane plane = joint_plane(spec, j);
    for (int k = 0; k < samples_per_joint; ++k) {
      double f = static_cast<double>(k) / samples_per_joint;
      // A fraction f of a 2L arc with total angle theta is a 2fL arc with angle f*theta.
      Pose3 partial = joint_transform(JointDesign{f * l, spec.joint.n, f * spec.joint.chord, spec.joint.theta_max},
                                      plane, f * theta);
      out.push_back(base.apply(fk.segments[j].apply(partial.translation)));
    }
  }
  const Pose3& last = fk.segments.back();
  for (int k = 0; k <= samples_per_joint; ++k) {
    double f = static_cast<double>(k) / samples_per_joint;
    out.push_back(base.apply(last.apply(Vec3(0.0, 0.0, f * spec.rigid_extra))));
  }
  return out;
}

ClearanceResult clearance(const LumenPath& path, const ManipulatorSpec& spec, const InsertionState& state,
                          int samples_per_joint) {
  if (samples_per_joint < 2) throw DomainError("clearance: samples_per_joint must be >= 2");
  ClearanceResult r;
  r.min_clearance = std::numeric_limits<double>::infinity();
  auto pts = backbone_samples(spec, state.config, state.base, samples_per_joint);
  const double body = spec.outer_diameter / 2.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    NearestPoint n = nearest_on_path(path, pts[i]);
    double c = n.radius - n.distance - body;
    if (c < r.min_clearance) {
      r.min_clearance = c;
      r.location = pts[i];
      r.sample_index = i;
    }
  }
  return r;
}

std::vector<double> default_angle_grid() {
  std::vector<double> g;
  for (int d = -30; d <= 30; ++d) g.push_back(deg_to_rad(d));
  return g;
}

std::vector<SteerStep> auto_steer(const LumenPath& path, const ManipulatorSpec& spec,
                                  std::span<const double> depths,
                                  const std::vector<std::vector<double>>& grids, int samples_per_joint) {
  if (grids.size() != spec.sections.size()) throw DomainError("auto_steer: one grid per section required");
  for (const auto& g : grids) {
    if (g.empty()) throw DomainError("auto_steer: empty grid");
  }
  for (std::size_t i = 1; i < depths.size(); ++i) {
    if (depths[i] < depths[i - 1]) throw DomainError("auto_steer: depths must be ascending");
  }
  std::vector<SteerStep> trace;
  trace.reserve(depths.size());
  for (double depth : depths) {
    Pose3 base = insertion_pose(path, depth);
    std::vector<std::size_t> idx(grids.size(), 0);
    std::optional<Candidate> best;
    bool done = false;
    while (!done) {
      Candidate c{0.0, 0.0, std::vector<double>(grids.size())};
      for (std::size_t k = 0; k < grids.size(); ++k) {
        c.angles[k] = grids[k][idx[k]];
        c.abs_sum += std::abs(c.angles[k]);
      }
      InsertionState state{depth, base, section_config(spec, c.angles)};
      c.clearance = clearance(path, spec, state, samples_per_joint).min_clearance;
      if (!best || better(c, *best)) best = std::move(c);

      done = true;
      for (std::size_t k = grids.size(); k-- > 0;) {
        if (++idx[k] < grids[k].size()) {
          done = false;
          break;
        }
        idx[k] = 0;
      }
    }
    trace.push_back(SteerStep{depth, best->angles, best->clearance, best->clearance >= 0.0});
  }
  return trace;
}

LumenPath demo_bronchus_path() {
  LumenPath p;
  const double trachea = 45.0;
  const double bend_radius = 80.0;
  p.vertices.emplace_back(0.0, 0.0, 0.0);
  p.radii.push_back(6.0);
  for (int deg = 0; deg <= 30; deg += 5) {
    double a = deg_to_rad(deg);
    p.vertices.emplace_back(bend_radius * (1.0 - std::cos(a)), 0.0, trachea + bend_radius * std::sin(a));
    p.radii.push_back(6.0 - deg / 30.0);
  }
  const double end = deg_to_rad(30.0);
  p.vertices.push_back(p.vertices.back() + 30.0 * Vec3(std::sin(end), 0.0, std::cos(end)));
  p.radii.push_back(5.0);
  return p;
}

}  // namespace ncj

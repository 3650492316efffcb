#include "ncj/spin.hpp"

#include "ncj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ncj {
namespace {

constexpr double kGrazing = 1e-9;

Vec3 aim_error(const ManipulatorSpec& spec, std::span<const double> angles, const Vec3& target) {
  ChainPose fk = forward_kinematics(spec, section_config(spec, angles));
  Vec3 d = target - fk.tip.translation;
  double n = d.norm();
  if (n < 1e-9) throw DomainError("aim_at: target coincides with the tip position");
  return fk.tip.rotation.transpose() * (d / n) - Vec3::UnitZ();
}

double error_to_angle(const Vec3& r) { return 2.0 * std::asin(std::min(1.0, r.norm() / 2.0)); }

}  // namespace

Plane Plane::from_point_normal(const Vec3& point, const Vec3& normal) {
  Vec3 n = normal.normalized();
  Vec3 ref = std::abs(n.x()) > 0.9 ? Vec3::UnitY() : Vec3::UnitX();
  Vec3 u = (ref - ref.dot(n) * n).normalized();
  return Plane{point, u, n.cross(u)};
}

void SpinParams::validate() const {
  std::vector<std::string> errors;
  if (!(voltage_kv > 0.0)) errors.emplace_back("spin.voltage_kV must be > 0");
  if (!(feed_rate_ml_per_h > 0.0)) errors.emplace_back("spin.feed_rate_mL_per_h must be > 0");
  if (!(spun_distance > 0.0)) errors.emplace_back("spin.spun_distance_mm must be > 0");
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

bool FootprintConic::contains(const Vec2& q) const {
  Vec2 d = q - center;
  if (type == ConicType::kDegenerate) return d.norm() <= 1e-12;
  double c = std::cos(orientation);
  double s = std::sin(orientation);
  double x = (c * d.x() + s * d.y()) / semi_major;
  double y = (-s * d.x() + c * d.y()) / semi_minor;
  return x * x + y * y <= 1.0;
}

FootprintConic footprint(const JetCone& cone, const Plane& plane, int boundary_vertices) {
  if (!(cone.half_angle >= 0.0 && cone.half_angle < kPi / 2)) {
    throw DomainError("footprint: half_angle must lie in [0, pi/2)");
  }
  if (boundary_vertices < 64) throw DomainError("footprint: at least 64 boundary vertices");
  const Vec3 apex = cone.apex.translation;
  const Vec3 axis = cone.axis();
  Vec3 n = plane.normal().normalized();
  double na = n.dot(axis);
  if (std::abs(na) < kGrazing) throw DomainError("footprint: grazing incidence (axis parallel to plane)");
  const double t = n.dot(plane.origin - apex) / na;
  if (!(t > 0.0)) throw DomainError("footprint: plane behind apex");
  if (t > cone.range * (1.0 + kRangeSlack)) throw DomainError("footprint: plane beyond jet range");
  if (na < 0.0) {
    n = -n;
    na = -na;
  }

  const double cos_tilt = na;
  Vec3 lean = axis - cos_tilt * n;  // axis component inside the plane
  double sin_tilt = lean.norm();
  Vec3 e1;
  if (sin_tilt < 1e-12) {
    e1 = plane.u;
    sin_tilt = 0.0;
  } else {
    e1 = lean / sin_tilt;
  }

  FootprintConic fp;
  fp.axis_distance = t;
  const Vec3 pierce = apex + t * axis;
  const double sa = std::sin(cone.half_angle);
  const double ca = std::cos(cone.half_angle);
  fp.orientation = std::atan2(e1.dot(plane.v), e1.dot(plane.u));

  if (sa < 1e-15) {
    fp.type = ConicType::kDegenerate;
    fp.center = plane.project(pierce);
    fp.boundary.assign(static_cast<std::size_t>(boundary_vertices), fp.center);
    return fp;
  }

  // Cone (v.a)^2 = cos^2(alpha) |v|^2 restricted to the plane; k > 0 iff the
  // section is bounded (alpha + tilt < pi/2).
  const double k = ca * ca - sin_tilt * sin_tilt;
  if (k <= kGrazing) throw DomainError("footprint: grazing incidence (unbounded conic)");
  const double shift = t * sin_tilt * sa * sa / k;
  fp.type = ConicType::kEllipse;
  fp.semi_major = t * sa * ca * cos_tilt / k;
  fp.semi_minor = t * sa * cos_tilt / std::sqrt(k);
  fp.center = plane.project(pierce + shift * e1);
  fp.area = kPi * fp.semi_major * fp.semi_minor;

  const double c = std::cos(fp.orientation);
  const double s = std::sin(fp.orientation);
  fp.boundary.reserve(static_cast<std::size_t>(boundary_vertices));
  for (int i = 0; i < boundary_vertices; ++i) {
    double phi = 2.0 * kPi * static_cast<double>(i) / boundary_vertices;
    double x = fp.semi_major * std::cos(phi);
    double y = fp.semi_minor * std::sin(phi);
    fp.boundary.emplace_back(fp.center.x() + c * x - s * y, fp.center.y() + s * x + c * y);
  }
  return fp;
}

double aim_residual(const ManipulatorSpec& spec, std::span<const double> section_angles, const Vec3& target) {
  return error_to_angle(aim_error(spec, section_angles, target));
}

AimResult aim_at(const ManipulatorSpec& spec, const Vec3& target, const ConfigState& initial,
                 const AimOptions& options) {
  validate_config(spec, initial);
  const std::size_t m = spec.sections.size();
  std::vector<double> lim(m);
  for (std::size_t k = 0; k < m; ++k) lim[k] = spec.section_limit(k);
  auto clamp_all = [&](std::vector<double>& a) {
    for (std::size_t k = 0; k < m; ++k) a[k] = std::clamp(a[k], -lim[k], lim[k]);
  };

  std::vector<double> x = section_angles(spec, initial);
  clamp_all(x);
  Vec3 r = aim_error(spec, x, target);
  double cost = r.squaredNorm();
  double lambda = 1e-3;

  AimResult out;
  for (; out.iterations < options.max_iterations; ++out.iterations) {
    if (error_to_angle(r) < options.tolerance) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd jac(3, static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<double> hi = x;
      std::vector<double> lo = x;
      hi[k] = std::min(x[k] + options.jacobian_step, lim[k]);
      lo[k] = std::max(x[k] - options.jacobian_step, -lim[k]);
      jac.col(static_cast<Eigen::Index>(k)) =
          (aim_error(spec, hi, target) - aim_error(spec, lo, target)) / (hi[k] - lo[k]);
    }
    Eigen::MatrixXd h = jac.transpose() * jac;
    Eigen::VectorXd g = jac.transpose() * r;

    bool accepted = false;
    while (lambda < 1e10) {
      Eigen::MatrixXd damped = h + lambda * Eigen::MatrixXd::Identity(h.rows(), h.cols());
      Eigen::VectorXd step = damped.ldlt().solve(-g);
      std::vector<double> trial = x;
      for (std::size_t k = 0; k < m; ++k) trial[k] += step(static_cast<Eigen::Index>(k));
      clamp_all(trial);
      Vec3 tr = aim_error(spec, trial, target);
      double tc = tr.squaredNorm();
      if (tc < cost) {
        x = std::move(trial);
        r = tr;
        cost = tc;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) break;
  }
  if (!out.converged) out.converged = error_to_angle(r) < options.tolerance;

  out.section_angles = x;
  out.config = section_config(spec, x);
  out.residual = error_to_angle(r);
  out.reachable = out.residual < options.reach_tolerance;
  for (std::size_t k = 0; k < m; ++k) {
    if (std::abs(x[k]) >= lim[k] * (1.0 - 1e-12)) out.at_limit = true;
  }
  return out;
}

CoverageMetrics rasterize_coverage(std::span<const FootprintConic> footprints, std::span<const Vec2> region,
                                   double cell) {
  if (!(cell > 0.0)) throw DomainError("rasterize_coverage: cell must be > 0");
  if (region.size() < 3) throw DomainError("rasterize_coverage: region needs >= 3 vertices");
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  auto grow = [&](std::span<const Vec2> pts) {
    for (const auto& p : pts) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  };
  grow(region);
  struct Box {
    Vec2 lo, hi;
  };
  std::vector<Box> boxes;
  for (const auto& f : footprints) {
    grow(f.boundary);
    Box b{Vec2::Constant(std::numeric_limits<double>::infinity()),
          Vec2::Constant(-std::numeric_limits<double>::infinity())};
    for (const auto& p : f.boundary) {
      b.lo = b.lo.cwiseMin(p);
      b.hi = b.hi.cwiseMax(p);
    }
    boxes.push_back(b);
  }

  const auto nx = static_cast<long>(std::ceil((hi.x() - lo.x()) / cell)) + 1;
  const auto ny = static_cast<long>(std::ceil((hi.y() - lo.y()) / cell)) + 1;
  long in_region = 0, covered = 0, in_union = 0, outside = 0;
  for (long iy = 0; iy < ny; ++iy) {
    for (long ix = 0; ix < nx; ++ix) {
      Vec2 q(lo.x() + (static_cast<double>(ix) + 0.5) * cell, lo.y() + (static_cast<double>(iy) + 0.5) * cell);
      bool r = poly::contains(region, q);
      bool u = false;
      for (std::size_t i = 0; i < footprints.size() && !u; ++i) {
        const Box& b = boxes[i];
        if (q.x() < b.lo.x() || q.y() < b.lo.y() || q.x() > b.hi.x() || q.y() > b.hi.y()) continue;
        u = footprints[i].type == ConicType::kEllipse && poly::contains(footprints[i].boundary, q);
      }
      in_region += r;
      in_union += u;
      covered += (r && u);
      outside += (u && !r);
    }
  }
  CoverageMetrics m;
  const double a = cell * cell;
  m.cell = cell;
  m.region_area = static_cast<double>(in_region) * a;
  m.covered_area = static_cast<double>(covered) * a;
  m.union_area = static_cast<double>(in_union) * a;
  m.overspray_area = static_cast<double>(outside) * a;
  m.coverage_fraction = in_region > 0 ? static_cast<double>(covered) / static_cast<double>(in_region) : 0.0;
  return m;
}

bool cone_contains(const JetCone& cone, const Vec3& p) {
  Vec3 d = p - cone.apex.translation;
  double along = d.dot(cone.axis());
  return along > 0.0 && along >= d.norm() * std::cos(cone.half_angle);
}

double monte_carlo_area(std::span<const JetCone> cones, const Plane& plane, const Vec2& lo, const Vec2& hi,
                        std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw DomainError("monte_carlo_area: samples must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo.x(), hi.x());
  std::uniform_real_distribution<double> uy(lo.y(), hi.y());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    double x = ux(rng);
    double y = uy(rng);
    Vec3 p = plane.lift(Vec2(x, y));
    for (const auto& c : cones) {
      if (cone_contains(c, p)) {
        ++hits;
        break;
      }
    }
  }
  return (hi - lo).prod() * static_cast<double>(hits) / static_cast<double>(samples);
}

Plane default_target_plane(const ManipulatorSpec& spec, double distance) {
  return Plane::from_point_normal(Vec3(0.0, 0.0, straight_length(spec) + distance), Vec3::UnitZ());
}

CoverageSchedule plan_coverage(const ManipulatorSpec& spec, const CoverageRequest& request,
                               const SpinParams& params) {
  if (request.targets.empty()) throw DomainError("plan_coverage: no targets");
  params.validate();
  CoverageSchedule out;
  out.params = params;
  ConfigState seed = straight_config(spec);
  std::vector<FootprintConic> placed;
  for (std::size_t i = 0; i < request.targets.size(); ++i) {
    ScheduleEntry e;
    e.waypoint_id = static_cast<int>(i);
    e.target = request.targets[i];
    AimResult aim = aim_at(spec, e.target, seed);
    e.raw_angles = aim.section_angles;
    e.residual = aim.residual;
    QuantizedAngles q = quantize_to_steps(spec, aim.section_angles);
    e.angles = q.angles;
    e.steps = q.steps;
    e.step_width = q.step_width;
    e.reachable = aim.reachable;
    e.deposited_volume_ml = params.feed_rate_ml_per_h * request.dwell_s / 3600.0;
    ChainPose fk = forward_kinematics(spec, section_config(spec, q.angles));
    try {
      e.footprint = footprint(JetCone{fk.tip, request.half_angle, params.spun_distance}, request.plane);
    } catch (const DomainError&) {
      e.reachable = false;
    }
    if (e.reachable) {
      placed.push_back(e.footprint);
      seed = aim.config;
    } else {
      out.unreachable.push_back(e.waypoint_id);
    }
    out.entries.push_back(std::move(e));
  }
  out.metrics = rasterize_coverage(placed, request.region, request.cell);
  return out;
}

}  // namespace ncj

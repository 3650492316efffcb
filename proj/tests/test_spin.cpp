#include "ncj/errors.hpp"
#include "ncj/spin.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <random>

using namespace ncj;

namespace {

const ManipulatorSpec kSpec = default_manipulator();

JetCone cone_along(const Vec3& axis, const Vec3& apex, double half_angle = deg_to_rad(5.0)) {
  JetCone c;
  c.apex.rotation = Eigen::Quaterniond::FromTwoVectors(Vec3::UnitZ(), axis.normalized()).toRotationMatrix();
  c.apex.translation = apex;
  c.half_angle = half_angle;
  return c;
}

Plane z_plane(double z) { return Plane::from_point_normal(Vec3(0, 0, z), Vec3::UnitZ()); }

// Cone tilted by `tilt` about y whose axis pierces z_plane(120) at the origin, 120 mm from the apex.
JetCone tilted_cone(double tilt) {
  Vec3 axis(std::sin(tilt), 0.0, std::cos(tilt));
  return cone_along(axis, Vec3(0, 0, 120) - 120.0 * axis);
}

}  // namespace

TEST(Plane, BasisIsOrthonormal) {
  for (Vec3 n : {Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0.3, -0.2, 0.9)}) {
    Plane p = Plane::from_point_normal(Vec3(1, 2, 3), n);
    EXPECT_NEAR(p.u.norm(), 1.0, 1e-15);
    EXPECT_NEAR(p.v.norm(), 1.0, 1e-15);
    EXPECT_NEAR(p.u.dot(p.v), 0.0, 1e-15);
    EXPECT_NEAR((p.normal() - n.normalized()).norm(), 0.0, 1e-15);
    Vec2 q(3.5, -1.25);
    EXPECT_NEAR((p.project(p.lift(q)) - q).norm(), 0.0, 1e-12);
  }
}

TEST(Footprint, PerpendicularCircle) {
  FootprintConic fp = footprint(cone_along(Vec3::UnitZ(), Vec3::Zero()), z_plane(120.0));
  EXPECT_EQ(fp.type, ConicType::kEllipse);
  EXPECT_NEAR(fp.semi_major, 10.49863962, 1e-8);
  EXPECT_NEAR(fp.semi_minor, 10.49863962, 1e-8);
  EXPECT_NEAR(fp.center.norm(), 0.0, 1e-12);
  EXPECT_NEAR(fp.area, kPi * 10.49863962 * 10.49863962, 1e-5);
  EXPECT_GE(fp.boundary.size(), 64u);
  EXPECT_TRUE(poly::is_simple_ring(fp.boundary));
  for (const auto& p : fp.boundary) EXPECT_NEAR(p.norm(), 10.49863962, 1e-8);
}

TEST(Footprint, ZeroApertureDegenerates) {
  FootprintConic fp = footprint(cone_along(Vec3::UnitZ(), Vec3(2, 3, 0), 0.0), z_plane(50.0));
  EXPECT_EQ(fp.type, ConicType::kDegenerate);
  EXPECT_NEAR((fp.center - Vec2(2, 3)).norm(), 0.0, 1e-12);
  EXPECT_EQ(fp.area, 0.0);
}

TEST(Footprint, Errors) {
  JetCone c = cone_along(Vec3::UnitZ(), Vec3::Zero());
  EXPECT_THROW(footprint(c, z_plane(-10.0)), DomainError);
  EXPECT_THROW(footprint(c, Plane::from_point_normal(Vec3(5, 0, 0), Vec3::UnitX())), DomainError);
  EXPECT_THROW(footprint(tilted_cone(deg_to_rad(86.0)), z_plane(120.0)), DomainError);
  EXPECT_THROW(footprint(c, z_plane(500.0)), DomainError);
  EXPECT_NO_THROW(footprint(c, z_plane(170.0)));
}

TEST(Footprint, TiltedEllipse) {
  FootprintConic flat = footprint(tilted_cone(0.0), z_plane(120.0));
  FootprintConic fp = footprint(tilted_cone(deg_to_rad(30.0)), z_plane(120.0));
  EXPECT_GT(fp.semi_major, fp.semi_minor);
  EXPECT_GT(fp.area, flat.area);
  EXPECT_NEAR(std::abs(std::cos(fp.orientation)), 1.0, 1e-12);
  // Boundary points lie on the cone surface.
  JetCone c = tilted_cone(deg_to_rad(30.0));
  Plane pl = z_plane(120.0);
  for (std::size_t i = 0; i < fp.boundary.size(); i += 8) {
    Vec3 d = (pl.lift(fp.boundary[i]) - c.apex.translation).normalized();
    EXPECT_NEAR(std::acos(d.dot(c.axis())), c.half_angle, 1e-9);
  }
}

TEST(Footprint, AreaInvariantUnderAxisRoll) {
  JetCone c = tilted_cone(deg_to_rad(20.0));
  FootprintConic a = footprint(c, z_plane(120.0));
  c.apex.rotation = c.apex.rotation * Eigen::AngleAxisd(1.1, Vec3::UnitZ()).toRotationMatrix();
  FootprintConic b = footprint(c, z_plane(120.0));
  EXPECT_NEAR(a.area, b.area, 1e-9);
}

TEST(Footprint, PerpendicularMinimizesArea) {
  double prev = 0.0;
  for (int d = 0; d <= 60; d += 10) {
    double area = footprint(tilted_cone(deg_to_rad(d)), z_plane(120.0)).area;
    EXPECT_GT(area, prev);
    prev = area;
  }
}

TEST(Footprint, MonteCarloTilted) {
  JetCone c = tilted_cone(deg_to_rad(30.0));
  FootprintConic fp = footprint(c, z_plane(120.0));
  std::vector<JetCone> cones{c};
  Vec2 pad = Vec2::Constant(1.2 * fp.semi_major);
  double mc = monte_carlo_area(cones, z_plane(120.0), fp.center - pad, fp.center + pad, 100000, 11);
  EXPECT_NEAR(mc / fp.area, 1.0, 0.01);
}

TEST(Aim, OnAxisTarget) {
  AimResult r = aim_at(kSpec, Vec3(0, 0, 200), straight_config(kSpec));
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.reachable);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.residual, 0.0);
  EXPECT_EQ(r.section_angles, std::vector<double>({0.0, 0.0}));
}

TEST(Aim, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-deg_to_rad(28.0), deg_to_rad(28.0));
  for (int i = 0; i < 20; ++i) {
    std::vector<double> a{u(rng), u(rng)};
    ChainPose fk = forward_kinematics(kSpec, section_config(kSpec, a));
    Vec3 target = fk.tip.translation + 120.0 * fk.tip.axis();
    AimResult r = aim_at(kSpec, target, straight_config(kSpec));
    EXPECT_TRUE(r.reachable);
    EXPECT_LT(r.residual, 1e-3);
    EXPECT_NEAR(r.section_angles[0], a[0], 1e-3);
    EXPECT_NEAR(r.section_angles[1], a[1], 1e-3);
  }
}

TEST(Aim, UnreachableFlagged) {
  Vec3 target(300.0, 0.0, 80.0);
  AimResult r = aim_at(kSpec, target, straight_config(kSpec));
  EXPECT_FALSE(r.reachable);
  EXPECT_TRUE(r.at_limit);
  EXPECT_NEAR(r.section_angles[1], kSpec.section_limit(1), 1e-12);
  EXPECT_GT(r.residual, 1e-3);
  EXPECT_NEAR(r.residual, aim_residual(kSpec, r.section_angles, target), 1e-15);
}

TEST(Aim, WiderLimitsNeverWorse) {
  Vec3 target(150.0, 60.0, 120.0);
  AimResult narrow = aim_at(kSpec, target, straight_config(kSpec));
  ManipulatorSpec wide = kSpec;
  for (auto& s : wide.sections) s.limit = deg_to_rad(45.0);
  AimResult w = aim_at(wide, target, straight_config(wide));
  EXPECT_LE(w.residual, narrow.residual + 1e-12);
}

TEST(Aim, TargetAtTipRejected) {
  EXPECT_THROW(aim_at(kSpec, Vec3(0, 0, 87), straight_config(kSpec)), DomainError);
}

TEST(Coverage, SelfCover) {
  FootprintConic fp = footprint(tilted_cone(deg_to_rad(20.0)), z_plane(120.0));
  std::vector<FootprintConic> fps{fp};
  CoverageMetrics m = rasterize_coverage(fps, fp.boundary, 0.5);
  EXPECT_EQ(m.coverage_fraction, 1.0);
  EXPECT_EQ(m.overspray_area, 0.0);
  EXPECT_NEAR(m.region_area, fp.area, 0.01 * fp.area);
}

TEST(Coverage, RefinementConverges) {
  FootprintConic a = footprint(cone_along(Vec3::UnitZ(), Vec3(0, 0, 0)), z_plane(120.0));
  FootprintConic b = footprint(cone_along(Vec3::UnitZ(), Vec3(8, 3, 0)), z_plane(120.0));
  std::vector<FootprintConic> fps{a, b};
  poly::Ring region = {Vec2(-5, -5), Vec2(20, -5), Vec2(20, 8), Vec2(-5, 8)};
  double coarse = rasterize_coverage(fps, region, 0.5).coverage_fraction;
  double fine = rasterize_coverage(fps, region, 0.25).coverage_fraction;
  EXPECT_LT(std::abs(coarse - fine), 0.01);
}

TEST(PlanCoverage, SingleWaypointOnAxis) {
  Plane plane = default_target_plane(kSpec, 120.0);
  CoverageRequest req;
  req.plane = plane;
  req.targets = {plane.origin};
  req.region = {Vec2(0, -20), Vec2(20, -20), Vec2(20, 20), Vec2(0, 20)};
  CoverageSchedule s = plan_coverage(kSpec, req, SpinParams{});
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_TRUE(s.entries[0].reachable);
  EXPECT_EQ(s.entries[0].steps, std::vector<std::int64_t>({0, 0}));
  EXPECT_NEAR(s.entries[0].footprint.semi_major, 10.49863962, 1e-8);
  // Half the disc lies in the region.
  EXPECT_NEAR(s.metrics.coverage_fraction, 0.5 * kPi * 10.49863962 * 10.49863962 / 800.0, 0.01);
  EXPECT_NEAR(s.entries[0].deposited_volume_ml, 0.5 * 60.0 / 3600.0, 1e-15);
}

TEST(PlanCoverage, UnreachableListedScheduleKept) {
  Plane plane = default_target_plane(kSpec, 120.0);
  CoverageRequest req;
  req.plane = plane;
  req.targets = {plane.lift(Vec2(5, 0)), plane.lift(Vec2(2000, 0)), plane.lift(Vec2(-5, 0))};
  req.region = {Vec2(-10, -10), Vec2(10, -10), Vec2(10, 10), Vec2(-10, 10)};
  CoverageSchedule s = plan_coverage(kSpec, req, SpinParams{});
  ASSERT_EQ(s.entries.size(), 3u);
  EXPECT_EQ(s.unreachable, std::vector<int>({1}));
  EXPECT_TRUE(s.entries[0].reachable);
  EXPECT_TRUE(s.entries[2].reachable);
  EXPECT_GT(s.metrics.covered_area, 0.0);
}

TEST(PlanCoverage, QuantizationWithinHalfStep) {
  Plane plane = default_target_plane(kSpec, 120.0);
  CoverageRequest req;
  req.plane = plane;
  req.targets = {plane.lift(Vec2(13, -7)), plane.lift(Vec2(-22, 9))};
  req.region = {Vec2(-30, -30), Vec2(30, -30), Vec2(30, 30), Vec2(-30, 30)};
  CoverageSchedule s = plan_coverage(kSpec, req, SpinParams{});
  for (const auto& e : s.entries) {
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_LE(std::abs(e.angles[k] - e.raw_angles[k]), 0.5 * e.step_width[k] + 1e-12);
    }
  }
}

TEST(SpinParams, Validation) {
  SpinParams p;
  EXPECT_NO_THROW(p.validate());
  p.voltage_kv = 0.0;
  p.feed_rate_ml_per_h = -1.0;
  try {
    p.validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.violations().size(), 2u);
  }
}

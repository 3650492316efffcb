#include "ncj/errors.hpp"
#include "ncj/lumen.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

using namespace ncj;

namespace {

const ManipulatorSpec kSpec = default_manipulator();

LumenPath straight_tube(double radius) {
  LumenPath p;
  p.vertices = {Vec3(0, 0, 0), Vec3(0, 0, 150)};
  p.radii = {radius, radius};
  return p;
}

ConfigState cfg(double a, double b) {
  std::vector<double> v{a, b};
  return section_config(kSpec, v);
}

std::vector<double> coarse_grid() {
  std::vector<double> g;
  for (int d = -30; d <= 30; d += 5) g.push_back(deg_to_rad(d));
  return g;
}

}  // namespace

TEST(Lumen, PathValidation) {
  LumenPath p;
  p.vertices = {Vec3(0, 0, 0)};
  p.radii = {-1.0, 2.0};
  try {
    p.validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.violations().size(), 3u);
  }
}

TEST(Lumen, LoadCsv) {
  auto dir = std::filesystem::temp_directory_path();
  auto good = dir / "ncj_path_good.csv";
  {
    std::ofstream f(good);
    f << "x_mm,y_mm,z_mm,radius_mm\n0,0,0,5\n0,0,10,4.5\n";
  }
  LumenPath p = load_path_csv(good);
  ASSERT_EQ(p.vertices.size(), 2u);
  EXPECT_EQ(p.radii[1], 4.5);
  auto bad = dir / "ncj_path_bad.csv";
  {
    std::ofstream f(bad);
    f << "0,0,0,5\n0,0,x,4\n";
  }
  EXPECT_THROW(load_path_csv(bad), ValidationError);
  EXPECT_THROW(load_path_csv(dir / "ncj_no_such_file.csv"), IoError);
}

TEST(Lumen, NearestPoint) {
  LumenPath p;
  p.vertices = {Vec3(0, 0, 0), Vec3(0, 0, 10), Vec3(10, 0, 10)};
  p.radii = {2, 4, 6};
  auto n = nearest_on_path(p, Vec3(1, 0, 5));
  EXPECT_DOUBLE_EQ(n.distance, 1.0);
  EXPECT_DOUBLE_EQ(n.radius, 3.0);
  auto m = nearest_on_path(p, Vec3(5, 3, 10));
  EXPECT_DOUBLE_EQ(m.distance, 3.0);
  EXPECT_DOUBLE_EQ(m.radius, 5.0);
}

TEST(Clearance, CoaxialTube) {
  LumenPath tube = straight_tube(5.0);
  InsertionState st = make_insertion(tube, kSpec, 10.0, straight_config(kSpec));
  EXPECT_NEAR(clearance(tube, kSpec, st, 8).min_clearance, 2.5, 1e-12);
}

TEST(Clearance, OffsetAxis) {
  LumenPath tube = straight_tube(5.0);
  InsertionState st = make_insertion(tube, kSpec, 10.0, straight_config(kSpec));
  st.base.translation += Vec3(1.0, 0.0, 0.0);
  EXPECT_NEAR(clearance(tube, kSpec, st, 8).min_clearance, 1.5, 1e-12);
}

TEST(Clearance, BentInStraightTubeMatchesDenseOracle) {
  LumenPath tube = straight_tube(30.0);
  InsertionState st = make_insertion(tube, kSpec, 0.0, cfg(deg_to_rad(30), 0.0));
  double got = clearance(tube, kSpec, st, 8).min_clearance;
  // Dense oracle: 10x samples, each point on the analytic joint arcs.
  ChainPose fk = forward_kinematics(kSpec, st.config);
  double best = 1e9;
  const double l = kSpec.joint.half_pitch;
  for (int j = 0; j < kSpec.joint_count(); ++j) {
    double theta = st.config.joint_angles[j];
    for (int k = 0; k <= 80; ++k) {
      double f = k / 80.0;
      Vec3 local = Vec3(0, 0, 2.0 * l * f);
      if (theta != 0.0) {
        double r = 2.0 * l / theta;
        local = Vec3(0, -r * (std::cos(f * theta) - 1.0), r * std::sin(f * theta));
      }
      Vec3 p = fk.segments[j].apply(local);
      best = std::min(best, 30.0 - std::hypot(p.x(), p.y()) - 2.5);
    }
  }
  for (int k = 0; k <= 80; ++k) {
    Vec3 p = fk.tip.rotation * Vec3(0, 0, -kSpec.rigid_extra * k / 80.0) + fk.tip.translation;
    best = std::min(best, 30.0 - std::hypot(p.x(), p.y()) - 2.5);
  }
  EXPECT_NEAR(got, best, 1e-9);
  EXPECT_LT(got, 27.5);
}

TEST(Clearance, RigidMotionInvariant) {
  LumenPath path = demo_bronchus_path();
  InsertionState st = make_insertion(path, kSpec, 3.0, cfg(0.1, 0.3));
  double ref = clearance(path, kSpec, st, 8).min_clearance;

  Pose3 g;
  g.rotation = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  g.translation = Vec3(12, -4, 9);
  LumenPath moved = path;
  for (auto& v : moved.vertices) v = g.apply(v);
  InsertionState st2 = st;
  st2.base = g * st.base;
  EXPECT_NEAR(clearance(moved, kSpec, st2, 8).min_clearance, ref, 1e-9);
}

TEST(Clearance, MonotoneInRadius) {
  LumenPath path = demo_bronchus_path();
  InsertionState st = make_insertion(path, kSpec, 3.0, cfg(0.1, 0.3));
  double ref = clearance(path, kSpec, st, 8).min_clearance;
  LumenPath wide = path;
  for (auto& r : wide.radii) r += 0.75;
  EXPECT_NEAR(clearance(wide, kSpec, st, 8).min_clearance, ref + 0.75, 1e-12);
}

TEST(Clearance, Preconditions) {
  LumenPath tube = straight_tube(5.0);
  InsertionState st = make_insertion(tube, kSpec, 0.0, straight_config(kSpec));
  EXPECT_THROW(clearance(tube, kSpec, st, 1), DomainError);
  EXPECT_THROW(make_insertion(tube, kSpec, -1.0, straight_config(kSpec)), DomainError);
}

TEST(AutoSteer, StraightTubeGivesZero) {
  LumenPath tube = straight_tube(5.0);
  std::vector<double> depths{0, 5, 10, 20};
  auto trace = auto_steer(tube, kSpec, depths, {coarse_grid(), coarse_grid()});
  ASSERT_EQ(trace.size(), depths.size());
  for (const auto& s : trace) {
    EXPECT_EQ(s.section_angles, std::vector<double>({0.0, 0.0}));
    EXPECT_NEAR(s.clearance, 2.5, 1e-12);
    EXPECT_TRUE(s.passable);
  }
}

TEST(AutoSteer, ElbowInSectionOnePlane) {
  LumenPath p;
  const double a = deg_to_rad(30.0);
  Vec3 elbow(0, 0, 20);
  p.vertices = {Vec3(0, 0, 0), elbow, elbow + 100.0 * Vec3(0, std::sin(a), std::cos(a))};
  p.radii = {6, 6, 6};
  std::vector<double> depths{0.0};
  auto trace = auto_steer(p, kSpec, depths, {coarse_grid(), coarse_grid()});
  EXPECT_GT(trace[0].section_angles[0], 0.0);
  EXPECT_EQ(trace[0].section_angles[1], 0.0);
}

TEST(AutoSteer, IndependentOfGridOrder) {
  LumenPath path = demo_bronchus_path();
  std::vector<double> depths{0.0, 4.0, 8.0};
  auto g = coarse_grid();
  auto ref = auto_steer(path, kSpec, depths, {g, g});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    auto g1 = g;
    auto g2 = g;
    std::shuffle(g1.begin(), g1.end(), rng);
    std::shuffle(g2.begin(), g2.end(), rng);
    auto got = auto_steer(path, kSpec, depths, {g1, g2});
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_EQ(got[i].section_angles, ref[i].section_angles);
      EXPECT_EQ(got[i].clearance, ref[i].clearance);
    }
  }
}

TEST(AutoSteer, Preconditions) {
  LumenPath tube = straight_tube(5.0);
  std::vector<double> depths{0.0};
  EXPECT_THROW(auto_steer(tube, kSpec, depths, {coarse_grid(), {}}), DomainError);
  std::vector<double> backwards{5.0, 1.0};
  EXPECT_THROW(auto_steer(tube, kSpec, backwards, {coarse_grid(), coarse_grid()}), DomainError);
}

TEST(AutoSteer, DemoPathPassableNearEntry) {
  LumenPath path = demo_bronchus_path();
  EXPECT_NO_THROW(path.validate());
  std::vector<double> depths{0.0};
  auto trace = auto_steer(path, kSpec, depths, {default_angle_grid(), default_angle_grid()});
  EXPECT_TRUE(trace[0].passable);
  EXPECT_EQ(trace[0].section_angles[0], 0.0);
  EXPECT_GT(trace[0].section_angles[1], 0.0);
}

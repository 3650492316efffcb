#include "ncj/errors.hpp"
#include "ncj/spec_file.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace ncj;

namespace {

std::string bundled() {
  std::ifstream in(NCJ_DATA_DIR "/default_spec.json");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(SpecFile, BundledDefaultLoadsClean) {
  SpecFile s = load_spec(NCJ_DATA_DIR "/default_spec.json");
  SpecFile d = default_spec();
  EXPECT_EQ(s.manipulator.segment_count, 13);
  EXPECT_DOUBLE_EQ(s.manipulator.outer_diameter, 5.0);
  EXPECT_DOUBLE_EQ(s.manipulator.lumen_diameter, 1.2);
  EXPECT_DOUBLE_EQ(s.manipulator.joint.half_pitch, 3.5);
  EXPECT_DOUBLE_EQ(s.manipulator.joint.n, 0.6);
  EXPECT_NEAR(s.manipulator.wheel_radius, d.manipulator.wheel_radius, 1e-15);
  EXPECT_NEAR(s.manipulator.motor_step, d.manipulator.motor_step, 1e-18);
  EXPECT_EQ(s.manipulator.sections, d.manipulator.sections);
  EXPECT_EQ(s.spin, d.spin);
  EXPECT_TRUE(s.path_file.empty());
}

TEST(SpecFile, DefaultKeyword) { EXPECT_EQ(load_spec("default"), default_spec()); }

TEST(SpecFile, RoundTrip) {
  SpecFile a = load_spec(NCJ_DATA_DIR "/default_spec.json");
  std::string text = serialize_spec(a);
  SpecFile b = parse_spec(text);
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_spec(b), text);
}

TEST(SpecFile, NOutOfRange) {
  auto v = violations_of(R"({"version": 1, "joint": {"N": 2.5}})");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "joint.N out of (0,2)");
}

TEST(SpecFile, NAndCriticalMutuallyExclusive) {
  auto v = violations_of(R"({"version": 1, "joint": {"N": 0.6, "N_critical": true}})");
  EXPECT_TRUE(mentions(v, "mutually exclusive"));
}

TEST(SpecFile, CriticalResolves) {
  SpecFile s = parse_spec(R"({"version": 1, "joint": {"N": "critical"}})");
  EXPECT_TRUE(s.n_critical);
  EXPECT_NEAR(s.manipulator.joint.n, 1.0547862, 2e-4);
  EXPECT_DOUBLE_EQ(s.manipulator.joint.chord, s.manipulator.joint.n * 3.5);
  SpecFile again = parse_spec(serialize_spec(s));
  EXPECT_EQ(again, s);
}

TEST(SpecFile, CollectsEveryViolationWithPaths) {
  auto v = violations_of(R"({
    "version": 2,
    "colour": "red",
    "joint": {"L_mm": -1, "N": 2.5, "theta_max_deg": 45, "theta_max_rad": 0.7},
    "manipulator": {"outer_diameter_mm": "five", "sections": [{"joints": [0, 1], "plane": "diagonal"}]},
    "spin": {"voltage_kV": 0, "half_angle_deg": 95}
  })");
  EXPECT_TRUE(mentions(v, "version"));
  EXPECT_TRUE(mentions(v, "spec.colour: unknown key"));
  EXPECT_TRUE(mentions(v, "joint.L must be > 0"));
  EXPECT_TRUE(mentions(v, "joint.N out of (0,2)"));
  EXPECT_TRUE(mentions(v, "joint.theta_max: _rad and _deg are mutually exclusive"));
  EXPECT_TRUE(mentions(v, "manipulator.outer_diameter_mm: expected a number"));
  EXPECT_TRUE(mentions(v, "manipulator.sections[0].plane"));
  EXPECT_TRUE(mentions(v, "spin.voltage_kV"));
  EXPECT_TRUE(mentions(v, "spin.half_angle"));
  EXPECT_GE(v.size(), 9u);
}

TEST(SpecFile, UnknownNestedKey) {
  auto v = violations_of(R"({"version": 1, "spin": {"range_mm": 100, "colour": 1}})");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "spin.colour: unknown key");
}

TEST(SpecFile, DegreesStoredAsRadians) {
  SpecFile s = parse_spec(R"({"version": 1, "joint": {"theta_max_deg": 30}, "spin": {"half_angle_rad": 0.1}})");
  EXPECT_DOUBLE_EQ(s.manipulator.joint.theta_max, deg_to_rad(30.0));
  EXPECT_DOUBLE_EQ(s.spin.half_angle, 0.1);
}

TEST(SpecFile, MalformedAndMissing) {
  EXPECT_THROW(parse_spec("{not json"), ValidationError);
  EXPECT_THROW(load_spec("/nonexistent/spec.json"), IoError);
  EXPECT_FALSE(bundled().empty());
}

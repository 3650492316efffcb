#include "ncj/report.hpp"

#include "ncj/export.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ncj {
namespace {

std::string line(const std::string& key, double v) { return key + ": " + format_number(v) + "\n"; }

}  // namespace

std::vector<ConfigState> random_configs(const ManipulatorSpec& spec, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-spec.joint.theta_max, spec.joint.theta_max);
  std::vector<ConfigState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ConfigState c = straight_config(spec);
    for (const auto& s : spec.sections) {
      for (int j : s.joints) c.joint_angles[j] = u(rng);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string span_comparison_csv(const JointDesign& design, int samples) {
  std::string out = "theta_rad,rolling_span_mm,circular_span_mm\n";
  for (int i = 0; i <= samples; ++i) {
    double t = design.theta_max * i / samples;
    out += format_number(t) + "," + format_number(centerline_span(design, t)) + "," +
           format_number(circular_span(design.half_pitch, t)) + "\n";
  }
  return out;
}

std::string tendon_csv(const ManipulatorSpec& spec) {
  std::string out = "section,alpha_rad,pull_mm,antagonist_mm\n";
  for (std::size_t k = 0; k < spec.sections.size(); ++k) {
    const int limit_deg = static_cast<int>(std::floor(rad_to_deg(spec.section_limit(k)) + 1e-9));
    for (int d = -limit_deg; d <= limit_deg; ++d) {
      std::vector<double> angles(spec.sections.size(), 0.0);
      angles[k] = deg_to_rad(d);
      TendonState ts = tendon_lengths(spec, section_config(spec, angles));
      out += std::to_string(k + 1) + "," + format_number(angles[k]) + "," +
             format_number(ts[pulling_tendon(spec.sections[k].plane)]) + "," +
             format_number(ts[antagonist_tendon(spec.sections[k].plane)]) + "\n";
    }
  }
  return out;
}

std::string workspace_summary_csv(const WorkspaceResult& ws) {
  static const char* names[] = {"up", "down", "left", "right"};
  std::string out = "direction,max_bend_deg\n";
  for (int i = 0; i < 4; ++i) out += std::string(names[i]) + "," + format_number(rad_to_deg(ws.max_bend[i])) + "\n";
  return out;
}

std::string critical_n_text(const CriticalNResult& r) {
  std::string out;
  out += line("N_star", r.n_star);
  out += line("paper_reference", r.paper_reference);
  out += line("deviation", r.deviation);
  out += line("theta_apex_rad", r.theta_apex);
  out += "iterations: " + std::to_string(r.iterations) + "\n";
  out += line("max_overlap_at_N_star_mm2", r.max_overlap_at_n_star);
  out += "criterion: " + r.criterion + "\n";
  return out;
}

std::string audit_text(const AuditReport& audit) {
  std::string out;
  out += line("straight_length_mm", audit.straight_length);
  out += "configs: " + std::to_string(audit.rows.size()) + "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", audit.max_deviation);
  out += std::string("max_deviation_mm: ") + buf + "\n";
  out += line("max_circular_deviation_mm", audit.max_circular_deviation);
  return out;
}

std::string footprint_text(const FootprintConic& fp) {
  std::string out = std::string("type: ") + (fp.type == ConicType::kEllipse ? "ellipse" : "degenerate") + "\n";
  out += line("center_u_mm", fp.center.x());
  out += line("center_v_mm", fp.center.y());
  out += line("semi_major_mm", fp.semi_major);
  out += line("semi_minor_mm", fp.semi_minor);
  out += line("orientation_rad", fp.orientation);
  out += line("area_mm2", fp.area);
  out += line("axis_distance_mm", fp.axis_distance);
  return out;
}

std::string coverage_text(const CoverageSchedule& s) {
  std::string out;
  out += "waypoints: " + std::to_string(s.entries.size()) + "\n";
  out += "unreachable:";
  for (int id : s.unreachable) out += " " + std::to_string(id);
  out += "\n";
  out += line("cell_mm", s.metrics.cell);
  out += line("region_area_mm2", s.metrics.region_area);
  out += line("covered_area_mm2", s.metrics.covered_area);
  out += line("coverage_fraction", s.metrics.coverage_fraction);
  out += line("union_area_mm2", s.metrics.union_area);
  out += line("overspray_area_mm2", s.metrics.overspray_area);
  double volume = 0.0;
  for (const auto& e : s.entries) {
    if (e.reachable) volume += e.deposited_volume_ml;
  }
  out += line("deposited_volume_mL", volume);
  out += line("voltage_kV", s.params.voltage_kv);
  out += line("feed_rate_mL_per_h", s.params.feed_rate_ml_per_h);
  out += "solution: " + s.params.solution + "\n";
  out += line("spun_distance_mm", s.params.spun_distance);
  return out;
}

CoverageRequest demo_coverage_request(const SpecFile& spec) {
  CoverageRequest r;
  r.plane = default_target_plane(spec.manipulator, spec.spin.params.spun_distance);
  r.half_angle = spec.spin.half_angle;
  const double radius = spec.spin.params.spun_distance * std::tan(spec.spin.half_angle);
  for (int i = -2; i <= 2; ++i) r.targets.push_back(r.plane.lift(Vec2(i * radius, 0.0)));
  r.targets.push_back(r.plane.lift(Vec2(10.0 * spec.spin.params.spun_distance, 0.0)));
  const double hx = 2.5 * radius;
  const double hy = 0.6 * radius;
  r.region = {Vec2(-hx, -hy), Vec2(hx, -hy), Vec2(hx, hy), Vec2(-hx, hy)};
  return r;
}

std::vector<std::string> paper_report_files() {
  return {"profile.svg",      "profile.csv",           "interference.csv", "critical_n.txt", "span_comparison.csv",
          "audit.csv",        "audit.txt",             "workspace.csv",    "workspace_summary.csv",
          "tendon.csv",       "footprint.txt",         "footprint_tilted.txt", "schedule.csv", "coverage.txt",
          "autosteer.csv"};
}

void write_paper_report(const SpecFile& spec, const std::filesystem::path& out, std::uint64_t seed) {
  const ManipulatorSpec& m = spec.manipulator;
  const JointDesign& d = m.joint;

  JointProfile profile = generate_profile(d, kPi / 2, kDefaultProfileSamples);
  write_text(out / "profile.svg", profile_svg(profile));
  write_text(out / "profile.csv", profile_csv(profile));
  auto sweep = interference_sweep(profile, deg_to_rad(0.5));
  write_text(out / "interference.csv", interference_csv(sweep));
  write_text(out / "critical_n.txt", critical_n_text(find_critical_n(d.half_pitch, d.theta_max, 1e-4)));
  write_text(out / "span_comparison.csv", span_comparison_csv(d, 90));

  auto configs = random_configs(m, 100, seed);
  AuditReport audit = centerline_audit(m, configs);
  write_text(out / "audit.csv", audit_csv(audit));
  write_text(out / "audit.txt", audit_text(audit));

  std::vector<std::vector<double>> grids(2);
  for (std::size_t k = 0; k < 2 && k < m.sections.size(); ++k) {
    const double lim = m.section_limit(k);
    for (int i = -6; i <= 6; ++i) grids[k].push_back(lim * i / 6.0);
  }
  WorkspaceResult ws = workspace(m, grids[0], grids[1]);
  write_text(out / "workspace.csv", workspace_csv(ws));
  write_text(out / "workspace_summary.csv", workspace_summary_csv(ws));
  write_text(out / "tendon.csv", tendon_csv(m));

  const double dist = spec.spin.params.spun_distance;
  JetCone straight{forward_kinematics(m, straight_config(m)).tip, spec.spin.half_angle, spec.spin.range};
  write_text(out / "footprint.txt", footprint_text(footprint(straight, default_target_plane(m, dist))));

  // Same cone tilted 30 deg about the plane's v axis, piercing point kept at `dist`.
  const double tilt = deg_to_rad(30.0);
  Plane plane = default_target_plane(m, dist);
  JetCone tilted = straight;
  tilted.apex.rotation = Eigen::AngleAxisd(tilt, Vec3::UnitY()).toRotationMatrix();
  tilted.apex.translation = plane.origin - dist * tilted.axis();
  FootprintConic fp = footprint(tilted, plane);
  Vec2 lo = fp.center - Vec2::Constant(1.2 * fp.semi_major);
  Vec2 hi = fp.center + Vec2::Constant(1.2 * fp.semi_major);
  std::vector<JetCone> cones{tilted};
  std::string tilted_text = footprint_text(fp);
  tilted_text += line("tilt_rad", tilt);
  tilted_text += line("monte_carlo_area_mm2", monte_carlo_area(cones, plane, lo, hi, 100000, seed));
  write_text(out / "footprint_tilted.txt", tilted_text);

  CoverageSchedule schedule = plan_coverage(m, demo_coverage_request(spec), spec.spin.params);
  write_text(out / "schedule.csv", schedule_csv(schedule));
  write_text(out / "coverage.txt", coverage_text(schedule));

  LumenPath path = spec.path_file.empty() ? demo_bronchus_path() : load_path_csv(spec.path_file);
  std::vector<double> depths;
  for (int i = 0; i <= 4; ++i) depths.push_back(2.5 * i);
  std::vector<std::vector<double>> steer_grids(m.sections.size(), default_angle_grid());
  auto trace = auto_steer(path, m, depths, steer_grids);
  write_text(out / "autosteer.csv", trace_csv(trace));
}

}  // namespace ncj

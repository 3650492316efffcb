#include "ncj/export.hpp"

#include "ncj/errors.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace ncj {
namespace {

std::string join_point(const Vec2& p) { return format_number(p.x()) + "," + format_number(p.y()); }

std::string polyline_points(std::span<const Vec2> pts) {
  std::string s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += join_point(pts[i]);
  }
  return s;
}

// Rows of `width` numbers; a non-numeric first row is skipped as a header.
std::vector<std::vector<double>> read_numeric_rows(const std::filesystem::path& file, std::size_t width) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    bool ok = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) ok = false;
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok || v.size() != width) {
      if (row == 1) continue;
      throw ValidationError({file.string() + ": row " + std::to_string(row) + " is not " +
                             std::to_string(width) + " numbers"});
    }
    rows.push_back(std::move(v));
  }
  return rows;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string profile_csv(const JointProfile& profile) {
  std::string out = "theta_rad,pl_x,pl_y,pr_x,pr_y\n";
  for (std::size_t i = 0; i < profile.theta_samples.size(); ++i) {
    out += format_number(profile.theta_samples[i]) + "," + join_point(profile.branch_l[i]) + "," +
           join_point(profile.branch_r[i]) + "\n";
  }
  return out;
}

std::string profile_svg(const JointProfile& profile) {
  poly::Ring head = head_polygon(profile);
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const std::vector<Vec2>* set : std::array<const std::vector<Vec2>*, 3>{&head, &profile.branch_r, &profile.branch_l}) {
    for (const auto& p : *set) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  }
  const Vec2 size = hi - lo;
  const JointDesign& d = profile.design;

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!-- rolling joint profile: L=" + format_number(d.half_pitch) + " mm, N=" + format_number(d.n) +
         ", theta_max=" + format_number(d.theta_max) + " rad -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_number(size.x()) + "mm\" height=\"" +
         format_number(size.y()) + "mm\" viewBox=\"" + format_number(lo.x()) + " " + format_number(-hi.y()) + " " +
         format_number(size.x()) + " " + format_number(size.y()) + "\">\n";
  out += "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\"0.02\">\n";
  if (!head.empty()) {
    out += "<path id=\"head\" d=\"M";
    for (std::size_t i = 0; i < head.size(); ++i) out += (i ? " L" : " ") + join_point(head[i]);
    out += " Z\"/>\n";
  }
  out += "<polyline id=\"branch_r\" stroke=\"red\" points=\"" + polyline_points(profile.branch_r) + "\"/>\n";
  out += "<polyline id=\"branch_l\" stroke=\"blue\" points=\"" + polyline_points(profile.branch_l) + "\"/>\n";
  out += "</g>\n</svg>\n";
  return out;
}

std::string interference_csv(std::span<const InterferenceReport> rows) {
  std::string out = "theta_rad,overlap_mm2,penetration_mm\n";
  for (const auto& r : rows) {
    out += format_number(r.theta) + "," + format_number(r.overlap_area) + "," + format_number(r.max_penetration) +
           "\n";
  }
  return out;
}

std::string workspace_csv(const WorkspaceResult& ws) {
  std::string out = "alpha1_rad,alpha2_rad,tip_x_mm,tip_y_mm,tip_z_mm\n";
  for (const auto& p : ws.points) {
    out += format_number(p.alpha1) + "," + format_number(p.alpha2) + "," + format_number(p.tip.x()) + "," +
           format_number(p.tip.y()) + "," + format_number(p.tip.z()) + "\n";
  }
  return out;
}

std::string audit_csv(const AuditReport& audit) {
  std::string out = "config_id,length_mm,circular_length_mm,deviation_mm\n";
  for (const auto& r : audit.rows) {
    out += std::to_string(r.config_id) + "," + format_number(r.length) + "," + format_number(r.circular_length) +
           "," + format_number(r.deviation) + "\n";
  }
  return out;
}

std::string trace_csv(std::span<const SteerStep> trace) {
  std::string out = "depth_mm,alpha1_rad,alpha2_rad,clearance_mm,passable\n";
  for (const auto& s : trace) {
    out += format_number(s.depth);
    for (double a : s.section_angles) out += "," + format_number(a);
    out += "," + format_number(s.clearance) + "," + (s.passable ? "1" : "0") + "\n";
  }
  return out;
}

std::string schedule_csv(const CoverageSchedule& schedule) {
  std::string out = "waypoint_id,alpha1_rad,alpha2_rad,steps1,steps2,footprint_cx,footprint_cy,a_mm,b_mm,reachable\n";
  for (const auto& e : schedule.entries) {
    out += std::to_string(e.waypoint_id);
    for (double a : e.angles) out += "," + format_number(a);
    for (auto s : e.steps) out += "," + std::to_string(s);
    out += "," + join_point(e.footprint.center) + "," + format_number(e.footprint.semi_major) + "," +
           format_number(e.footprint.semi_minor) + "," + (e.reachable ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<Vec2> load_polyline_csv(const std::filesystem::path& file) {
  std::vector<Vec2> out;
  for (const auto& r : read_numeric_rows(file, 2)) out.emplace_back(r[0], r[1]);
  return out;
}

std::vector<Vec3> load_points_csv(const std::filesystem::path& file) {
  std::vector<Vec3> out;
  for (const auto& r : read_numeric_rows(file, 3)) out.emplace_back(r[0], r[1], r[2]);
  return out;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  out << text;
  if (!out) throw IoError("write failed for " + file.string());
}

}  // namespace ncj

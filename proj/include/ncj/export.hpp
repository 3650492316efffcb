#pragma once

// Text exporters. Numbers are printed with 12 significant digits so output
// is byte-stable for identical inputs.

#include "ncj/chain.hpp"
#include "ncj/lumen.hpp"
#include "ncj/profile.hpp"
#include "ncj/spin.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ncj {

std::string format_number(double v);

/// `theta_rad,pl_x,pl_y,pr_x,pr_y`
std::string profile_csv(const JointProfile& profile);

/// Head contour as one closed path plus both contact branches as open
/// polylines, in mm user units with y up.
std::string profile_svg(const JointProfile& profile);

/// `theta_rad,overlap_mm2,penetration_mm`
std::string interference_csv(std::span<const InterferenceReport> rows);

/// `alpha1_rad,alpha2_rad,tip_x_mm,tip_y_mm,tip_z_mm`
std::string workspace_csv(const WorkspaceResult& ws);

/// `config_id,length_mm,circular_length_mm,deviation_mm`
std::string audit_csv(const AuditReport& audit);

/// `depth_mm,alpha1_rad,alpha2_rad,clearance_mm,passable`
std::string trace_csv(std::span<const SteerStep> trace);

/// `waypoint_id,alpha1_rad,alpha2_rad,steps1,steps2,footprint_cx,footprint_cy,a_mm,b_mm,reachable`
std::string schedule_csv(const CoverageSchedule& schedule);

/// Reads `x,y` rows (header optional) as a polyline in plane coordinates.
std::vector<Vec2> load_polyline_csv(const std::filesystem::path& file);

/// Reads `x,y,z` rows (header optional).
std::vector<Vec3> load_points_csv(const std::filesystem::path& file);

/// Writes text to a file, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& file, const std::string& text);

}  // namespace ncj

#pragma once

// Text summaries shared by the CLI and the one-shot `report paper` run.

#include "ncj/chain.hpp"
#include "ncj/lumen.hpp"
#include "ncj/profile.hpp"
#include "ncj/spec_file.hpp"
#include "ncj/spin.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ncj {

/// Configs with every section joint drawn uniformly in +-theta_max.
std::vector<ConfigState> random_configs(const ManipulatorSpec& spec, std::size_t count, std::uint64_t seed);

/// `theta_rad,rolling_span_mm,circular_span_mm` over [0, theta_max].
std::string span_comparison_csv(const JointDesign& design, int samples);

/// `section,alpha_rad,pull_mm,antagonist_mm` on a 1 deg grid over each section limit.
std::string tendon_csv(const ManipulatorSpec& spec);

/// `direction,max_bend_deg` rows for up, down, left, right.
std::string workspace_summary_csv(const WorkspaceResult& ws);

std::string critical_n_text(const CriticalNResult& r);
std::string audit_text(const AuditReport& audit);
std::string footprint_text(const FootprintConic& fp);
std::string coverage_text(const CoverageSchedule& schedule);

/// Five-waypoint line sweep on the default target plane plus one waypoint
/// beyond the bend limits.
CoverageRequest demo_coverage_request(const SpecFile& spec);

/// Fixed output names written by write_paper_report, in writing order.
std::vector<std::string> paper_report_files();

/// Regenerates every artifact into `out`. Deterministic for a given spec and seed.
void write_paper_report(const SpecFile& spec, const std::filesystem::path& out, std::uint64_t seed);

}  // namespace ncj

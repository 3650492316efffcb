// Command-line front end: profile synthesis, kinematics, environment and
// electrospinning targeting driven by one spec file.

#include "ncj/chain.hpp"
#include "ncj/errors.hpp"
#include "ncj/export.hpp"
#include "ncj/lumen.hpp"
#include "ncj/profile.hpp"
#include "ncj/report.hpp"
#include "ncj/spec_file.hpp"
#include "ncj/spin.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ncj;

namespace {

struct Options {
  std::string spec = "default";
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::vector<double> alpha_deg;
  std::vector<std::int64_t> steps;
  std::vector<double> target;
  std::vector<double> depths;
  double depth = 0.0;
  double step_deg = 5.0;
  int count = 100;
  std::string path;
  std::string targets;
  std::string region;
};

std::vector<double> section_radians(const ManipulatorSpec& spec, const std::vector<double>& deg) {
  std::vector<double> a(spec.sections.size(), 0.0);
  if (!deg.empty() && deg.size() != a.size()) {
    throw ValidationError({"--alpha-deg expects " + std::to_string(a.size()) + " values"});
  }
  for (std::size_t k = 0; k < deg.size(); ++k) a[k] = deg_to_rad(deg[k]);
  return a;
}

// Writes to --out/<name> when --out is given, stdout otherwise.
void emit(const Options& o, const std::string& name, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  write_text(fs::path(o.out) / name, text);
  std::cout << "wrote " << (fs::path(o.out) / name).string() << "\n";
}

std::string pose_text(const Pose3& p) {
  std::string s = "tip_mm: " + format_number(p.translation.x()) + " " + format_number(p.translation.y()) + " " +
                  format_number(p.translation.z()) + "\n";
  Vec3 a = p.axis();
  s += "axis: " + format_number(a.x()) + " " + format_number(a.y()) + " " + format_number(a.z()) + "\n";
  return s;
}

LumenPath environment_path(const SpecFile& spec, const Options& o) {
  if (!o.path.empty()) return load_path_csv(o.path);
  if (!spec.path_file.empty()) return load_path_csv(spec.path_file);
  return demo_bronchus_path();
}

void profile_synth(const SpecFile& spec, const Options& o) {
  JointProfile p = generate_profile(spec.manipulator.joint, kPi / 2);
  std::string s;
  s += "L_mm: " + format_number(p.design.half_pitch) + "\n";
  s += "N: " + format_number(p.design.n) + "\n";
  s += "samples: " + std::to_string(p.theta_samples.size()) + "\n";
  s += "theta_apex_rad: " + (p.theta_apex ? format_number(*p.theta_apex) : std::string("none")) + "\n";
  s += std::string("closed: ") + (p.closed ? "true" : "false") + "\n";
  s += std::string("simple: ") + (p.simple ? "true" : "false") + "\n";
  for (const auto& d : p.diagnostics) s += "diagnostic: " + d + "\n";
  std::cout << s;
  if (!o.out.empty()) {
    emit(o, o.format == "svg" ? "profile.svg" : "profile.csv", o.format == "svg" ? profile_svg(p) : profile_csv(p));
  }
}

void profile_check(const SpecFile& spec, const Options& o) {
  JointProfile p = generate_profile(spec.manipulator.joint, kPi / 2);
  auto rows = interference_sweep(p, deg_to_rad(0.5));
  const InterferenceReport* worst = &rows.front();
  int hits = 0;
  for (const auto& r : rows) {
    if (r.overlap_area > worst->overlap_area) worst = &r;
    hits += r.interferes();
  }
  std::cout << "closed: " << (p.closed ? "true" : "false") << "\n";
  std::cout << "angles: " << rows.size() << "\n";
  std::cout << "interfering_angles: " << hits << "\n";
  std::cout << "max_overlap_mm2: " << format_number(worst->overlap_area) << "\n";
  std::cout << "worst_theta_rad: " << format_number(worst->theta) << "\n";
  if (!o.out.empty()) emit(o, "interference.csv", interference_csv(rows));
}

void profile_export(const SpecFile& spec, const Options& o) {
  Options w = o;
  if (w.out.empty()) w.out = ".";
  JointProfile p = generate_profile(spec.manipulator.joint, kPi / 2);
  if (o.format == "svg") {
    emit(w, "profile.svg", profile_svg(p));
  } else {
    emit(w, "profile.csv", profile_csv(p));
  }
}

void kin_fk(const SpecFile& spec, const Options& o) {
  const ManipulatorSpec& m = spec.manipulator;
  auto a = section_radians(m, o.alpha_deg);
  ChainPose fk = forward_kinematics(m, section_config(m, a));
  std::cout << pose_text(fk.tip) << "centerline_length_mm: " << format_number(fk.centerline_length) << "\n";
}

void kin_tendon(const SpecFile& spec, const Options& o) {
  const ManipulatorSpec& m = spec.manipulator;
  ConfigState c;
  if (!o.steps.empty()) {
    if (o.steps.size() != m.sections.size()) throw ValidationError({"--steps expects one count per section"});
    ActuationResult r = actuate(m, o.steps);
    for (std::size_t k = 0; k < r.section_angles.size(); ++k) {
      std::cout << "section" << k + 1 << "_rad: " << format_number(r.section_angles[k])
                << (r.saturated[k] ? " saturated" : "") << "\n";
    }
    c = r.config;
  } else {
    c = section_config(m, section_radians(m, o.alpha_deg));
  }
  TendonState ts = tendon_lengths(m, c);
  for (Tendon t : {Tendon::kUp, Tendon::kDown, Tendon::kLeft, Tendon::kRight}) {
    int i = static_cast<int>(t);
    std::cout << to_string(t) << ": length_mm " << format_number(ts.length[i]) << " displacement_mm "
              << format_number(ts.displacement[i]) << "\n";
  }
}

void kin_workspace(const SpecFile& spec, const Options& o) {
  const ManipulatorSpec& m = spec.manipulator;
  if (m.sections.size() != 2) throw ValidationError({"kin workspace needs exactly two sections"});
  if (!(o.step_deg > 0.0)) throw ValidationError({"--step-deg must be > 0"});
  std::vector<std::vector<double>> grids(2);
  for (std::size_t k = 0; k < 2; ++k) {
    const double lim = m.section_limit(k);
    const int n = static_cast<int>(std::floor(lim / deg_to_rad(o.step_deg) + 1e-9));
    for (int i = -n; i <= n; ++i) grids[k].push_back(i * deg_to_rad(o.step_deg));
  }
  WorkspaceResult ws = workspace(m, grids[0], grids[1]);
  std::cout << workspace_summary_csv(ws);
  if (!o.out.empty()) {
    emit(o, "workspace.csv", workspace_csv(ws));
    emit(o, "workspace_summary.csv", workspace_summary_csv(ws));
  }
}

void kin_audit(const SpecFile& spec, const Options& o) {
  if (o.count < 1) throw ValidationError({"--count must be >= 1"});
  auto configs = random_configs(spec.manipulator, static_cast<std::size_t>(o.count), o.seed);
  AuditReport r = centerline_audit(spec.manipulator, configs);
  std::cout << audit_text(r);
  if (!o.out.empty()) emit(o, "audit.csv", audit_csv(r));
}

void env_clearance(const SpecFile& spec, const Options& o) {
  const ManipulatorSpec& m = spec.manipulator;
  LumenPath path = environment_path(spec, o);
  InsertionState st = make_insertion(path, m, o.depth, section_config(m, section_radians(m, o.alpha_deg)));
  ClearanceResult c = clearance(path, m, st, 8);
  std::cout << "min_clearance_mm: " << format_number(c.min_clearance) << "\n";
  std::cout << "location_mm: " << format_number(c.location.x()) << " " << format_number(c.location.y()) << " "
            << format_number(c.location.z()) << "\n";
  std::cout << "passable: " << (c.min_clearance >= 0.0 ? "true" : "false") << "\n";
}

void env_autosteer(const SpecFile& spec, const Options& o) {
  const ManipulatorSpec& m = spec.manipulator;
  LumenPath path = environment_path(spec, o);
  std::vector<double> depths = o.depths;
  if (depths.empty()) depths = {0.0, 2.5, 5.0, 7.5, 10.0};
  std::vector<std::vector<double>> grids(m.sections.size(), default_angle_grid());
  auto trace = auto_steer(path, m, depths, grids);
  emit(o, "autosteer.csv", trace_csv(trace));
}

void spin_footprint(const SpecFile& spec, const Options& o) {
  const ManipulatorSpec& m = spec.manipulator;
  ChainPose fk = forward_kinematics(m, section_config(m, section_radians(m, o.alpha_deg)));
  JetCone cone{fk.tip, spec.spin.half_angle, spec.spin.range};
  std::cout << footprint_text(footprint(cone, default_target_plane(m, spec.spin.params.spun_distance)));
}

void spin_aim(const SpecFile& spec, const Options& o) {
  if (o.target.size() != 3) throw ValidationError({"--target expects x y z in mm"});
  const ManipulatorSpec& m = spec.manipulator;
  AimResult r = aim_at(m, Vec3(o.target[0], o.target[1], o.target[2]), straight_config(m));
  for (std::size_t k = 0; k < r.section_angles.size(); ++k) {
    std::cout << "section" << k + 1 << "_rad: " << format_number(r.section_angles[k]) << "\n";
  }
  std::cout << "residual_rad: " << format_number(r.residual) << "\n";
  std::cout << "iterations: " << r.iterations << "\n";
  std::cout << "reachable: " << (r.reachable ? "true" : "false") << "\n";
  std::cout << "at_limit: " << (r.at_limit ? "true" : "false") << "\n";
}

void spin_plan(const SpecFile& spec, const Options& o) {
  CoverageRequest req = demo_coverage_request(spec);
  if (!o.targets.empty()) req.targets = load_points_csv(o.targets);
  if (!o.region.empty()) req.region = load_polyline_csv(o.region);
  CoverageSchedule s = plan_coverage(spec.manipulator, req, spec.spin.params);
  emit(o, "schedule.csv", schedule_csv(s));
  emit(o, "coverage.txt", coverage_text(s));
}

void report_paper(const SpecFile& spec, const Options& o) {
  fs::path out = o.out.empty() ? fs::path("report") : fs::path(o.out);
  write_paper_report(spec, out, o.seed);
  for (const auto& f : paper_report_files()) std::cout << "wrote " << (out / f).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rolling-joint continuum manipulator toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--spec", o.spec, "spec file, or 'default'");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--format", o.format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
  app.add_option("--seed", o.seed, "seed for randomized checks");

  std::function<void(const SpecFile&, const Options&)> action;
  auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help,
                  std::function<void(const SpecFile&, const Options&)> fn) {
    CLI::App* c = group->add_subcommand(name, help);
    c->callback([&action, fn] { action = fn; });
    return c;
  };

  CLI::App* profile = app.add_subcommand("profile", "joint contour synthesis");
  profile->require_subcommand(1);
  leaf(profile, "synth", "sample the contact loci", profile_synth);
  leaf(profile, "check", "interference sweep over +-theta_max", profile_check);
  leaf(profile, "critical-n", "search the critical normalization factor",
       [](const SpecFile& s, const Options&) {
         const JointDesign& d = s.manipulator.joint;
         std::cout << critical_n_text(find_critical_n(d.half_pitch, d.theta_max, 1e-4));
       });
  leaf(profile, "export", "write profile.csv or profile.svg", profile_export);

  CLI::App* kin = app.add_subcommand("kin", "manipulator kinematics");
  kin->require_subcommand(1);
  leaf(kin, "fk", "tip pose for section angles", kin_fk)->add_option("--alpha-deg", o.alpha_deg, "section angles");
  CLI::App* tendon = leaf(kin, "tendon", "tendon lengths, or actuation from motor steps", kin_tendon);
  tendon->add_option("--alpha-deg", o.alpha_deg, "section angles");
  tendon->add_option("--steps", o.steps, "motor steps per section");
  leaf(kin, "workspace", "tip positions over the section grid", kin_workspace)
      ->add_option("--step-deg", o.step_deg, "grid step");
  leaf(kin, "audit", "centerline length audit over random configs", kin_audit)
      ->add_option("--count", o.count, "number of configs");

  CLI::App* env = app.add_subcommand("env", "tubular environment");
  env->require_subcommand(1);
  CLI::App* clr = leaf(env, "clearance", "minimum wall clearance", env_clearance);
  clr->add_option("--path", o.path, "path CSV (x_mm,y_mm,z_mm,radius_mm)");
  clr->add_option("--depth", o.depth, "insertion depth, mm");
  clr->add_option("--alpha-deg", o.alpha_deg, "section angles");
  CLI::App* steer = leaf(env, "autosteer", "grid-search steering along the path", env_autosteer);
  steer->add_option("--path", o.path, "path CSV (x_mm,y_mm,z_mm,radius_mm)");
  steer->add_option("--depths", o.depths, "insertion depths, mm");

  CLI::App* spin = app.add_subcommand("spin", "electrospinning targeting");
  spin->require_subcommand(1);
  leaf(spin, "footprint", "jet footprint on the target plane", spin_footprint)
      ->add_option("--alpha-deg", o.alpha_deg, "section angles");
  leaf(spin, "aim", "aim the tip axis at a point", spin_aim)->add_option("--target", o.target, "x y z, mm");
  CLI::App* plan = leaf(spin, "plan", "coverage schedule", spin_plan);
  plan->add_option("--targets", o.targets, "waypoint CSV (x,y,z)");
  plan->add_option("--region", o.region, "region CSV (x,y) in plane coordinates");

  CLI::App* report = app.add_subcommand("report", "regenerate artifacts");
  report->require_subcommand(1);
  leaf(report, "paper", "write every artifact under --out", report_paper);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    SpecFile spec = load_spec(o.spec);
    action(spec, o);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) std::cerr << "violation: " << v << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

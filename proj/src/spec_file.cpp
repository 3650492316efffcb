#include "ncj/spec_file.hpp"

#include "ncj/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

namespace ncj {
namespace {

using json = nlohmann::ordered_json;
using Errors = std::vector<std::string>;

bool check_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed,
                  Errors& errors) {
  if (!j.is_object()) {
    errors.push_back(path + ": expected an object");
    return false;
  }
  for (const auto& [key, value] : j.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) errors.push_back(path + "." + key + ": unknown key");
  }
  return true;
}

std::optional<double> number(const json& obj, const std::string& path, const char* key, Errors& errors) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number()) {
    errors.push_back(path + "." + key + ": expected a number");
    return std::nullopt;
  }
  return it->get<double>();
}

std::optional<double> angle(const json& obj, const std::string& path, const std::string& base, Errors& errors) {
  auto rad = number(obj, path, (base + "_rad").c_str(), errors);
  auto deg = number(obj, path, (base + "_deg").c_str(), errors);
  if (rad && deg) {
    errors.push_back(path + "." + base + ": _rad and _deg are mutually exclusive");
    return std::nullopt;
  }
  if (deg) return deg_to_rad(*deg);
  return rad;
}

void read_joint(const json& j, SpecFile& out, Errors& errors) {
  const std::string p = "joint";
  if (!check_object(j, p, {"L_mm", "N", "N_critical", "theta_max_rad", "theta_max_deg"}, errors)) return;
  JointDesign& d = out.manipulator.joint;
  if (auto v = number(j, p, "L_mm", errors)) d.half_pitch = *v;
  if (auto v = angle(j, p, "theta_max", errors)) d.theta_max = *v;

  bool numeric_n = false;
  if (auto it = j.find("N"); it != j.end()) {
    if (it->is_number()) {
      d.n = it->get<double>();
      numeric_n = true;
    } else if (it->is_string() && it->get<std::string>() == "critical") {
      out.n_critical = true;
    } else {
      errors.emplace_back("joint.N: expected a number or \"critical\"");
    }
  }
  if (auto it = j.find("N_critical"); it != j.end()) {
    if (!it->is_boolean()) {
      errors.emplace_back("joint.N_critical: expected a boolean");
    } else if (it->get<bool>()) {
      if (numeric_n || out.n_critical) {
        errors.emplace_back("joint.N: N and N_critical are mutually exclusive");
      }
      out.n_critical = true;
    }
  }
  d.chord = d.n * d.half_pitch;
}

void read_sections(const json& j, SpecFile& out, Errors& errors) {
  const std::string p = "manipulator.sections";
  if (!j.is_array()) {
    errors.push_back(p + ": expected an array");
    return;
  }
  out.manipulator.sections.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string sp = p + "[" + std::to_string(i) + "]";
    const json& s = j[i];
    Section sec;
    if (!check_object(s, sp, {"joints", "plane", "limit_rad", "limit_deg"}, errors)) continue;
    if (auto it = s.find("joints"); it == s.end() || !it->is_array()) {
      errors.push_back(sp + ".joints: expected an array of integers");
    } else {
      for (const auto& v : *it) {
        if (!v.is_number_integer()) {
          errors.push_back(sp + ".joints: expected an array of integers");
          break;
        }
        sec.joints.push_back(v.get<int>());
      }
    }
    if (auto it = s.find("plane"); it == s.end() || !it->is_string()) {
      errors.push_back(sp + ".plane: expected \"up_down\" or \"left_right\"");
    } else if (*it == "up_down") {
      sec.plane = BendPlane::kUpDown;
    } else if (*it == "left_right") {
      sec.plane = BendPlane::kLeftRight;
    } else {
      errors.push_back(sp + ".plane: expected \"up_down\" or \"left_right\"");
    }
    if (auto v = angle(s, sp, "limit", errors)) sec.limit = *v;
    out.manipulator.sections.push_back(std::move(sec));
  }
}

void read_manipulator(const json& j, SpecFile& out, Errors& errors) {
  const std::string p = "manipulator";
  if (!check_object(j, p,
                    {"segment_count", "sections", "outer_diameter_mm", "lumen_diameter_mm", "tendon_radius_mm",
                     "rigid_extra_mm", "motor_step_rad", "motor_step_deg", "wheel_radius_mm"},
                    errors)) {
    return;
  }
  ManipulatorSpec& m = out.manipulator;
  if (auto it = j.find("segment_count"); it != j.end()) {
    if (it->is_number_integer()) {
      m.segment_count = it->get<int>();
    } else {
      errors.emplace_back("manipulator.segment_count: expected an integer");
    }
  }
  if (auto v = number(j, p, "outer_diameter_mm", errors)) m.outer_diameter = *v;
  if (auto v = number(j, p, "lumen_diameter_mm", errors)) m.lumen_diameter = *v;
  if (auto v = number(j, p, "tendon_radius_mm", errors)) m.tendon_radius = *v;
  if (auto v = number(j, p, "rigid_extra_mm", errors)) m.rigid_extra = *v;
  if (auto v = angle(j, p, "motor_step", errors)) m.motor_step = *v;
  if (auto v = number(j, p, "wheel_radius_mm", errors)) m.wheel_radius = *v;
  if (auto it = j.find("sections"); it != j.end()) read_sections(*it, out, errors);
}

void read_spin(const json& j, SpecFile& out, Errors& errors) {
  const std::string p = "spin";
  if (!check_object(j, p,
                    {"half_angle_rad", "half_angle_deg", "range_mm", "voltage_kV", "feed_rate_mL_per_h", "solution",
                     "spun_distance_mm"},
                    errors)) {
    return;
  }
  SpinSettings& s = out.spin;
  if (auto v = angle(j, p, "half_angle", errors)) s.half_angle = *v;
  if (auto v = number(j, p, "range_mm", errors)) s.range = *v;
  if (auto v = number(j, p, "voltage_kV", errors)) s.params.voltage_kv = *v;
  if (auto v = number(j, p, "feed_rate_mL_per_h", errors)) s.params.feed_rate_ml_per_h = *v;
  if (auto v = number(j, p, "spun_distance_mm", errors)) s.params.spun_distance = *v;
  if (auto it = j.find("solution"); it != j.end()) {
    if (it->is_string()) {
      s.params.solution = it->get<std::string>();
    } else {
      errors.emplace_back("spin.solution: expected a string");
    }
  }
  if (!(s.half_angle > 0.0 && s.half_angle < kPi / 2)) errors.emplace_back("spin.half_angle out of (0,pi/2)");
  if (!(s.range > 0.0)) errors.emplace_back("spin.range_mm must be > 0");
  try {
    s.params.validate();
  } catch (const ValidationError& e) {
    errors.insert(errors.end(), e.violations().begin(), e.violations().end());
  }
}

void read_environment(const json& j, SpecFile& out, Errors& errors) {
  if (!check_object(j, "environment", {"path_file"}, errors)) return;
  if (auto it = j.find("path_file"); it != j.end()) {
    if (it->is_string()) {
      out.path_file = it->get<std::string>();
    } else if (!it->is_null()) {
      errors.emplace_back("environment.path_file: expected a string or null");
    }
  }
}

}  // namespace

SpecFile default_spec() {
  SpecFile s;
  s.manipulator = default_manipulator();
  return s;
}

SpecFile parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("spec: malformed JSON: ") + e.what()});
  }
  Errors errors;
  SpecFile out = default_spec();
  if (!check_object(doc, "spec", {"version", "joint", "manipulator", "spin", "environment"}, errors)) {
    throw ValidationError(std::move(errors));
  }
  if (auto it = doc.find("version"); it == doc.end()) {
    errors.emplace_back("version: required");
  } else if (!it->is_number_integer() || it->get<int>() != kSpecVersion) {
    errors.push_back("version: expected " + std::to_string(kSpecVersion));
  }
  if (auto it = doc.find("joint"); it != doc.end()) read_joint(*it, out, errors);
  if (auto it = doc.find("manipulator"); it != doc.end()) read_manipulator(*it, out, errors);
  if (auto it = doc.find("spin"); it != doc.end()) read_spin(*it, out, errors);
  if (auto it = doc.find("environment"); it != doc.end()) read_environment(*it, out, errors);

  ManipulatorSpec& m = out.manipulator;
  if (out.n_critical) m.joint.n = 1.0;  // placeholder so validate() judges the other fields
  try {
    m.validate();
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) {
      if (std::find(errors.begin(), errors.end(), v) == errors.end()) errors.push_back(v);
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));

  if (out.n_critical) {
    try {
      m.joint.n = find_critical_n(m.joint.half_pitch, m.joint.theta_max, 1e-4).n_star;
    } catch (const DomainError& e) {
      throw ValidationError({std::string("joint.N: critical value unavailable: ") + e.what()});
    }
  }
  m.joint.chord = m.joint.n * m.joint.half_pitch;
  return out;
}

SpecFile load_spec(const std::string& file) {
  if (file == "default") return default_spec();
  std::ifstream in(file);
  if (!in) throw IoError("cannot read spec file " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string serialize_spec(const SpecFile& spec) {
  const ManipulatorSpec& m = spec.manipulator;
  json doc;
  doc["version"] = spec.version;
  json joint;
  joint["L_mm"] = m.joint.half_pitch;
  if (spec.n_critical) {
    joint["N"] = "critical";
  } else {
    joint["N"] = m.joint.n;
  }
  joint["theta_max_rad"] = m.joint.theta_max;
  doc["joint"] = joint;

  json man;
  man["segment_count"] = m.segment_count;
  man["outer_diameter_mm"] = m.outer_diameter;
  man["lumen_diameter_mm"] = m.lumen_diameter;
  man["tendon_radius_mm"] = m.tendon_radius;
  man["rigid_extra_mm"] = m.rigid_extra;
  man["motor_step_rad"] = m.motor_step;
  man["wheel_radius_mm"] = m.wheel_radius;
  json sections = json::array();
  for (const auto& s : m.sections) {
    json js;
    js["joints"] = s.joints;
    js["plane"] = s.plane == BendPlane::kUpDown ? "up_down" : "left_right";
    js["limit_rad"] = s.limit;
    sections.push_back(js);
  }
  man["sections"] = sections;
  doc["manipulator"] = man;

  json spin;
  spin["half_angle_rad"] = spec.spin.half_angle;
  spin["range_mm"] = spec.spin.range;
  spin["voltage_kV"] = spec.spin.params.voltage_kv;
  spin["feed_rate_mL_per_h"] = spec.spin.params.feed_rate_ml_per_h;
  spin["solution"] = spec.spin.params.solution;
  spin["spun_distance_mm"] = spec.spin.params.spun_distance;
  doc["spin"] = spin;

  json env;
  if (spec.path_file.empty()) {
    env["path_file"] = nullptr;
  } else {
    env["path_file"] = spec.path_file;
  }
  doc["environment"] = env;
  return doc.dump(2) + "\n";
}

}  // namespace ncj

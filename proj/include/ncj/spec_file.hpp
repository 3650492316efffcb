#pragma once

// Run configuration document (JSON). Lengths are in mm; angles are stored in
// radians and may be given with a `_deg` suffix instead of `_rad`.

#include "ncj/chain.hpp"
#include "ncj/spin.hpp"

#include <filesystem>
#include <string>

namespace ncj {

inline constexpr int kSpecVersion = 1;

struct SpinSettings {
  double half_angle = deg_to_rad(5.0);
  double range = 120.0;
  SpinParams params;

  bool operator==(const SpinSettings&) const = default;
};

struct SpecFile {
  int version = kSpecVersion;
  ManipulatorSpec manipulator;
  /// True when the document asked for N = "critical"; manipulator.joint.n then
  /// holds the resolved N*.
  bool n_critical = false;
  SpinSettings spin;
  std::string path_file;  // empty: built-in demo path

  bool operator==(const SpecFile&) const = default;
};

/// Default prototype values.
SpecFile default_spec();

/// Parses and validates a document. Every violation is collected with its
/// field path; throws ValidationError listing all of them.
SpecFile parse_spec(const std::string& text);

/// "default" selects default_spec(). Throws IoError when unreadable.
SpecFile load_spec(const std::string& file);

/// Canonical JSON text. Angles are written as `_rad` so a reload is exact.
std::string serialize_spec(const SpecFile& spec);

}  // namespace ncj

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kk/characteristics.hpp"
#include "kk/entropy.hpp"
#include "kk/field.hpp"
#include "kk/model.hpp"

namespace kk {

/// Model block of a scenario: {"name": "gc", "B": 1, "alpha": 0.5, "rho_min": 1e-3,
/// "source": {"kind": "exit", "k": 0.1}}.
struct ModelChoice {
  std::string name = "gc";
  double B = 1.0;
  double alpha = 0.5;
  double rho_min = 1e-3;
  SourceSpec source;
};

ModelSpec build_model(const ModelChoice& choice);

/// A scenario file, schema version 1. See README.md for the full format.
struct Scenario {
  std::string name;
  ModelChoice model;
  Profile rho0;
  Profile w0;
  Grid grid;
  double t_end = 1.0;
  /// Strictly decreasing; empty means an inviscid run.
  std::vector<double> epsilon;
  std::optional<RegionSpec> region;
  int n_snapshots = 50;
  double cfl = 0.45;
  double diff_fraction = 0.4;
  /// Threshold M of the dissipativity condition in the audit.
  double audit_threshold = 1.0;
  SpaceWindow window;
  std::filesystem::path output = "out";

  void validate() const;
};

/// Parses scenario JSON text. Relative table paths resolve against base_dir.
/// Throws ParseError (with line and column for malformed JSON) or
/// MissingInputError for unreadable table files.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Reads and parses a scenario file; MissingInputError if it cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace kk

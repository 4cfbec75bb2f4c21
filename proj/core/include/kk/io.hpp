#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kk/field.hpp"
#include "kk/scenario.hpp"
#include "kk/young.hpp"

namespace kk::io {

/// Shortest round-trip decimal representation.
std::string format_number(double v);

/// Writes snap_NNNN.csv files ("x,rho,m,w") and index.json
/// {t_values, dx, epsilon, model, files, grid} into dir. When the model
/// parameters are given they are stored under "model_params" so that plots can
/// evaluate the Riemann invariants later. Returns the path of index.json.
std::filesystem::path write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                                       const std::optional<ModelChoice>& params = std::nullopt);

/// Reads a trajectory back from its index.json. Throws MissingInputError for
/// absent files and ParseError for malformed content.
Trajectory read_trajectory(const std::filesystem::path& index);

/// The "model_params" block of an index, if present.
std::optional<ModelChoice> read_model_params(const std::filesystem::path& index);

struct DecayRecord {
  double epsilon = 0.0;
  std::string functional;
  double value = 0.0;
};

/// "epsilon,functional,value" rows in the given order.
void write_decay_csv(const std::vector<DecayRecord>& rows, const std::filesystem::path& path);

/// "rho_center,w_center,weight" for every nonzero bin.
void write_measure_csv(const EmpiricalMeasure& measure, const std::filesystem::path& path);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::vector<Series> series;
  bool log_x = false;
  bool log_y = false;
};

/// Renders panels stacked vertically into a standalone SVG document.
std::string render_svg(const std::vector<PlotPanel>& panels);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace kk::io

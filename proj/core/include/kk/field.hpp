#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kk/state.hpp"

namespace kk {

enum class Boundary { periodic, outflow };

/// Uniform 1-D cell-centred grid.
struct Grid {
  double x_left = 0.0;
  double x_right = 1.0;
  int n_cells = 64;
  Boundary boundary = Boundary::periodic;

  double dx() const { return (x_right - x_left) / n_cells; }
  double center(int i) const { return x_left + (i + 0.5) * dx(); }
  double length() const { return x_right - x_left; }
  /// Throws ConfigError unless n_cells >= 8 and dx > 0.
  void validate() const;

  /// Neighbour index with the boundary closure applied (zero-gradient ghost
  /// cells for outflow).
  int wrap(int i) const {
    if (boundary == Boundary::periodic) return ((i % n_cells) + n_cells) % n_cells;
    return i < 0 ? 0 : (i >= n_cells ? n_cells - 1 : i);
  }

  bool operator==(const Grid&) const = default;
};

struct Field {
  double t = 0.0;
  std::vector<double> rho;
  std::vector<double> m;

  std::size_t size() const { return rho.size(); }
  State state(std::size_t i) const { return {rho[i], m[i]}; }
  double w(std::size_t i) const { return m[i] / rho[i]; }
};

/// Snapshots of one run at uniformly spaced times t_k = k t_end / n.
struct Trajectory {
  Grid grid;
  double epsilon = 0.0;  // 0 for inviscid runs
  std::string model;
  std::vector<Field> snapshots;
  /// Cells observed below the density floor (inviscid runs only).
  int floor_events = 0;
  double min_rho = 0.0;
  double max_rho = 0.0;
  /// Largest of max(g1, g2) over recorded states when a region was checked.
  std::optional<double> region_margin;

  double snapshot_dt() const;
  const Field& final() const { return snapshots.back(); }
};

// Initial profiles.

struct ConstantProfile {
  double value = 0.0;
};

/// left for x < x0, right otherwise.
struct RiemannProfile {
  double left = 0.0;
  double right = 0.0;
  double x0 = 0.0;
};

/// mean + amp sin(2 pi freq x)
struct SineProfile {
  double mean = 0.0;
  double amp = 0.0;
  double freq = 1.0;
};

/// Piecewise-linear interpolation of (x, value) samples, constant beyond the ends.
struct TableProfile {
  std::vector<double> x;
  std::vector<double> value;
};

using Profile = std::variant<ConstantProfile, RiemannProfile, SineProfile, TableProfile>;

double evaluate(const Profile& p, double x);
bool is_constant(const Profile& p);

}  // namespace kk

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kk/field.hpp"
#include "kk/model.hpp"

namespace kk::fv {

struct FVConfig {
  double cfl = 0.45;
  double t_end = 1.0;
  /// Snapshots at t_k = k t_end / n_snapshots.
  int n_snapshots = 50;
  /// Additional source S(x, t, U) integrated in the source sub-steps. Test-only
  /// hook for manufactured solutions; never populated from scenario files.
  std::function<Vec2(double x, double t, State u)> extra_source;

  void validate() const;
};

/// First-order Rusanov scheme for the inviscid system with Strang-split
/// sources. Cells dropping below model.rho_domain.lo are counted in
/// Trajectory::floor_events, never clamped.
Trajectory solve(const ModelSpec& model, const Grid& grid, Field initial, const FVConfig& config);

struct ScalarSource {
  std::function<double(double)> f;
  /// Set when f(rho) = rate rho.
  std::optional<double> linear_rate;
};

/// f(rho) = model.f(rho, w).
ScalarSource scalar_source(const ModelSpec& model, double w);

struct ScalarTrajectory {
  Grid grid;
  std::vector<double> t;
  std::vector<std::vector<double>> rho;
};

/// Scalar Rusanov scheme for rho_t + h(rho)_x = f(rho) using flux.max_speed as
/// the local speed bound.
ScalarTrajectory solve_scalar(const ScalarFlux& flux, const ScalarSource& source,
                              std::vector<double> rho0, const Grid& grid, const FVConfig& config);

/// Per-snapshot L1 distance between the density of a system run started at
/// w = w_const and a scalar run. Grids and snapshot times must match.
std::vector<double> reduction_gap(const ModelSpec& model, double w_const, const Trajectory& system,
                                  const ScalarTrajectory& scalar);

}  // namespace kk::fv

#pragma once

#include <optional>

#include "kk/characteristics.hpp"
#include "kk/field.hpp"
#include "kk/model.hpp"

namespace kk::viscous {

struct ViscousConfig {
  double epsilon = 1e-2;
  double cfl = 0.45;
  /// Fraction of the explicit diffusion limit dx^2 / epsilon.
  double diff_fraction = 0.4;
  double t_end = 1.0;
  /// Snapshots are recorded at t_k = k t_end / n_snapshots, k = 0..n_snapshots.
  int n_snapshots = 50;
  /// When set, every recorded state must stay inside the region inflated by
  /// region_tolerance(grid).
  std::optional<RegionSpec> region;

  void validate() const;
};

/// Tolerance used by the online invariant-region check: 1e-6 + 10 dx.
double region_tolerance(const Grid& grid);

/// rho = rho0(x_i) + epsilon, m = rho w0(x_i) at cell centres.
Field initialize(const ModelSpec& model, const Grid& grid, const Profile& rho0, const Profile& w0,
                 double epsilon);

/// min(cfl dx / max|lambda|, diff_fraction dx^2 / epsilon, t_end - t).
double stable_dt(const ModelSpec& model, const Grid& grid, const Field& field,
                 const ViscousConfig& config);

/// One Heun (RK2) step of size dt of the central-difference method of lines.
Field step(const ModelSpec& model, const Grid& grid, const Field& field,
           const ViscousConfig& config, double dt);

/// Integrates to t_end recording uniformly spaced snapshots.
Trajectory solve(const ModelSpec& model, const Grid& grid, Field initial,
                 const ViscousConfig& config);

}  // namespace kk::viscous

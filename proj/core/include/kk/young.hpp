#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kk/compactness.hpp"
#include "kk/field.hpp"
#include "kk/model.hpp"

namespace kk {

/// Uniform bins over [lo, hi) on one axis.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int count = 16;

  double width() const { return (hi - lo) / count; }
  double center(int b) const { return lo + (b + 0.5) * width(); }
};

struct BinSpec {
  Axis rho;
  Axis w;
};

/// An (x, t) patch; snapshots with t in [t_lo, t_hi] and cell centres in
/// [x_lo, x_hi] contribute.
struct PatchWindow {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double t_lo = 0.0;
  double t_hi = 1.0;
};

struct EmpiricalMeasure {
  BinSpec bins;
  PatchWindow window;
  /// weights[i * bins.w.count + j] for rho bin i and w bin j.
  std::vector<double> weights;
  /// Samples that fell outside the bin range and went to an edge bin.
  int clamped = 0;

  double weight(int i, int j) const { return weights[i * bins.w.count + j]; }
};

/// Bins spanning every (rho, w) value of all trajectories, padded by half a bin.
BinSpec shared_bins(const std::vector<Trajectory>& trajs, int rho_count, int w_count);

/// dx dt weighted histogram of (rho_i, w_i) over the window, one per
/// trajectory. The time weight uses the trapezoid rule restricted to the
/// window's snapshots (uniform when a single snapshot is selected).
std::vector<EmpiricalMeasure> empirical_measure(const std::vector<Trajectory>& trajs,
                                                const PatchWindow& window, const BinSpec& bins);

/// sum of weights times the observable at bin centres.
double moment(const EmpiricalMeasure& measure,
              const std::function<double(double rho, double w)>& observable);

/// |<rho><rho w phi> - <rho w><rho phi>|.
double tartar_residual(const EmpiricalMeasure& measure, const ModelSpec& model);

struct CommutationCheck {
  double implemented = 0.0;
  double augmented = 0.0;
};

/// max |eta1 q2 - eta2 q1| over the samples for (rho, rho phi), (m, m phi)
/// and for (rho, rho phi + w), (m, m phi + w^2).
CommutationCheck commutation_identity_check(const ModelSpec& model,
                                            const std::vector<State>& samples);

/// Domain split into 16 x 8 patches in (x, t); t starts at the first
/// positive snapshot time.
std::vector<PatchWindow> default_patches(const Grid& grid, double t_end);

/// The patches whose time slab holds at least one snapshot of every trajectory.
/// Coarse snapshot series can leave whole slabs empty.
std::vector<PatchWindow> populated_patches(const std::vector<Trajectory>& trajs,
                                          const std::vector<PatchWindow>& patches);

/// Per trajectory: max and mean of |T| over the populated patches.
std::vector<TartarEntry> tartar_table(const std::vector<Trajectory>& trajs, const ModelSpec& model,
                                      const std::vector<PatchWindow>& patches, int bins_per_axis = 32);

}  // namespace kk

#pragma once

#include <string>
#include <vector>

#include "kk/field.hpp"
#include "kk/model.hpp"
#include "kk/state.hpp"

namespace kk {

/// Built-in convex profiles F(z) of z = m / rho.
enum class EntropyProfile {
  one,             // F = 1: eta = rho
  linear,          // F = z: eta = m
  square,          // F = z^2
  exponential,     // F = exp(z)
  shifted_square,  // F = (z - c)^2
};

/// The pair eta = rho F(m/rho), q = eta phi.
struct EntropyPair {
  std::string name;
  SmoothFn F;
  /// F'' >= 0 on the whole line.
  bool convex = true;

  double eta(State s) const;
  double q(const ModelSpec& model, State s) const;
  Vec2 grad_eta(State s) const;
  Vec2 grad_q(const ModelSpec& model, State s) const;
  Mat2 hess_eta(State s) const;
};

EntropyPair make_pair(EntropyProfile profile, double shift = 0.0);

/// |grad q - grad eta . dF| with analytic gradients.
double pair_residual(const EntropyPair& pair, const ModelSpec& model, State s);

/// Same residual for the augmented pairs (rho, rho phi + w) and
/// (rho w, rho w phi + w^2); index 1 or 2.
double augmented_pair_residual(const ModelSpec& model, State s, int index);

/// X^T Hess(eta) X = (F''/rho) ((m/rho) X_rho - X_m)^2.
double hessian_quadratic(const EntropyPair& pair, State s, Vec2 X);

/// Spatial window [x_lo, x_hi] selecting cell centres.
struct SpaceWindow {
  double x_lo = -1e300;
  double x_hi = 1e300;
};

/// Cells whose centre lies in the window. With `stencil`, boundary cells of
/// non-periodic grids are dropped so central differences stay one-sided free.
std::vector<int> window_cells(const Grid& grid, const SpaceWindow& window, bool stencil);

struct EntropyProduction {
  /// residual[k][j] for snapshot k (forward difference to k+1) and the j-th
  /// window cell: Dt eta + Dx q - eps Dxx eta - grad eta . H.
  std::vector<std::vector<double>> residual;
  /// eps (F''/rho) ((m/rho) rho_x - m_x)^2 at the same points.
  std::vector<std::vector<double>> dissipation;
  std::vector<int> cells;
  /// eps sum_k sum_i (F''/rho)(...)^2 dx dt over the window.
  double D = 0.0;
  /// max |R + dissipation|.
  double max_balance_error = 0.0;
  /// Most negative dissipation density (0 for convex F).
  double min_dissipation = 0.0;
};

/// Discrete entropy balance with central differences in x and forward
/// differences between snapshots in t.
EntropyProduction entropy_production(const Trajectory& traj, const EntropyPair& pair,
                                     const ModelSpec& model, const SpaceWindow& window = {});

/// Nonnegative test function phi(x, t) = B((x - x0)/lx) B((t - t0)/lt) with the
/// quartic bump B(s) = (1 - s^2)^2 on |s| < 1.
struct TestFunction {
  double x0 = 0.0;
  double lx = 1.0;
  double t0 = 0.0;
  double lt = 1.0;
  /// Period for wrapped x distance; 0 for none.
  double period = 0.0;

  double value(double x, double t) const;
  double d_x(double x, double t) const;
  double d_t(double x, double t) const;

  /// Space and time factors of the tensor product.
  double space(double x) const;
  double space_d(double x) const;
  double time(double t) const;
  double time_d(double t) const;
};

/// Weights for integrating a snapshot series against a test function's time
/// factor T: the series is interpolated linearly between snapshot times, and
/// value[k] = int T(t) hat_k(t) dt, deriv[k] = int T'(t) hat_k(t) dt exactly.
struct TimeWeights {
  std::vector<double> value;
  std::vector<double> deriv;
};

TimeWeights time_weights(const std::vector<double>& times, const TestFunction& phi);

/// 3 widths x 8 centres x 4 time centres, all supported in (0, t_end) and,
/// on non-periodic grids, inside the domain.
std::vector<TestFunction> test_function_library(const Grid& grid, double t_end);

struct InequalityResult {
  std::vector<double> pairings;
  double worst = 0.0;
  std::size_t worst_index = 0;
};

/// int int (eta phi_t + q phi_x + grad eta . H phi) dx dt + int eta(x,0) phi(x,0) dx
/// for each test function (midpoint rule in x, time_weights in t); entropy
/// solutions give >= 0.
InequalityResult entropy_inequality(const Trajectory& traj, const EntropyPair& pair,
                                    const ModelSpec& model,
                                    const std::vector<TestFunction>& library);

}  // namespace kk

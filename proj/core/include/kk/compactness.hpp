#pragma once

#include <string>
#include <vector>

#include "kk/entropy.hpp"
#include "kk/field.hpp"
#include "kk/model.hpp"

namespace kk {

struct GradNorms {
  /// sqrt(eps) ||rho_x||, sqrt(eps) ||m_x|| in L2(window x [0, T]).
  double rho = 0.0;
  double m = 0.0;
  /// The same norms in L2(window) at each snapshot.
  std::vector<double> rho_series;
  std::vector<double> m_series;
};

/// Central differences, trapezoid rule in time.
GradNorms grad_norms(const Trajectory& traj, double epsilon, const SpaceWindow& window = {});

/// sum_i |W_{i+1} - W_i| per snapshot (wrapping on periodic grids).
std::vector<double> tv_invariant(const Trajectory& traj, const ModelSpec& model);

/// sum_i |w_{i+1} - w_i| per snapshot (wrapping on periodic grids).
std::vector<double> wx_l1(const Trajectory& traj);

/// int_0^T int rho |w - w0| dx dt, w0 given per cell.
double rho_w_deviation(const Trajectory& traj, const std::vector<double>& w0);

enum class WeakFunctional {
  /// A = rho, B = rho phi, with the source pairing f phi.
  mass,
  /// A = g(rho) = rho^2/2, B = int_{rho_min}^rho g'(s) h_P'(s) ds + g(rho) Phi(w)
  /// with h_P(s) = -s P(s) the pressure part of the scalar flux at frozen w,
  /// and source pairing g'(rho) f phi. B is the scalar entropy flux of g.
  weighted,
};

std::string_view to_string(WeakFunctional f);

/// B of the weighted functional at (rho, w), lower limit model.rho_domain.lo.
double weighted_flux(const ModelSpec& model, double rho, double w);

struct DecayRow {
  double epsilon = 0.0;
  double value = 0.0;
};

/// For each trajectory, max over the library of
/// |int int (A phi_t + B phi_x + S phi) dx dt + int A(x,0) phi(x,0) dx|.
std::vector<DecayRow> weak_residual_decay(const std::vector<Trajectory>& trajs,
                                          const ModelSpec& model, WeakFunctional functional,
                                          const std::vector<TestFunction>& library);

/// sqrt(eps) ||eta||_inf * ||sqrt(eps) eta_x||_L2 over window x [0, T].
double w12_decay(const Trajectory& traj, const EntropyPair& pair, double epsilon,
                 const SpaceWindow& window = {});

/// ||grad eta . H||_inf over window x [0, T].
double source_pairing_bound(const Trajectory& traj, const EntropyPair& pair,
                            const ModelSpec& model, const SpaceWindow& window = {});

struct PairDiagnostics {
  std::string pair;
  double D = 0.0;
  double w12 = 0.0;
  double source_bound = 0.0;
  double worst_pairing = 0.0;
};

struct TartarEntry {
  double epsilon = 0.0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
};

struct DiagnosticsReport {
  double epsilon = 0.0;
  double grad_rho_l2 = 0.0;
  double grad_m_l2 = 0.0;
  std::vector<PairDiagnostics> pairs;
  std::vector<double> tv_W;
  std::vector<double> wx_l1;
  double rho_w_integral = 0.0;
  /// functional name -> value at this epsilon
  std::vector<std::pair<std::string, double>> weak_residuals;
  std::vector<TartarEntry> tartar;

  /// Every stored number is finite and nonnegative.
  bool valid() const;
  std::string to_json() const;
};

/// Fills everything except the cross-epsilon tables (weak residuals and
/// Tartar), which the sweep driver appends.
DiagnosticsReport diagnose(const Trajectory& traj, const ModelSpec& model,
                           const std::vector<EntropyPair>& pairs, const SpaceWindow& window = {});

}  // namespace kk

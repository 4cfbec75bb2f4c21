#include "kk/compactness.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "kk/characteristics.hpp"
#include "kk/error.hpp"

namespace kk {

namespace {

double trapezoid_weight(std::size_t k, std::size_t K, double dt) {
  return (k == 0 || k + 1 == K) ? 0.5 * dt : dt;
}

template <class Value>
std::vector<double> variation(const Trajectory& traj, Value value) {
  const Grid& grid = traj.grid;
  const int n = grid.n_cells;
  const bool periodic = grid.boundary == Boundary::periodic;
  std::vector<double> out;
  std::vector<double> v(n);
  for (const auto& f : traj.snapshots) {
    for (int i = 0; i < n; ++i) v[i] = value(f, i);
    double tv = 0.0;
    for (int i = 0; i + 1 < n; ++i) tv += std::abs(v[i + 1] - v[i]);
    if (periodic) tv += std::abs(v[0] - v[n - 1]);
    out.push_back(tv);
  }
  return out;
}

}  // namespace

GradNorms grad_norms(const Trajectory& traj, double epsilon, const SpaceWindow& window) {
  const Grid& grid = traj.grid;
  const auto cells = window_cells(grid, window, true);
  if (cells.empty()) throw InputError("grad_norms: empty window");
  const double dx = grid.dx();
  const double dt = traj.snapshot_dt();
  const std::size_t K = traj.snapshots.size();
  const double se = std::sqrt(epsilon);
  GradNorms out;
  double sr = 0.0, sm = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const Field& u = traj.snapshots[k];
    double ar = 0.0, am = 0.0;
    for (int i : cells) {
      const int l = grid.wrap(i - 1);
      const int r = grid.wrap(i + 1);
      const double gr = (u.rho[r] - u.rho[l]) / (2.0 * dx);
      const double gm = (u.m[r] - u.m[l]) / (2.0 * dx);
      ar += gr * gr * dx;
      am += gm * gm * dx;
    }
    out.rho_series.push_back(se * std::sqrt(ar));
    out.m_series.push_back(se * std::sqrt(am));
    const double wt = K > 1 ? trapezoid_weight(k, K, dt) : 0.0;
    sr += ar * wt;
    sm += am * wt;
  }
  out.rho = se * std::sqrt(sr);
  out.m = se * std::sqrt(sm);
  return out;
}

std::vector<double> tv_invariant(const Trajectory& traj, const ModelSpec& model) {
  return variation(traj, [&](const Field& f, int i) {
    return riemann_invariants(model, f.state(i)).W;
  });
}

std::vector<double> wx_l1(const Trajectory& traj) {
  return variation(traj, [](const Field& f, int i) { return f.w(i); });
}

double rho_w_deviation(const Trajectory& traj, const std::vector<double>& w0) {
  const int n = traj.grid.n_cells;
  if (w0.size() != static_cast<std::size_t>(n)) throw InputError("w0 does not match the grid");
  const double dx = traj.grid.dx();
  const double dt = traj.snapshot_dt();
  const std::size_t K = traj.snapshots.size();
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const Field& u = traj.snapshots[k];
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += u.rho[i] * std::abs(u.w(i) - w0[i]);
    total += s * dx * (K > 1 ? trapezoid_weight(k, K, dt) : 0.0);
  }
  return total;
}

std::string_view to_string(WeakFunctional f) {
  return f == WeakFunctional::mass ? "mass" : "weighted";
}

namespace {

/// int_a^rho s (-(s P(s))') ds: the pressure part of the scalar entropy flux
/// for g = rho^2 / 2. The transport part g Phi(w) is added by the caller.
double weighted_flux_integral(const ModelSpec& model, double a, double rho) {
  auto integrand = [&](double s) {
    return -s * (model.pressure.value(s) + s * model.pressure.d1(s));
  };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, a, rho, 8,
                                                                        1e-12);
}

}  // namespace

double weighted_flux(const ModelSpec& model, double rho, double w) {
  return weighted_flux_integral(model, model.rho_domain.lo, rho) +
         0.5 * rho * rho * model.profile.value(w);
}

std::vector<DecayRow> weak_residual_decay(const std::vector<Trajectory>& trajs,
                                          const ModelSpec& model, WeakFunctional functional,
                                          const std::vector<TestFunction>& library) {
  if (trajs.empty()) return {};
  const Grid& grid = trajs.front().grid;
  for (const auto& tr : trajs) {
    if (!(tr.grid == grid) || tr.snapshots.size() != trajs.front().snapshots.size()) {
      throw InputError("weak_residual_decay: trajectories do not share grid and snapshots");
    }
  }
  const int n = grid.n_cells;
  const double dx = grid.dx();
  std::vector<DecayRow> out;
  for (const auto& tr : trajs) {
    const std::size_t K = tr.snapshots.size();
    std::vector<std::vector<double>> A(K, std::vector<double>(n)), B(K, std::vector<double>(n)),
        S(K, std::vector<double>(n));
    for (std::size_t k = 0; k < K; ++k) {
      const Field& u = tr.snapshots[k];
      for (int i = 0; i < n; ++i) {
        const double rho = u.rho[i];
        const double w = u.w(i);
        const double f = model.f(rho, w);
        if (functional == WeakFunctional::mass) {
          A[k][i] = rho;
          B[k][i] = rho * model.phi(rho, w);
          S[k][i] = f;
        } else {
          A[k][i] = 0.5 * rho * rho;
          B[k][i] = weighted_flux(model, rho, w);
          S[k][i] = rho * f;
        }
      }
    }
    std::vector<double> times(K);
    for (std::size_t k = 0; k < K; ++k) times[k] = tr.snapshots[k].t;
    std::vector<double> X(n), Xd(n);
    double worst = 0.0;
    for (const auto& phi : library) {
      for (int i = 0; i < n; ++i) {
        X[i] = phi.space(grid.center(i));
        Xd[i] = phi.space_d(grid.center(i));
      }
      const TimeWeights tw = time_weights(times, phi);
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        if (tw.value[k] == 0.0 && tw.deriv[k] == 0.0) continue;
        double a = 0.0, b = 0.0;
        for (int i = 0; i < n; ++i) {
          a += A[k][i] * X[i];
          b += B[k][i] * Xd[i] + S[k][i] * X[i];
        }
        total += (a * tw.deriv[k] + b * tw.value[k]) * dx;
      }
      const double T0 = phi.time(times.front());
      if (T0 != 0.0) {
        double initial = 0.0;
        for (int i = 0; i < n; ++i) initial += A[0][i] * X[i];
        total += initial * T0 * dx;
      }
      worst = std::max(worst, std::abs(total));
    }
    out.push_back({tr.epsilon, worst});
  }
  return out;
}

double w12_decay(const Trajectory& traj, const EntropyPair& pair, double epsilon,
                 const SpaceWindow& window) {
  const Grid& grid = traj.grid;
  const auto cells = window_cells(grid, window, true);
  if (cells.empty()) throw InputError("w12_decay: empty window");
  const double dx = grid.dx();
  const double dt = traj.snapshot_dt();
  const std::size_t K = traj.snapshots.size();
  double sup = 0.0;
  double l2 = 0.0;
  std::vector<double> eta(grid.n_cells);
  for (std::size_t k = 0; k < K; ++k) {
    const Field& u = traj.snapshots[k];
    for (int i = 0; i < grid.n_cells; ++i) eta[i] = pair.eta(u.state(i));
    double s = 0.0;
    for (int i : cells) {
      const double g = (eta[grid.wrap(i + 1)] - eta[grid.wrap(i - 1)]) / (2.0 * dx);
      s += g * g * dx;
      sup = std::max(sup, std::abs(eta[i]));
    }
    l2 += s * (K > 1 ? trapezoid_weight(k, K, dt) : 0.0);
  }
  return std::sqrt(epsilon) * sup * std::sqrt(epsilon * l2);
}

double source_pairing_bound(const Trajectory& traj, const EntropyPair& pair,
                            const ModelSpec& model, const SpaceWindow& window) {
  const auto cells = window_cells(traj.grid, window, false);
  double sup = 0.0;
  for (const auto& u : traj.snapshots) {
    for (int i : cells) {
      const State s = u.state(i);
      const double w = s.w();
      sup = std::max(sup, std::abs(pair.grad_eta(s).dot({model.f(s.rho, w), model.g(s.rho, w)})));
    }
  }
  return sup;
}

bool DiagnosticsReport::valid() const {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  bool good = ok(epsilon) && ok(grad_rho_l2) && ok(grad_m_l2) && ok(rho_w_integral);
  for (const auto& p : pairs) good = good && ok(p.D) && ok(p.w12) && ok(p.source_bound);
  for (double v : tv_W) good = good && ok(v);
  for (double v : wx_l1) good = good && ok(v);
  for (const auto& [name, v] : weak_residuals) good = good && ok(v);
  for (const auto& t : tartar) good = good && ok(t.max_residual) && ok(t.mean_residual);
  return good;
}

std::string DiagnosticsReport::to_json() const {
  nlohmann::json j;
  j["epsilon"] = epsilon;
  j["grad_rho_l2"] = grad_rho_l2;
  j["grad_m_l2"] = grad_m_l2;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : pairs) {
    j["pairs"].push_back({{"pair", p.pair},
                          {"D", p.D},
                          {"w12", p.w12},
                          {"source_bound", p.source_bound},
                          {"worst_pairing", p.worst_pairing},
                          {"epsilon", epsilon}});
  }
  j["tv_W"] = tv_W;
  j["wx_l1"] = wx_l1;
  j["rho_w_integral"] = rho_w_integral;
  j["weak_residuals"] = nlohmann::json::object();
  for (const auto& [name, v] : weak_residuals) j["weak_residuals"][name] = v;
  j["tartar"] = nlohmann::json::array();
  for (const auto& t : tartar) {
    j["tartar"].push_back(
        {{"epsilon", t.epsilon}, {"max_residual", t.max_residual}, {"mean_residual", t.mean_residual}});
  }
  return j.dump(2);
}

DiagnosticsReport diagnose(const Trajectory& traj, const ModelSpec& model,
                           const std::vector<EntropyPair>& pairs, const SpaceWindow& window) {
  DiagnosticsReport r;
  r.epsilon = traj.epsilon;
  const auto g = grad_norms(traj, traj.epsilon, window);
  r.grad_rho_l2 = g.rho;
  r.grad_m_l2 = g.m;
  const auto lib = test_function_library(traj.grid, traj.final().t);
  for (const auto& pair : pairs) {
    PairDiagnostics p;
    p.pair = pair.name;
    p.D = traj.snapshots.size() >= 3 ? entropy_production(traj, pair, model, window).D : 0.0;
    p.w12 = w12_decay(traj, pair, traj.epsilon, window);
    p.source_bound = source_pairing_bound(traj, pair, model, window);
    p.worst_pairing = entropy_inequality(traj, pair, model, lib).worst;
    r.pairs.push_back(p);
  }
  r.tv_W = tv_invariant(traj, model);
  r.wx_l1 = wx_l1(traj);
  const Field& f0 = traj.snapshots.front();
  std::vector<double> w0(f0.size());
  for (std::size_t i = 0; i < f0.size(); ++i) w0[i] = f0.w(i);
  r.rho_w_integral = rho_w_deviation(traj, w0);
  return r;
}

}  // namespace kk

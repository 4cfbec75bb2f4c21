#include "kk/fv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kk/error.hpp"

namespace kk::fv {

void FVConfig::validate() const {
  if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
  if (n_snapshots < 1) throw ConfigError("need at least one snapshot interval");
}

namespace {

void check_state(const std::vector<double>& rho, const std::vector<double>* m, double t) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const bool bad = !std::isfinite(rho[i]) || !(rho[i] > 0.0) || (m && !std::isfinite((*m)[i]));
    if (bad) {
      throw BlowupError("state blowup in cell " + std::to_string(i) + " at t=" + std::to_string(t),
                        static_cast<int>(i), t);
    }
  }
}

/// Heun step for the pointwise source ODE U' = S(x, t, U).
template <class S>
State heun(State u, double t, double dt, const S& src) {
  const Vec2 k1 = src(t, u);
  const State p = u + k1 * dt;
  const Vec2 k2 = src(t + dt, p);
  return u + (k1 + k2) * (0.5 * dt);
}

class SystemStepper {
 public:
  SystemStepper(const ModelSpec& model, const Grid& grid, const FVConfig& config)
      : model_(model), grid_(grid), config_(config) {}

  /// Fills per-cell velocity and speed bound; returns the global max speed.
  double speeds(const Field& u) {
    const int n = grid_.n_cells;
    phi_.resize(n);
    speed_.resize(n);
    double a = 0.0;
    for (int i = 0; i < n; ++i) {
      const double rho = u.rho[i];
      const double phi = model_.phi(rho, u.m[i] / rho);
      const double lam2 = phi - rho * model_.pressure.d1(rho);
      phi_[i] = phi;
      speed_[i] = std::max(std::abs(phi), std::abs(lam2));
      if (!std::isfinite(speed_[i])) {
        throw BlowupError("non-finite wave speed in cell " + std::to_string(i), i, u.t);
      }
      a = std::max(a, speed_[i]);
    }
    return a;
  }

  /// Rusanov update; speeds() must have been called on u.
  void hyperbolic(Field& u, double dt) const {
    const int n = grid_.n_cells;
    std::vector<double> fr(n + 1), fm(n + 1);
    for (int j = 0; j <= n; ++j) {
      const int l = grid_.wrap(j - 1);
      const int r = grid_.wrap(j);
      const double a = std::max(speed_[l], speed_[r]);
      fr[j] = 0.5 * (u.rho[l] * phi_[l] + u.rho[r] * phi_[r]) - 0.5 * a * (u.rho[r] - u.rho[l]);
      fm[j] = 0.5 * (u.m[l] * phi_[l] + u.m[r] * phi_[r]) - 0.5 * a * (u.m[r] - u.m[l]);
    }
    const double c = dt / grid_.dx();
    for (int i = 0; i < n; ++i) {
      u.rho[i] -= c * (fr[i + 1] - fr[i]);
      u.m[i] -= c * (fm[i + 1] - fm[i]);
    }
  }

  void source(Field& u, double t, double dt) const {
    if (config_.extra_source || !model_.linear_rate) {
      for (int i = 0; i < grid_.n_cells; ++i) {
        const double x = grid_.center(i);
        auto src = [&](double tt, State s) {
          const double w = s.w();
          Vec2 v{model_.f(s.rho, w), model_.g(s.rho, w)};
          if (config_.extra_source) v = v + config_.extra_source(x, tt, s);
          return v;
        };
        const State s = heun(u.state(i), t, dt, src);
        u.rho[i] = s.rho;
        u.m[i] = s.m;
      }
      return;
    }
    const double rate = *model_.linear_rate;
    if (rate == 0.0) return;
    // f = c rho, g = c m: exact exponential.
    const double factor = std::exp(rate * dt);
    for (int i = 0; i < grid_.n_cells; ++i) {
      u.rho[i] *= factor;
      u.m[i] *= factor;
    }
  }

 private:
  const ModelSpec& model_;
  const Grid& grid_;
  const FVConfig& config_;
  std::vector<double> phi_;
  std::vector<double> speed_;
};

}  // namespace

Trajectory solve(const ModelSpec& model, const Grid& grid, Field initial, const FVConfig& config) {
  grid.validate();
  config.validate();
  if (initial.size() != static_cast<std::size_t>(grid.n_cells) ||
      initial.m.size() != initial.rho.size()) {
    throw InputError("initial field does not match the grid");
  }
  check_state(initial.rho, &initial.m, 0.0);

  Trajectory traj;
  traj.grid = grid;
  traj.epsilon = 0.0;
  traj.model = model.name;
  traj.min_rho = std::numeric_limits<double>::infinity();
  traj.max_rho = -std::numeric_limits<double>::infinity();
  const double floor = model.rho_domain.lo;

  SystemStepper stepper(model, grid, config);
  Field u = std::move(initial);
  u.t = 0.0;
  auto observe = [&](const Field& f) {
    for (double r : f.rho) {
      traj.min_rho = std::min(traj.min_rho, r);
      traj.max_rho = std::max(traj.max_rho, r);
    }
  };
  observe(u);
  traj.snapshots.push_back(u);
  for (int k = 1; k <= config.n_snapshots; ++k) {
    const double target = config.t_end * k / config.n_snapshots;
    while (u.t < target) {
      const double a = stepper.speeds(u);
      double dt = target - u.t;
      bool last = true;
      if (a > 0.0 && config.cfl * grid.dx() / a < dt) {
        dt = config.cfl * grid.dx() / a;
        last = false;
      }
      const double t0 = u.t;
      stepper.source(u, t0, 0.5 * dt);
      check_state(u.rho, &u.m, t0);
      stepper.speeds(u);
      stepper.hyperbolic(u, dt);
      check_state(u.rho, &u.m, t0 + dt);
      stepper.source(u, t0 + 0.5 * dt, 0.5 * dt);
      check_state(u.rho, &u.m, t0 + dt);
      u.t = last ? target : t0 + dt;
      for (double r : u.rho) {
        if (r < floor) ++traj.floor_events;
      }
      observe(u);
    }
    traj.snapshots.push_back(u);
  }
  return traj;
}

ScalarSource scalar_source(const ModelSpec& model, double w) {
  ScalarSource s;
  auto f = model.density_source;
  s.f = [f, w](double rho) { return f(rho, w); };
  s.linear_rate = model.linear_rate;
  return s;
}

ScalarTrajectory solve_scalar(const ScalarFlux& flux, const ScalarSource& source,
                              std::vector<double> rho0, const Grid& grid, const FVConfig& config) {
  grid.validate();
  config.validate();
  const int n = grid.n_cells;
  if (rho0.size() != static_cast<std::size_t>(n)) throw InputError("rho0 does not match grid");
  check_state(rho0, nullptr, 0.0);

  auto apply_source = [&](std::vector<double>& rho, double dt) {
    if (source.linear_rate) {
      if (*source.linear_rate == 0.0) return;
      const double factor = std::exp(*source.linear_rate * dt);
      for (double& r : rho) r *= factor;
      return;
    }
    for (double& r : rho) {
      const double k1 = source.f(r);
      const double k2 = source.f(r + dt * k1);
      r += 0.5 * dt * (k1 + k2);
    }
  };

  ScalarTrajectory out;
  out.grid = grid;
  std::vector<double> rho = std::move(rho0);
  std::vector<double> h(n), speed(n), face(n + 1);
  double t = 0.0;
  out.t.push_back(t);
  out.rho.push_back(rho);
  auto fill_speeds = [&] {
    double a = 0.0;
    for (int i = 0; i < n; ++i) {
      speed[i] = flux.max_speed(rho[i]);
      a = std::max(a, speed[i]);
    }
    return a;
  };
  for (int k = 1; k <= config.n_snapshots; ++k) {
    const double target = config.t_end * k / config.n_snapshots;
    while (t < target) {
      const double a = fill_speeds();
      double dt = target - t;
      bool last = true;
      if (a > 0.0 && config.cfl * grid.dx() / a < dt) {
        dt = config.cfl * grid.dx() / a;
        last = false;
      }
      apply_source(rho, 0.5 * dt);
      fill_speeds();
      for (int i = 0; i < n; ++i) h[i] = flux.h(rho[i]);
      for (int j = 0; j <= n; ++j) {
        const int l = grid.wrap(j - 1);
        const int r = grid.wrap(j);
        const double s = std::max(speed[l], speed[r]);
        face[j] = 0.5 * (h[l] + h[r]) - 0.5 * s * (rho[r] - rho[l]);
      }
      const double c = dt / grid.dx();
      for (int i = 0; i < n; ++i) rho[i] -= c * (face[i + 1] - face[i]);
      apply_source(rho, 0.5 * dt);
      check_state(rho, nullptr, t + dt);
      t = last ? target : t + dt;
    }
    out.t.push_back(t);
    out.rho.push_back(rho);
  }
  return out;
}

std::vector<double> reduction_gap(const ModelSpec& model, double w_const, const Trajectory& system,
                                  const ScalarTrajectory& scalar) {
  (void)model;
  if (!(system.grid == scalar.grid)) throw InputError("reduction_gap: grid mismatch");
  if (system.snapshots.size() != scalar.rho.size()) {
    throw InputError("reduction_gap: snapshot count mismatch");
  }
  const auto& first = system.snapshots.front();
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (std::abs(first.w(i) - w_const) > 1e-12 * (1.0 + std::abs(w_const))) {
      throw InputError("reduction_gap: system run does not start at constant w");
    }
  }
  const double dx = system.grid.dx();
  std::vector<double> gap;
  for (std::size_t k = 0; k < system.snapshots.size(); ++k) {
    if (std::abs(system.snapshots[k].t - scalar.t[k]) > 1e-12 * (1.0 + scalar.t[k])) {
      throw InputError("reduction_gap: snapshot times differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < first.size(); ++i) {
      s += std::abs(system.snapshots[k].rho[i] - scalar.rho[k][i]);
    }
    gap.push_back(s * dx);
  }
  return gap;
}

}  // namespace kk::fv

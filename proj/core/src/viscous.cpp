#include "kk/viscous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kk/error.hpp"

namespace kk::viscous {

void ViscousConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("cfl must lie in (0, 1)");
  if (!(diff_fraction > 0.0 && diff_fraction < 0.5)) {
    throw ConfigError("diff_fraction must lie in (0, 0.5)");
  }
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
  if (n_snapshots < 1) throw ConfigError("need at least one snapshot interval");
}

double region_tolerance(const Grid& grid) { return 1e-6 + 10.0 * grid.dx(); }

Field initialize(const ModelSpec& model, const Grid& grid, const Profile& rho0, const Profile& w0,
                 double epsilon) {
  (void)model;
  grid.validate();
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  Field f;
  f.rho.resize(grid.n_cells);
  f.m.resize(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    const double r = evaluate(rho0, x);
    const double w = evaluate(w0, x);
    if (!(r >= 0.0)) {
      throw InputError("initial density negative at x=" + std::to_string(x));
    }
    if (!std::isfinite(w)) throw InputError("initial w not finite at x=" + std::to_string(x));
    f.rho[i] = r + epsilon;
    f.m[i] = f.rho[i] * w;
  }
  return f;
}

namespace {

double max_wave_speed(const ModelSpec& model, const Field& field) {
  double a = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double rho = field.rho[i];
    const double phi = model.phi(rho, field.m[i] / rho);
    const double lam2 = phi - rho * model.pressure.d1(rho);
    const double s = std::max(std::abs(phi), std::abs(lam2));
    if (!std::isfinite(s)) {
      throw BlowupError("non-finite wave speed in cell " + std::to_string(i), static_cast<int>(i),
                        field.t);
    }
    a = std::max(a, s);
  }
  return a;
}

void check_finite(const Field& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f.rho[i]) || !std::isfinite(f.m[i]) || !(f.rho[i] > 0.0)) {
      throw BlowupError("state blowup in cell " + std::to_string(i) + " at t=" +
                            std::to_string(f.t),
                        static_cast<int>(i), f.t);
    }
  }
}

/// Right-hand side of the semi-discrete system.
void rhs(const ModelSpec& model, const Grid& grid, double epsilon, const Field& u,
         std::vector<double>& d_rho, std::vector<double>& d_m) {
  const int n = grid.n_cells;
  std::vector<double> flux_rho(n), flux_m(n), src_rho(n), src_m(n);
  for (int i = 0; i < n; ++i) {
    const double rho = u.rho[i];
    const double w = u.m[i] / rho;
    const double phi = model.phi(rho, w);
    flux_rho[i] = rho * phi;
    flux_m[i] = u.m[i] * phi;
    src_rho[i] = model.f(rho, w);
    src_m[i] = model.g(rho, w);
  }
  const double dx = grid.dx();
  const double inv_2dx = 1.0 / (2.0 * dx);
  const double nu = epsilon / (dx * dx);
  d_rho.resize(n);
  d_m.resize(n);
  for (int i = 0; i < n; ++i) {
    const int l = grid.wrap(i - 1);
    const int r = grid.wrap(i + 1);
    d_rho[i] = -(flux_rho[r] - flux_rho[l]) * inv_2dx +
               nu * (u.rho[r] - 2.0 * u.rho[i] + u.rho[l]) + src_rho[i];
    d_m[i] = -(flux_m[r] - flux_m[l]) * inv_2dx + nu * (u.m[r] - 2.0 * u.m[i] + u.m[l]) +
             src_m[i];
  }
}

}  // namespace

double stable_dt(const ModelSpec& model, const Grid& grid, const Field& field,
                 const ViscousConfig& config) {
  const double dx = grid.dx();
  const double a = max_wave_speed(model, field);
  double dt = config.t_end - field.t;
  if (a > 0.0) dt = std::min(dt, config.cfl * dx / a);
  dt = std::min(dt, config.diff_fraction * dx * dx / config.epsilon);
  return dt;
}

Field step(const ModelSpec& model, const Grid& grid, const Field& field,
           const ViscousConfig& config, double dt) {
  const int n = grid.n_cells;
  std::vector<double> k1r, k1m, k2r, k2m;
  rhs(model, grid, config.epsilon, field, k1r, k1m);
  Field stage;
  stage.t = field.t + dt;
  stage.rho.resize(n);
  stage.m.resize(n);
  for (int i = 0; i < n; ++i) {
    stage.rho[i] = field.rho[i] + dt * k1r[i];
    stage.m[i] = field.m[i] + dt * k1m[i];
  }
  check_finite(stage);
  rhs(model, grid, config.epsilon, stage, k2r, k2m);
  Field out;
  out.t = field.t + dt;
  out.rho.resize(n);
  out.m.resize(n);
  for (int i = 0; i < n; ++i) {
    out.rho[i] = field.rho[i] + 0.5 * dt * (k1r[i] + k2r[i]);
    out.m[i] = field.m[i] + 0.5 * dt * (k1m[i] + k2m[i]);
  }
  check_finite(out);
  return out;
}

namespace {

void check_region(const ModelSpec& model, const Grid& grid, const RegionSpec& region,
                  const Field& f, double& worst) {
  const double tol = region_tolerance(grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto mg = region_check(model, region, f.state(i));
    worst = std::max({worst, mg.g1, mg.g2});
    if (mg.g1 > tol || mg.g2 > tol) {
      throw RegionViolationError("state left the invariant region in cell " + std::to_string(i) +
                                     " at t=" + std::to_string(f.t) + " (g1=" +
                                     std::to_string(mg.g1) + ", g2=" + std::to_string(mg.g2) +
                                     ")",
                                 static_cast<int>(i), f.t, f.rho[i], f.m[i]);
    }
  }
}

void track_bounds(Trajectory& traj, const Field& f) {
  for (double r : f.rho) {
    traj.min_rho = std::min(traj.min_rho, r);
    traj.max_rho = std::max(traj.max_rho, r);
  }
}

}  // namespace

Trajectory solve(const ModelSpec& model, const Grid& grid, Field initial,
                 const ViscousConfig& config) {
  grid.validate();
  config.validate();
  if (initial.size() != static_cast<std::size_t>(grid.n_cells) ||
      initial.m.size() != initial.rho.size()) {
    throw InputError("initial field does not match the grid");
  }
  check_finite(initial);

  Trajectory traj;
  traj.grid = grid;
  traj.epsilon = config.epsilon;
  traj.model = model.name;
  traj.min_rho = std::numeric_limits<double>::infinity();
  traj.max_rho = -std::numeric_limits<double>::infinity();
  double worst_margin = -std::numeric_limits<double>::infinity();

  Field u = std::move(initial);
  u.t = 0.0;
  auto record = [&](const Field& f) {
    if (config.region) check_region(model, grid, *config.region, f, worst_margin);
    track_bounds(traj, f);
    traj.snapshots.push_back(f);
  };
  record(u);
  for (int k = 1; k <= config.n_snapshots; ++k) {
    const double target = config.t_end * k / config.n_snapshots;
    while (u.t < target) {
      double dt = stable_dt(model, grid, u, config);
      bool last = false;
      if (dt >= target - u.t) {
        dt = target - u.t;
        last = true;
      }
      u = step(model, grid, u, config, dt);
      if (last) u.t = target;
      for (double r : u.rho) traj.min_rho = std::min(traj.min_rho, r);
    }
    record(u);
  }
  if (config.region) traj.region_margin = worst_margin;
  return traj;
}

}  // namespace kk::viscous

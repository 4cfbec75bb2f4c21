#include "kk/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kk/characteristics.hpp"
#include "kk/error.hpp"

namespace kk {

double EntropyPair::eta(State s) const { return s.rho * F.value(s.w()); }

double EntropyPair::q(const ModelSpec& model, State s) const {
  return eta(s) * model.phi(s.rho, s.w());
}

Vec2 EntropyPair::grad_eta(State s) const {
  const double z = s.w();
  const double d = F.d1(z);
  return {F.value(z) - z * d, d};
}

Vec2 EntropyPair::grad_q(const ModelSpec& model, State s) const {
  const double z = s.w();
  const double Fz = F.value(z);
  const double dF = F.d1(z);
  const double phi = model.phi(s.rho, z);
  const double dprof = model.profile.d1(z);
  const double phi_rho = -dprof * z / s.rho - model.pressure.d1(s.rho);
  const double phi_m = dprof / s.rho;
  return {(Fz - z * dF) * phi + s.rho * Fz * phi_rho, dF * phi + s.rho * Fz * phi_m};
}

Mat2 EntropyPair::hess_eta(State s) const {
  const double z = s.w();
  const double c = F.d2(z) / s.rho;
  return {c * z * z, -c * z, -c * z, c};
}

EntropyPair make_pair(EntropyProfile profile, double shift) {
  EntropyPair p;
  switch (profile) {
    case EntropyProfile::one:
      p.name = "F=1";
      p.F = {[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
      break;
    case EntropyProfile::linear:
      p.name = "F=z";
      p.F = {[](double z) { return z; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
      break;
    case EntropyProfile::square:
      p.name = "F=z^2";
      p.F = {[](double z) { return z * z; }, [](double z) { return 2.0 * z; },
             [](double) { return 2.0; }};
      break;
    case EntropyProfile::exponential:
      p.name = "F=exp(z)";
      p.F = {[](double z) { return std::exp(z); }, [](double z) { return std::exp(z); },
             [](double z) { return std::exp(z); }};
      break;
    case EntropyProfile::shifted_square:
      p.name = "F=(z-" + std::to_string(shift) + ")^2";
      p.F = {[shift](double z) { return (z - shift) * (z - shift); },
             [shift](double z) { return 2.0 * (z - shift); }, [](double) { return 2.0; }};
      break;
  }
  p.convex = true;
  return p;
}

double pair_residual(const EntropyPair& pair, const ModelSpec& model, State s) {
  const Vec2 lhs = pair.grad_q(model, s);
  const Vec2 rhs = left_multiply(pair.grad_eta(s), jacobian(model, s));
  return (lhs - rhs).norm();
}

double augmented_pair_residual(const ModelSpec& model, State s, int index) {
  if (index != 1 && index != 2) throw InputError("augmented pair index must be 1 or 2");
  const double w = s.w();
  const double phi = model.phi(s.rho, w);
  const double dprof = model.profile.d1(w);
  const double phi_rho = -dprof * w / s.rho - model.pressure.d1(s.rho);
  const double phi_m = dprof / s.rho;
  const Vec2 grad_w{-w / s.rho, 1.0 / s.rho};
  const Mat2 jac = jacobian(model, s);
  Vec2 grad_eta, grad_q;
  if (index == 1) {
    // eta = rho, q = rho phi + w
    grad_eta = {1.0, 0.0};
    grad_q = Vec2{phi + s.rho * phi_rho, s.rho * phi_m} + grad_w;
  } else {
    // eta = m, q = m phi + w^2
    grad_eta = {0.0, 1.0};
    grad_q = Vec2{s.m * phi_rho, phi + s.m * phi_m} + grad_w * (2.0 * w);
  }
  return (grad_q - left_multiply(grad_eta, jac)).norm();
}

double hessian_quadratic(const EntropyPair& pair, State s, Vec2 X) {
  const double z = s.w();
  const double v = z * X.x - X.y;
  return pair.F.d2(z) / s.rho * v * v;
}

std::vector<int> window_cells(const Grid& grid, const SpaceWindow& window, bool stencil) {
  std::vector<int> cells;
  const bool trim = stencil && grid.boundary != Boundary::periodic;
  for (int i = 0; i < grid.n_cells; ++i) {
    if (trim && (i == 0 || i == grid.n_cells - 1)) continue;
    const double x = grid.center(i);
    if (x >= window.x_lo && x <= window.x_hi) cells.push_back(i);
  }
  return cells;
}

EntropyProduction entropy_production(const Trajectory& traj, const EntropyPair& pair,
                                     const ModelSpec& model, const SpaceWindow& window) {
  if (traj.snapshots.size() < 3) throw InputError("entropy_production needs >= 3 snapshots");
  const Grid& grid = traj.grid;
  const double dx = grid.dx();
  const double dt = traj.snapshot_dt();
  const double eps = traj.epsilon;
  EntropyProduction out;
  out.cells = window_cells(grid, window, true);
  if (out.cells.empty()) throw InputError("entropy_production: empty window");

  const std::size_t K = traj.snapshots.size();
  std::vector<double> eta(grid.n_cells), q(grid.n_cells), eta_next(grid.n_cells);
  double min_d = std::numeric_limits<double>::infinity();
  double max_err = 0.0;
  double D = 0.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const Field& u = traj.snapshots[k];
    const Field& v = traj.snapshots[k + 1];
    for (int i = 0; i < grid.n_cells; ++i) {
      eta[i] = pair.eta(u.state(i));
      q[i] = pair.q(model, u.state(i));
      eta_next[i] = pair.eta(v.state(i));
    }
    std::vector<double> res, diss;
    res.reserve(out.cells.size());
    diss.reserve(out.cells.size());
    for (int i : out.cells) {
      const int l = grid.wrap(i - 1);
      const int r = grid.wrap(i + 1);
      const State s = u.state(i);
      const double w = s.w();
      const Vec2 H{model.f(s.rho, w), model.g(s.rho, w)};
      const double R = (eta_next[i] - eta[i]) / dt + (q[r] - q[l]) / (2.0 * dx) -
                       eps * (eta[r] - 2.0 * eta[i] + eta[l]) / (dx * dx) -
                       pair.grad_eta(s).dot(H);
      const Vec2 grad{(u.rho[r] - u.rho[l]) / (2.0 * dx), (u.m[r] - u.m[l]) / (2.0 * dx)};
      const double d = eps * hessian_quadratic(pair, s, grad);
      res.push_back(R);
      diss.push_back(d);
      min_d = std::min(min_d, d);
      max_err = std::max(max_err, std::abs(R + d));
      D += d * dx * dt;
    }
    out.residual.push_back(std::move(res));
    out.dissipation.push_back(std::move(diss));
  }
  out.D = D;
  out.max_balance_error = max_err;
  out.min_dissipation = std::min(0.0, min_d);
  return out;
}

namespace {

double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double a = 1.0 - s * s;
  return a * a;
}

double bump_d(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return -4.0 * s * (1.0 - s * s);
}

double offset(const TestFunction& f, double x) {
  double d = x - f.x0;
  if (f.period > 0.0) d -= f.period * std::round(d / f.period);
  return d;
}

}  // namespace

double TestFunction::space(double x) const { return bump(offset(*this, x) / lx); }
double TestFunction::space_d(double x) const { return bump_d(offset(*this, x) / lx) / lx; }
double TestFunction::time(double t) const { return bump((t - t0) / lt); }
double TestFunction::time_d(double t) const { return bump_d((t - t0) / lt) / lt; }

double TestFunction::value(double x, double t) const { return space(x) * time(t); }
double TestFunction::d_x(double x, double t) const { return space_d(x) * time(t); }
double TestFunction::d_t(double x, double t) const { return space(x) * time_d(t); }

TimeWeights time_weights(const std::vector<double>& times, const TestFunction& phi) {
  // T and T' are polynomials of degree <= 4 on the support; times a linear hat
  // the integrand has degree <= 5, so 3-point Gauss-Legendre is exact on each
  // piece once the interval is split at the support ends.
  static constexpr double kNodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double kWeights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const std::size_t K = times.size();
  TimeWeights out{std::vector<double>(K, 0.0), std::vector<double>(K, 0.0)};
  const double lo = phi.t0 - phi.lt;
  const double hi = phi.t0 + phi.lt;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double a = times[k];
    const double b = times[k + 1];
    const double h = b - a;
    if (!(h > 0.0)) continue;
    double cuts[4] = {a, std::clamp(lo, a, b), std::clamp(hi, a, b), b};
    for (int p = 0; p < 3; ++p) {
      const double u = cuts[p];
      const double v = cuts[p + 1];
      if (!(v > u)) continue;
      const double mid = 0.5 * (u + v);
      const double half = 0.5 * (v - u);
      for (int q = 0; q < 3; ++q) {
        const double t = mid + half * kNodes[q];
        const double s = (t - a) / h;
        const double wv = kWeights[q] * half * phi.time(t);
        const double wd = kWeights[q] * half * phi.time_d(t);
        out.value[k] += wv * (1.0 - s);
        out.value[k + 1] += wv * s;
        out.deriv[k] += wd * (1.0 - s);
        out.deriv[k + 1] += wd * s;
      }
    }
  }
  return out;
}

std::vector<TestFunction> test_function_library(const Grid& grid, double t_end) {
  std::vector<TestFunction> lib;
  const double L = grid.length();
  const bool periodic = grid.boundary == Boundary::periodic;
  for (double frac : {0.25, 0.125, 0.0625}) {
    const double lx = frac * L;
    for (int j = 0; j < 8; ++j) {
      const double x0 = periodic ? grid.x_left + (j + 0.5) * L / 8.0
                                 : grid.x_left + lx + j * (L - 2.0 * lx) / 7.0;
      for (int k = 0; k < 4; ++k) {
        TestFunction f;
        f.x0 = x0;
        f.lx = lx;
        f.t0 = t_end * (k + 1) / 5.0;
        f.lt = t_end / 5.0;
        f.period = periodic ? L : 0.0;
        lib.push_back(f);
      }
    }
  }
  return lib;
}

InequalityResult entropy_inequality(const Trajectory& traj, const EntropyPair& pair,
                                    const ModelSpec& model,
                                    const std::vector<TestFunction>& library) {
  if (traj.snapshots.size() < 2) throw InputError("entropy_inequality needs >= 2 snapshots");
  const Grid& grid = traj.grid;
  const double dx = grid.dx();
  const std::size_t K = traj.snapshots.size();
  const int n = grid.n_cells;

  // Per-snapshot densities, reused for every test function.
  std::vector<std::vector<double>> eta(K, std::vector<double>(n)), q(K, std::vector<double>(n)),
      src(K, std::vector<double>(n));
  for (std::size_t k = 0; k < K; ++k) {
    const Field& u = traj.snapshots[k];
    for (int i = 0; i < n; ++i) {
      const State s = u.state(i);
      const double w = s.w();
      eta[k][i] = pair.eta(s);
      q[k][i] = pair.q(model, s);
      src[k][i] = pair.grad_eta(s).dot({model.f(s.rho, w), model.g(s.rho, w)});
    }
  }

  std::vector<double> times(K);
  for (std::size_t k = 0; k < K; ++k) times[k] = traj.snapshots[k].t;

  InequalityResult out;
  out.worst = std::numeric_limits<double>::infinity();
  std::vector<double> X(n), Xd(n);
  for (std::size_t f = 0; f < library.size(); ++f) {
    const auto& phi = library[f];
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
        a += eta[k][i] * X[i];
        b += q[k][i] * Xd[i] + src[k][i] * X[i];
      }
      total += (a * tw.deriv[k] + b * tw.value[k]) * dx;
    }
    const double T0 = phi.time(times.front());
    if (T0 != 0.0) {
      double initial = 0.0;
      for (int i = 0; i < n; ++i) initial += eta[0][i] * X[i];
      total += initial * T0 * dx;
    }
    out.pairings.push_back(total);
    if (total < out.worst) {
      out.worst = total;
      out.worst_index = f;
    }
  }
  return out;
}

}  // namespace kk

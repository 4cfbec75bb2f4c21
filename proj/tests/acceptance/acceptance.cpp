// Acceptance checks. Each criterion prints one line:
//   PASS criterion N: <measured values> (<seconds> s)
// and the process exits nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kk/characteristics.hpp"
#include "kk/compactness.hpp"
#include "kk/entropy.hpp"
#include "kk/error.hpp"
#include "kk/fv.hpp"
#include "kk/io.hpp"
#include "kk/scenario.hpp"
#include "kk/viscous.hpp"
#include "kk/young.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace kk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Scenario scenario(const std::string& name) {
  return load_scenario(fs::path(KK_SCENARIO_DIR) / (name + ".json"));
}

viscous::ViscousConfig viscous_config(const Scenario& s, double eps) {
  viscous::ViscousConfig c;
  c.epsilon = eps;
  c.cfl = s.cfl;
  c.diff_fraction = s.diff_fraction;
  c.t_end = s.t_end;
  c.n_snapshots = s.n_snapshots;
  c.region = s.region;
  return c;
}

Trajectory run_viscous(const Scenario& s, double eps, bool with_region = true) {
  const ModelSpec model = build_model(s.model);
  auto cfg = viscous_config(s, eps);
  if (!with_region) cfg.region.reset();
  return viscous::solve(model, s.grid, viscous::initialize(model, s.grid, s.rho0, s.w0, eps), cfg);
}

Trajectory run_fv(const Scenario& s) {
  const ModelSpec model = build_model(s.model);
  fv::FVConfig c;
  c.cfl = s.cfl;
  c.t_end = s.t_end;
  c.n_snapshots = s.n_snapshots;
  return fv::solve(model, s.grid, viscous::initialize(model, s.grid, s.rho0, s.w0, 0.0), c);
}

std::vector<std::string> shipped_scenarios() {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(KK_SCENARIO_DIR)) {
    if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

double l1(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * dx;
}

/// Non-increasing with a relative slack on each step.
bool non_increasing(const std::vector<double>& v, double slack) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > (1.0 + slack) * v[k - 1]) return false;
  }
  return true;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + num(v[k]);
  return s + "]";
}

// 1. Eigenpairs against a finite-difference Jacobian.
Outcome eigenstructure_oracle() {
  const auto states = test::random_states(600, 101);
  std::size_t checked = 0;
  double worst = 0.0;
  for (const auto& model : builtin_models()) {
    for (const State s : states) {
      const auto e = eigenstructure(model, s);
      const Mat2 dF = test::fd_jacobian([&](State u) { return test::flux(model, u); }, s);
      auto check = [&](Vec2 r, double lambda) {
        const Vec2 u = r * (1.0 / r.norm());
        const double res = ((dF * u) - u * lambda).norm() / (1.0 + dF.norm());
        worst = std::max(worst, res);
      };
      check(e.r2, e.lambda2);
      if (!e.degenerate) check(e.r1, e.lambda1);
      ++checked;
    }
  }
  return {checked >= 500 && worst <= 1e-9,
          std::to_string(checked) + " states, max |dF r - lambda r|/(1+|dF|) = " + num(worst)};
}

// 2. Linear degeneracy of the contact field, and of both fields for Chaplygin.
Outcome linear_degeneracy() {
  const auto states = test::random_states(500, 202);
  double worst1 = 0.0, worst_ch = 0.0;
  for (const auto& model : builtin_models()) {
    for (const State s : states) {
      const auto f = characteristic_fields(model, s);
      worst1 = std::max(worst1, std::abs(f.dl1_r1));
      if (model.name.rfind("chaplygin", 0) == 0) worst_ch = std::max(worst_ch, std::abs(f.dl2_r2));
    }
  }
  return {worst1 <= 1e-7 && worst_ch <= 1e-7,
          "max |dl1.r1| = " + num(worst1) + ", Chaplygin max |dl2.r2| = " + num(worst_ch)};
}

// 3. Entropy pair identity and Hessian quadratic.
Outcome entropy_pairs() {
  const auto states = test::random_states(100, 303);
  std::mt19937_64 gen(304);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  double worst_pair = 0.0, worst_hess = 0.0;
  for (const auto& model : builtin_models()) {
    for (auto p : {EntropyProfile::one, EntropyProfile::linear, EntropyProfile::square,
                   EntropyProfile::exponential}) {
      const auto pair = make_pair(p);
      for (const State s : states) {
        worst_pair = std::max(worst_pair, pair_residual(pair, model, s));
        if (p == EntropyProfile::one || p == EntropyProfile::linear) continue;
        const double a = angle(gen);
        const Vec2 X{std::cos(a), std::sin(a) * std::max(1.0, std::abs(s.w()))};
        const double exact = hessian_quadratic(pair, s, X);
        const double fd = test::fd_quadratic([&](State u) { return pair.eta(u); }, s, X,
                                             2e-3 * s.rho / X.norm());
        // Relative to the form's scale |Hess| |X|^2, not to |exact|, which
        // vanishes when X is parallel to (1, w).
        const double scale = pair.hess_eta(s).norm() * X.dot(X);
        worst_hess = std::max(worst_hess, std::abs(exact - fd) / scale);
      }
    }
  }
  return {worst_pair <= 1e-7 && worst_hess <= 1e-6,
          "max pair residual = " + num(worst_pair) + ", max Hessian relative error = " +
              num(worst_hess)};
}

// 4. Viscous snapshots stay in the inflated invariant region.
Outcome invariant_region() {
  std::string detail;
  bool pass = true;
  for (const char* name : {"gc_riemann_shock", "gc_riemann_entry", "gc_sine"}) {
    const Scenario s = scenario(name);
    const ModelSpec model = build_model(s.model);
    if (!s.region || s.grid.n_cells != 1024) return {false, std::string(name) + ": not set up"};
    for (double eps : {4e-3, 1e-3}) {
      double margin = -std::numeric_limits<double>::infinity();
      try {
        const Trajectory tr = run_viscous(s, eps);
        for (const auto& f : tr.snapshots) {
          for (std::size_t i = 0; i < f.size(); ++i) {
            const auto m = region_check(model, *s.region, f.state(i));
            margin = std::max({margin, m.g1, m.g2});
          }
        }
      } catch (const RegionViolationError&) {
        pass = false;
        margin = std::numeric_limits<double>::infinity();
      }
      const double tol = viscous::region_tolerance(s.grid);
      pass = pass && margin <= tol;
      detail += std::string(detail.empty() ? "" : "; ") + name + " eps=" + num(eps) +
                " margin=" + num(margin);
    }
  }
  return {pass, detail + " (tol " + num(viscous::region_tolerance({0, 1, 1024})) + ")"};
}

// 5. Strict positivity on every shipped scenario.
Outcome positivity() {
  bool pass = true;
  std::string detail;
  for (const auto& name : shipped_scenarios()) {
    const Scenario s = scenario(name);
    double min_rho = std::numeric_limits<double>::infinity();
    int floor_events = 0;
    try {
      for (double eps : s.epsilon) {
        const Trajectory tr = run_viscous(s, eps, false);
        for (const auto& f : tr.snapshots) {
          min_rho = std::min(min_rho, *std::min_element(f.rho.begin(), f.rho.end()));
        }
      }
      const Trajectory tr = run_fv(s);
      floor_events += tr.floor_events;
      min_rho = std::min(min_rho, tr.min_rho);
    } catch (const Error& e) {
      pass = false;
      detail += std::string(detail.empty() ? "" : "; ") + name + ": " + e.what();
      continue;
    }
    pass = pass && min_rho > 0.0 && floor_events == 0;
    detail += std::string(detail.empty() ? "" : "; ") + name + " min_rho=" + num(min_rho) +
              " floor_events=" + std::to_string(floor_events);
  }
  return {pass, detail};
}

// 6. Dissipation measure and its W^{-1,2} surrogate on the shocked sweep.
Outcome dissipation_bound() {
  const Scenario s = scenario("gc_riemann_shock");
  const ModelSpec model = build_model(s.model);
  const auto pair = make_pair(EntropyProfile::square);
  std::vector<double> D, w12;
  for (double eps : {4e-3, 2e-3, 1e-3}) {
    const Trajectory tr = run_viscous(s, eps);
    D.push_back(entropy_production(tr, pair, model, s.window).D);
    w12.push_back(w12_decay(tr, pair, eps, s.window));
  }
  const double ratio = *std::max_element(D.begin(), D.end()) / *std::min_element(D.begin(), D.end());
  return {ratio < 3.0 && non_increasing(w12, 0.1),
          "D = " + list(D) + " (max/min " + num(ratio) + "), w12 = " + list(w12)};
}

// 7. Scalar reduction at constant w.
Outcome scalar_reduction() {
  const Scenario s = scenario("gc_constant_w");
  const ModelSpec model = build_model(s.model);
  const double w = evaluate(s.w0, 0.0);
  if (!is_constant(s.w0) || s.grid.n_cells != 1024) return {false, "scenario not set up"};
  fv::FVConfig cfg;
  cfg.cfl = s.cfl;
  cfg.t_end = s.t_end;
  cfg.n_snapshots = s.n_snapshots;
  const Trajectory sys = run_fv(s);
  const auto scalar = fv::solve_scalar(scalar_flux(model, w), fv::scalar_source(model, w),
                                       sys.snapshots.front().rho, s.grid, cfg);
  const auto gaps = fv::reduction_gap(model, w, sys, scalar);
  const double identity = *std::max_element(gaps.begin(), gaps.end());

  const Trajectory visc = run_viscous(s, 1e-3);
  const double dx = s.grid.dx();
  const double gap = l1(visc.final().rho, scalar.rho.back(), dx);
  double mass = 0.0;
  for (double r : sys.snapshots.front().rho) mass += std::abs(r) * dx;
  return {identity <= 1e-10 && gap <= 0.02 * mass,
          "system/scalar L1 = " + num(identity) + ", viscous(1e-3) vs scalar L1 = " + num(gap) +
              " (bound " + num(0.02 * mass) + ")"};
}

// 8. Exact exponential damping of a constant state.
Outcome damping() {
  const Scenario s = scenario("damping");
  if (s.model.source.kind != SourceKind::exit) return {false, "scenario not set up"};
  const Trajectory tr = run_fv(s);
  const double rho0 = evaluate(s.rho0, 0.0);
  const double k = s.model.source.k;
  double err = 0.0;
  for (const auto& f : tr.snapshots) {
    for (double r : f.rho) err = std::max(err, std::abs(r - rho0 * std::exp(-k * f.t)));
  }
  const double final_err = std::abs(tr.final().rho[0] - rho0 * std::exp(-k * s.t_end));
  return {final_err <= 1e-8 && err <= 1e-8,
          "|rho(1) - rho0 e^-k| = " + num(final_err) + ", max over snapshots " + num(err)};
}

// 9. Commutation identity, Dirac measures, and the Tartar residual sweep.
Outcome tartar() {
  const auto samples = test::random_states(500, 909);
  double comm = 0.0;
  for (const auto& model : builtin_models()) {
    const auto c = commutation_identity_check(model, samples);
    comm = std::max({comm, c.implemented, c.augmented});
  }

  const Scenario s = scenario("gc_riemann_shock");
  const ModelSpec model = build_model(s.model);
  double dirac = 0.0;
  for (const State u : test::random_states(20, 910)) {
    Trajectory tr;
    tr.grid = {0.0, 1.0, 32};
    for (int k = 0; k <= 4; ++k) {
      tr.snapshots.push_back({0.25 * k, std::vector<double>(32, u.rho), std::vector<double>(32, u.m)});
    }
    const auto mu = empirical_measure({tr}, {0.0, 1.0, 0.0, 1.0}, shared_bins({tr}, 16, 16));
    dirac = std::max(dirac, tartar_residual(mu.front(), model));
  }

  std::vector<Trajectory> sweep;
  for (double eps : s.epsilon) sweep.push_back(run_viscous(s, eps));
  const auto table = tartar_table(sweep, model, default_patches(s.grid, s.t_end));
  std::vector<double> mean, max;
  for (const auto& t : table) {
    mean.push_back(t.mean_residual);
    max.push_back(t.max_residual);
  }
  return {comm <= 1e-12 && dirac <= 1e-12 && non_increasing(mean, 0.1),
          "commutation = " + num(comm) + ", Dirac T = " + num(dirac) + ", mean |T| = " +
              list(mean) + ", max |T| = " + list(max)};
}

/// A viscous stationary contact replayed backward in time: anti-diffusion
/// in w, which no admissible solution produces.
Trajectory reversed_contact(const ModelSpec& model, const Grid& grid) {
  viscous::ViscousConfig cfg;
  cfg.epsilon = 0.02;
  cfg.t_end = 0.5;
  cfg.n_snapshots = 50;
  const RiemannProfile w{0.5, 2.5, 0.5};
  const RiemannProfile rho{1.0 / (0.5 * 0.5), 1.0 / (2.5 * 2.5), 0.5};
  Trajectory tr = viscous::solve(model, grid, viscous::initialize(model, grid, rho, w, 0.0), cfg);
  std::vector<double> times;
  for (const auto& f : tr.snapshots) times.push_back(f.t);
  std::reverse(tr.snapshots.begin(), tr.snapshots.end());
  for (std::size_t k = 0; k < times.size(); ++k) tr.snapshots[k].t = times[k];
  return tr;
}

// 10. Entropy inequality: negative control versus monotone runs.
Outcome entropy_inequality_control() {
  const auto pair = make_pair(EntropyProfile::square);
  auto worst_pairing = [&](const Scenario& s, const Trajectory& tr) {
    const ModelSpec model = build_model(s.model);
    return entropy_inequality(tr, pair, model, test_function_library(tr.grid, s.t_end)).worst;
  };

  const Scenario smooth = scenario("gc_constant_w");
  const double dx = smooth.grid.dx();
  const double c_smooth = std::abs(worst_pairing(smooth, run_fv(smooth))) / dx;
  const double tol = 2.0 * c_smooth * dx;

  bool pass = true;
  std::string runs;
  for (const char* name : {"gc_riemann_shock", "gc_riemann_entry", "gc_sine", "gc_constant_w",
                           "damping"}) {
    const Scenario s = scenario(name);
    const double w = worst_pairing(s, run_fv(s));
    pass = pass && w >= -tol;
    runs += std::string(runs.empty() ? "" : ", ") + name + "=" + num(w);
  }

  Scenario fixture = smooth;
  fixture.grid.boundary = Boundary::outflow;
  const Trajectory bad = reversed_contact(build_model(fixture.model), fixture.grid);
  const double bad_pairing = worst_pairing(fixture, bad);
  pass = pass && bad_pairing < -10.0 * tol;
  return {pass, "tol = " + num(tol) + " (C = " + num(c_smooth) + "), fixture = " + num(bad_pairing) +
                    ", monotone: " + runs};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 11. Two sweeps with different worker counts give identical CSV bundles.
Outcome reproducibility() {
  const fs::path root = fs::temp_directory_path() / "kk_acceptance_repro";
  fs::remove_all(root);
  const fs::path input = fs::path(KK_SCENARIO_DIR) / "gc_sine.json";
  std::vector<fs::path> outs;
  for (const char* threads : {"1", "3"}) {
    const fs::path out = root / (std::string("threads_") + threads);
    const std::string cmd = std::string("KK_THREADS=") + threads + " \"" + KK_BINARY +
                            "\" sweep \"" + input.string() + "\" --out \"" + out.string() +
                            "\" > \"" + (root / "log.txt").string() + "\" 2>&1";
    fs::create_directories(root);
    if (std::system(cmd.c_str()) != 0) return {false, "kk sweep failed: " + read_file(root / "log.txt")};
    outs.push_back(out);
  }
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(outs[0])) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    const fs::path other = outs[1] / e.path().filename();
    if (!fs::exists(other) || read_file(e.path()) != read_file(other)) {
      return {false, e.path().filename().string() + " differs"};
    }
  }
  std::size_t other_files = 0;
  for (const auto& e : fs::directory_iterator(outs[1])) other_files += e.path().extension() == ".csv";
  return {files > 0 && files == other_files,
          std::to_string(files) + " CSV files identical across KK_THREADS=1 and 3"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kk acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only the given criteria (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::function<Outcome()>> criteria = {
      {1, eigenstructure_oracle}, {2, linear_degeneracy},
      {3, entropy_pairs},         {4, invariant_region},
      {5, positivity},            {6, dissipation_bound},
      {7, scalar_reduction},      {8, damping},
      {9, tartar},                {10, entropy_inequality_control},
      {11, reproducibility}};

  int failures = 0;
  for (const auto& [n, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", n, r.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += !r.pass;
  }
  return failures == 0 ? 0 : 1;
}

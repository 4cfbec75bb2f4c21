#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "kk/characteristics.hpp"
#include "kk/compactness.hpp"
#include "kk/entropy.hpp"
#include "kk/error.hpp"
#include "kk/fv.hpp"
#include "kk/io.hpp"
#include "kk/scenario.hpp"
#include "kk/viscous.hpp"
#include "kk/young.hpp"

namespace kk::cli {

namespace fs = std::filesystem;
using io::format_number;

int run_guarded(const std::function<int()>& f, std::ostream& err) {
  try {
    return f();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return parse_error;
  } catch (const MissingInputError& e) {
    err << "missing input: " << e.what() << "\n";
    return missing_input;
  } catch (const BlowupError& e) {
    err << "blowup: " << e.what() << " (cell " << e.cell() << ", t=" << e.time() << ")\n";
    return blowup;
  } catch (const RegionViolationError& e) {
    err << "region violation: " << e.what() << " (cell " << e.cell() << ", t=" << e.time()
        << ", rho=" << e.rho() << ", m=" << e.m() << ")\n";
    return region_violation;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return parse_error;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return parse_error;
  }
}

int worker_count(int jobs) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KK_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) n = v;
  }
  return std::clamp(n, 1, std::max(1, jobs));
}

namespace {

fs::path output_dir(const Scenario& s, const Options& opts) { return opts.out ? *opts.out : s.output; }

ConditionReport run_audit(const Scenario& s, const ModelSpec& model) {
  return audit_conditions(model, SamplingPlan{}, s.audit_threshold);
}

/// Prints failing required conditions; returns true when the audit passes.
bool audit_gate(const ConditionReport& report, bool force, std::ostream& log) {
  if (report.required_pass()) return true;
  for (const auto& r : report.results) {
    if (r.required && r.verdict == Verdict::fail) {
      log << "audit: " << r.condition << " fails at (rho=" << r.witness_rho
          << ", w=" << r.witness_w << ")\n";
    }
  }
  if (force) {
    log << "audit: continuing because of --force\n";
    return true;
  }
  log << "audit: required conditions fail; rerun with --force to solve anyway\n";
  return false;
}

viscous::ViscousConfig viscous_config(const Scenario& s, double epsilon) {
  viscous::ViscousConfig c;
  c.epsilon = epsilon;
  c.cfl = s.cfl;
  c.diff_fraction = s.diff_fraction;
  c.t_end = s.t_end;
  c.n_snapshots = s.n_snapshots;
  c.region = s.region;
  return c;
}

fv::FVConfig fv_config(const Scenario& s) {
  fv::FVConfig c;
  c.cfl = s.cfl;
  c.t_end = s.t_end;
  c.n_snapshots = s.n_snapshots;
  return c;
}

Trajectory run_viscous(const Scenario& s, const ModelSpec& model, double epsilon) {
  Field init = viscous::initialize(model, s.grid, s.rho0, s.w0, epsilon);
  return viscous::solve(model, s.grid, std::move(init), viscous_config(s, epsilon));
}

Trajectory run_inviscid(const Scenario& s, const ModelSpec& model) {
  Field init = viscous::initialize(model, s.grid, s.rho0, s.w0, 0.0);
  return fv::solve(model, s.grid, std::move(init), fv_config(s));
}

/// "inside", "outside" or "unchecked" with the largest margin.
std::string region_verdict(const Trajectory& traj, const ModelSpec& model,
                           const std::optional<RegionSpec>& region) {
  if (!region) return "unchecked";
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : traj.snapshots) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto m = region_check(model, *region, f.state(i));
      worst = std::max({worst, m.g1, m.g2});
    }
  }
  const bool inside = worst <= viscous::region_tolerance(traj.grid);
  return std::string(inside ? "inside" : "outside") + " (max margin " + format_number(worst) + ")";
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * dx;
}

std::string eps_tag(std::size_t k) { return "eps" + std::to_string(k); }

}  // namespace

int cmd_audit(const fs::path& path, const Options& opts, std::ostream& log) {
  const Scenario s = load_scenario(path);
  const ModelSpec model = build_model(s.model);
  const ConditionReport report = run_audit(s, model);
  const fs::path dir = output_dir(s, opts);
  io::write_text(dir / "audit.json", report.to_json() + "\n");
  for (const auto& r : report.results) {
    log << (r.required ? "  " : "  (info) ") << r.condition << ": " << to_string(r.verdict);
    if (r.verdict == Verdict::fail) {
      log << " at (rho=" << r.witness_rho << ", w=" << r.witness_w << ")";
    }
    if (!r.note.empty()) log << " [" << r.note << "]";
    log << "\n";
  }
  const bool pass = report.required_pass();
  log << "audit " << (pass ? "passed" : "failed") << ": " << (dir / "audit.json").string() << "\n";
  return pass ? ok : audit_failed;
}

int cmd_solve(const fs::path& path, const Options& opts, std::ostream& log) {
  const Scenario s = load_scenario(path);
  const ModelSpec model = build_model(s.model);
  if (!audit_gate(run_audit(s, model), opts.force, log)) return audit_failed;

  const bool inviscid = opts.inviscid || (s.epsilon.empty() && !opts.epsilon);
  if (opts.inviscid && opts.epsilon) throw ConfigError("--epsilon and --inviscid exclude each other");
  Trajectory traj;
  fs::path dir = output_dir(s, opts);
  if (inviscid) {
    traj = run_inviscid(s, model);
    dir /= "inviscid";
  } else {
    const double eps = opts.epsilon ? *opts.epsilon : s.epsilon.back();
    traj = run_viscous(s, model, eps);
    dir /= "eps_" + format_number(eps);
  }
  const auto index = io::write_trajectory(traj, dir, s.model);

  double max_w = 0.0;
  for (const auto& f : traj.snapshots) {
    for (std::size_t i = 0; i < f.size(); ++i) max_w = std::max(max_w, std::abs(f.w(i)));
  }
  log << "solve: model=" << traj.model << " epsilon=" << format_number(traj.epsilon)
      << " snapshots=" << traj.snapshots.size() << " min_rho=" << format_number(traj.min_rho)
      << " max_rho=" << format_number(traj.max_rho) << " max|w|=" << format_number(max_w)
      << " region=" << region_verdict(traj, model, s.region);
  if (inviscid) log << " floor_events=" << traj.floor_events;
  log << "\n  index: " << index.string() << "\n";
  return ok;
}

int cmd_sweep(const fs::path& path, const Options& opts, std::ostream& log) {
  const Scenario s = load_scenario(path);
  if (s.epsilon.size() < 2) throw ConfigError("sweep needs at least two epsilon values");
  const ModelSpec model = build_model(s.model);
  if (!audit_gate(run_audit(s, model), opts.force, log)) return audit_failed;
  const fs::path dir = output_dir(s, opts);

  // Members run concurrently; results land in fixed slots so every emitted
  // number is independent of scheduling.
  const std::size_t n = s.epsilon.size();
  std::vector<std::optional<Trajectory>> runs(n);
  std::vector<int> codes(n, ok);
  std::vector<std::string> messages(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      std::ostringstream err;
      codes[k] = run_guarded(
          [&] {
            runs[k] = run_viscous(s, model, s.epsilon[k]);
            return static_cast<int>(ok);
          },
          err);
      messages[k] = err.str();
    }
  };
  const int workers = worker_count(static_cast<int>(n));
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = ok;
  std::vector<Trajectory> done;
  for (std::size_t k = 0; k < n; ++k) {
    if (codes[k] != ok) {
      log << "sweep: epsilon=" << format_number(s.epsilon[k]) << " failed: " << messages[k];
      if (status == ok) status = codes[k];
      continue;
    }
    done.push_back(*runs[k]);
    const Field& fin = runs[k]->final();
    std::string body = "x,rho,m,w\n";
    for (std::size_t i = 0; i < fin.size(); ++i) {
      body += format_number(s.grid.center(static_cast<int>(i))) + "," + format_number(fin.rho[i]) +
              "," + format_number(fin.m[i]) + "," + format_number(fin.w(i)) + "\n";
    }
    io::write_text(dir / ("final_" + eps_tag(k) + ".csv"), body);
  }

  std::vector<io::DecayRecord> rows;
  const double dx = s.grid.dx();
  for (std::size_t k = 1; k < done.size(); ++k) {
    rows.push_back({done[k].epsilon, "l1_gap_rho",
                    l1_distance(done[k].final().rho, done[k - 1].final().rho, dx)});
  }

  const std::vector<EntropyPair> pairs = {make_pair(EntropyProfile::one),
                                          make_pair(EntropyProfile::linear),
                                          make_pair(EntropyProfile::square)};
  std::vector<DiagnosticsReport> reports;
  for (const auto& tr : done) reports.push_back(diagnose(tr, model, pairs, s.window));

  if (!done.empty()) {
    const auto library = test_function_library(s.grid, s.t_end);
    for (auto functional : {WeakFunctional::mass, WeakFunctional::weighted}) {
      const auto decay = weak_residual_decay(done, model, functional, library);
      for (std::size_t k = 0; k < decay.size(); ++k) {
        reports[k].weak_residuals.emplace_back(std::string(to_string(functional)), decay[k].value);
      }
    }
    const auto patches = populated_patches(done, default_patches(s.grid, s.t_end));
    const auto tartar = tartar_table(done, model, patches);
    for (std::size_t k = 0; k < tartar.size(); ++k) reports[k].tartar.push_back(tartar[k]);

    // Measures of the patch where the finest run oscillates most.
    const BinSpec bins = shared_bins(done, 32, 32);
    std::size_t best = 0;
    double best_T = -1.0;
    for (std::size_t p = 0; p < patches.size(); ++p) {
      const auto m = empirical_measure({done.back()}, patches[p], bins);
      const double T = tartar_residual(m.front(), model);
      if (T > best_T) {
        best_T = T;
        best = p;
      }
    }
    const auto measures = empirical_measure(done, patches[best], bins);
    for (std::size_t k = 0; k < measures.size(); ++k) {
      io::write_measure_csv(measures[k], dir / ("measure_" + eps_tag(k) + ".csv"));
    }
  }

  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    io::write_text(dir / ("diagnostics_" + eps_tag(k) + ".json"), r.to_json() + "\n");
    rows.push_back({r.epsilon, "grad_rho_l2", r.grad_rho_l2});
    rows.push_back({r.epsilon, "grad_m_l2", r.grad_m_l2});
    for (const auto& p : r.pairs) {
      rows.push_back({r.epsilon, "D[" + p.pair + "]", p.D});
      rows.push_back({r.epsilon, "w12[" + p.pair + "]", p.w12});
      rows.push_back({r.epsilon, "worst_pairing[" + p.pair + "]", p.worst_pairing});
    }
    rows.push_back({r.epsilon, "tv_W_final", r.tv_W.back()});
    rows.push_back({r.epsilon, "rho_w_integral", r.rho_w_integral});
    for (const auto& [name, v] : r.weak_residuals) rows.push_back({r.epsilon, "weak_" + name, v});
    for (const auto& t : r.tartar) {
      rows.push_back({r.epsilon, "tartar_max", t.max_residual});
      rows.push_back({r.epsilon, "tartar_mean", t.mean_residual});
    }
  }

  if (is_constant(s.w0) && !done.empty()) {
    const double w = evaluate(s.w0, s.grid.x_left);
    std::vector<double> rho0(s.grid.n_cells);
    for (int i = 0; i < s.grid.n_cells; ++i) rho0[i] = evaluate(s.rho0, s.grid.center(i));
    const auto scalar = fv::solve_scalar(scalar_flux(model, w), fv::scalar_source(model, w),
                                         rho0, s.grid, fv_config(s));
    for (const auto& tr : done) {
      rows.push_back({tr.epsilon, "reduction_gap", l1_distance(tr.final().rho, scalar.rho.back(), dx)});
    }
  }
  io::write_decay_csv(rows, dir / "decay.csv");

  auto series = [&](const std::string& functional) {
    io::Series ser{functional, {}, {}};
    for (const auto& r : rows) {
      if (r.functional == functional && r.value > 0.0) {
        ser.x.push_back(r.epsilon);
        ser.y.push_back(r.value);
      }
    }
    return ser;
  };
  std::vector<io::PlotPanel> panels;
  panels.push_back({"L1 gap between consecutive epsilon at t_end", "epsilon",
                    {series("l1_gap_rho"), series("reduction_gap")}, true, true});
  panels.push_back({"entropy dissipation D", "epsilon",
                    {series("D[F=z]"), series("D[F=z^2]")}, true, true});
  panels.push_back({"Tartar residual |T|", "epsilon",
                    {series("tartar_max"), series("tartar_mean")}, true, true});
  io::write_text(dir / "sweep.svg", io::render_svg(panels));

  log << "sweep: " << done.size() << "/" << n << " members finished; bundle in " << dir.string()
      << "\n";
  for (const auto& r : reports) {
    log << "  epsilon=" << format_number(r.epsilon) << " D[F=z^2]=" << format_number(r.pairs[2].D);
    if (!r.tartar.empty()) log << " tartar_max=" << format_number(r.tartar.front().max_residual);
    log << "\n";
  }
  return status;
}

int cmd_plot(const fs::path& index, const Options& opts, std::ostream& log) {
  const Trajectory traj = io::read_trajectory(index);
  const auto params = io::read_model_params(index);
  std::optional<ModelSpec> model;
  if (params) model = build_model(*params);
  const fs::path dir = opts.out ? *opts.out : index.parent_path() / "plots";
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const Field& f = traj.snapshots[k];
    io::Series rho{"rho", {}, {}}, w{"w", {}, {}}, W{"W", {}, {}}, Z{"Z", {}, {}};
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double x = traj.grid.center(static_cast<int>(i));
      rho.x.push_back(x);
      rho.y.push_back(f.rho[i]);
      w.x.push_back(x);
      w.y.push_back(f.w(i));
      if (model) {
        const auto ri = riemann_invariants(*model, f.state(i));
        W.x.push_back(x);
        W.y.push_back(ri.W);
        Z.x.push_back(x);
        Z.y.push_back(ri.Z);
      }
    }
    io::PlotPanel panel{"t = " + format_number(f.t), "x", {rho, w}, false, false};
    if (model) {
      panel.series.push_back(W);
      panel.series.push_back(Z);
    }
    char name[32];
    std::snprintf(name, sizeof name, "plot_%04zu.svg", k);
    io::write_text(dir / name, io::render_svg({panel}));
  }
  log << "plot: " << traj.snapshots.size() << " SVG files in " << dir.string() << "\n";
  if (!model) log << "plot: index has no model parameters; W and Z omitted\n";
  return ok;
}

}  // namespace kk::cli

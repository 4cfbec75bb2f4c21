#include "kk/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kk/error.hpp"

namespace kk {

namespace {

int bin_index(const Axis& a, double v, bool& clamped) {
  if (!(v >= a.lo)) {
    clamped = true;
    return 0;
  }
  if (v >= a.hi) {
    clamped = true;
    return a.count - 1;
  }
  return std::min(a.count - 1, static_cast<int>((v - a.lo) / a.width()));
}

void validate_axis(const Axis& a, const char* name) {
  if (a.count < 8) throw InputError(std::string(name) + " axis needs at least 8 bins");
  if (!(a.hi > a.lo)) throw InputError(std::string(name) + " axis has an empty range");
}

}  // namespace

BinSpec shared_bins(const std::vector<Trajectory>& trajs, int rho_count, int w_count) {
  double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo;
  double wlo = rlo, whi = -rlo;
  for (const auto& tr : trajs) {
    for (const auto& f : tr.snapshots) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        rlo = std::min(rlo, f.rho[i]);
        rhi = std::max(rhi, f.rho[i]);
        const double w = f.w(i);
        wlo = std::min(wlo, w);
        whi = std::max(whi, w);
      }
    }
  }
  if (!std::isfinite(rlo)) throw InputError("shared_bins: no samples");
  auto make = [](double lo, double hi, int count) {
    double span = hi - lo;
    if (span <= 0.0) span = std::max(1e-6, 1e-6 * std::abs(lo));
    const double pad = 0.5 * span / count;
    return Axis{lo - pad, hi + pad, count};
  };
  return {make(rlo, rhi, rho_count), make(wlo, whi, w_count)};
}

std::vector<EmpiricalMeasure> empirical_measure(const std::vector<Trajectory>& trajs,
                                                const PatchWindow& window, const BinSpec& bins) {
  validate_axis(bins.rho, "rho");
  validate_axis(bins.w, "w");
  if (trajs.empty()) return {};
  const Grid& grid = trajs.front().grid;
  for (const auto& tr : trajs) {
    if (!(tr.grid == grid)) throw InputError("empirical_measure: trajectories do not share a grid");
  }
  std::vector<int> cells;
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = grid.center(i);
    if (x >= window.x_lo && x <= window.x_hi) cells.push_back(i);
  }
  if (cells.empty()) throw InputError("empirical_measure: window holds no cells");

  std::vector<EmpiricalMeasure> out;
  for (const auto& tr : trajs) {
    std::vector<std::size_t> snaps;
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
      const double t = tr.snapshots[k].t;
      if (t >= window.t_lo - 1e-12 && t <= window.t_hi + 1e-12) snaps.push_back(k);
    }
    if (snaps.empty()) throw InputError("empirical_measure: window holds no snapshots");
    EmpiricalMeasure m;
    m.bins = bins;
    m.window = window;
    m.weights.assign(static_cast<std::size_t>(bins.rho.count) * bins.w.count, 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      const double wt = snaps.size() == 1 ? 1.0 : ((s == 0 || s + 1 == snaps.size()) ? 0.5 : 1.0);
      const Field& f = tr.snapshots[snaps[s]];
      for (int i : cells) {
        bool clamped = false;
        const int a = bin_index(bins.rho, f.rho[i], clamped);
        const int b = bin_index(bins.w, f.w(i), clamped);
        if (clamped) ++m.clamped;
        m.weights[static_cast<std::size_t>(a) * bins.w.count + b] += wt;
        total += wt;
      }
    }
    for (double& v : m.weights) v /= total;
    out.push_back(std::move(m));
  }
  return out;
}

double moment(const EmpiricalMeasure& measure,
              const std::function<double(double, double)>& observable) {
  double s = 0.0;
  for (int i = 0; i < measure.bins.rho.count; ++i) {
    const double r = measure.bins.rho.center(i);
    for (int j = 0; j < measure.bins.w.count; ++j) {
      const double v = measure.weight(i, j);
      if (v != 0.0) s += v * observable(r, measure.bins.w.center(j));
    }
  }
  return s;
}

double tartar_residual(const EmpiricalMeasure& measure, const ModelSpec& model) {
  const double eta1 = moment(measure, [](double r, double) { return r; });
  const double eta2 = moment(measure, [](double r, double w) { return r * w; });
  const double q1 = moment(measure, [&](double r, double w) { return r * model.phi(r, w); });
  const double q2 = moment(measure, [&](double r, double w) { return r * w * model.phi(r, w); });
  return std::abs(eta1 * q2 - eta2 * q1);
}

CommutationCheck commutation_identity_check(const ModelSpec& model,
                                            const std::vector<State>& samples) {
  CommutationCheck c;
  for (const State& s : samples) {
    const double w = s.w();
    const double phi = model.phi(s.rho, w);
    const double q1 = s.rho * phi;
    const double q2 = s.m * phi;
    c.implemented = std::max(c.implemented, std::abs(s.rho * q2 - s.m * q1));
    const double a1 = q1 + w;
    const double a2 = q2 + w * w;
    c.augmented = std::max(c.augmented, std::abs(s.rho * a2 - s.m * a1));
  }
  return c;
}

std::vector<PatchWindow> default_patches(const Grid& grid, double t_end) {
  std::vector<PatchWindow> out;
  const double L = grid.length();
  for (int it = 0; it < 8; ++it) {
    for (int ix = 0; ix < 16; ++ix) {
      PatchWindow p;
      p.x_lo = grid.x_left + ix * L / 16.0;
      p.x_hi = grid.x_left + (ix + 1) * L / 16.0;
      p.t_lo = t_end * it / 8.0;
      p.t_hi = t_end * (it + 1) / 8.0;
      if (it == 0) p.t_lo = 1e-9 * t_end;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<PatchWindow> populated_patches(const std::vector<Trajectory>& trajs,
                                          const std::vector<PatchWindow>& patches) {
  std::vector<PatchWindow> out;
  for (const auto& p : patches) {
    const bool hit = std::all_of(trajs.begin(), trajs.end(), [&](const Trajectory& tr) {
      return std::any_of(tr.snapshots.begin(), tr.snapshots.end(),
                         [&](const Field& f) { return f.t >= p.t_lo && f.t <= p.t_hi; });
    });
    if (hit) out.push_back(p);
  }
  return out;
}

std::vector<TartarEntry> tartar_table(const std::vector<Trajectory>& trajs, const ModelSpec& model,
                                      const std::vector<PatchWindow>& patches, int bins_per_axis) {
  std::vector<TartarEntry> out;
  if (trajs.empty()) return out;
  const BinSpec bins = shared_bins(trajs, bins_per_axis, bins_per_axis);
  for (const auto& tr : trajs) out.push_back({tr.epsilon, 0.0, 0.0});
  const auto kept = populated_patches(trajs, patches);
  if (kept.empty()) throw InputError("tartar_table: no patch holds a snapshot");
  for (const auto& patch : kept) {
    const auto measures = empirical_measure(trajs, patch, bins);
    for (std::size_t k = 0; k < measures.size(); ++k) {
      const double T = tartar_residual(measures[k], model);
      out[k].max_residual = std::max(out[k].max_residual, T);
      out[k].mean_residual += T;
    }
  }
  for (auto& e : out) e.mean_residual /= static_cast<double>(kept.size());
  return out;
}

}  // namespace kk

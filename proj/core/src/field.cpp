#include "kk/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kk/error.hpp"

namespace kk {

void Grid::validate() const {
  if (n_cells < 8) throw ConfigError("grid needs at least 8 cells");
  if (!(x_right > x_left) || !std::isfinite(x_left) || !std::isfinite(x_right)) {
    throw ConfigError("grid needs x_right > x_left");
  }
}

double Trajectory::snapshot_dt() const {
  if (snapshots.size() < 2) return 0.0;
  return snapshots[1].t - snapshots[0].t;
}

namespace {

struct Evaluator {
  double x;
  double operator()(const ConstantProfile& p) const { return p.value; }
  double operator()(const RiemannProfile& p) const { return x < p.x0 ? p.left : p.right; }
  double operator()(const SineProfile& p) const {
    return p.mean + p.amp * std::sin(2.0 * std::numbers::pi * p.freq * x);
  }
  double operator()(const TableProfile& p) const {
    if (p.x.empty() || p.x.size() != p.value.size()) {
      throw InputError("table profile needs matching, nonempty x and value columns");
    }
    if (x <= p.x.front()) return p.value.front();
    if (x >= p.x.back()) return p.value.back();
    const auto it = std::upper_bound(p.x.begin(), p.x.end(), x);
    const auto i = static_cast<std::size_t>(it - p.x.begin());
    const double t = (x - p.x[i - 1]) / (p.x[i] - p.x[i - 1]);
    return p.value[i - 1] + t * (p.value[i] - p.value[i - 1]);
  }
};

}  // namespace

double evaluate(const Profile& p, double x) { return std::visit(Evaluator{x}, p); }

bool is_constant(const Profile& p) {
  if (std::holds_alternative<ConstantProfile>(p)) return true;
  if (const auto* r = std::get_if<RiemannProfile>(&p)) return r->left == r->right;
  if (const auto* s = std::get_if<SineProfile>(&p)) return s->amp == 0.0;
  const auto& t = std::get<TableProfile>(p);
  return std::all_of(t.value.begin(), t.value.end(),
                     [&](double v) { return !t.value.empty() && v == t.value.front(); });
}

}  // namespace kk

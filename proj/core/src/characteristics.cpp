#include "kk/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kk/error.hpp"
#include "numerics.hpp"

namespace kk {

namespace {

struct VelocityGradient {
  double phi, d_rho, d_m;
};

VelocityGradient velocity_gradient(const ModelSpec& model, State s) {
  const double w = s.w();
  const double dphi = model.profile.d1(w);
  return {model.phi(s.rho, w), -dphi * w / s.rho - model.pressure.d1(s.rho), dphi / s.rho};
}

/// First component 1 when possible, otherwise unit length with y > 0.
Vec2 normalise(Vec2 v) {
  const double n = v.norm();
  if (n == 0.0) return v;
  if (std::abs(v.x) > 1e-12 * n) return {1.0, v.y / v.x};
  return {0.0, std::abs(v.y) / n};
}

void validate(State s) {
  if (!(s.rho > 0.0) || !std::isfinite(s.rho) || !std::isfinite(s.m)) {
    throw InputError("invalid state: rho must be positive and finite");
  }
}

}  // namespace

Mat2 jacobian(const ModelSpec& model, State s) {
  validate(s);
  const auto g = velocity_gradient(model, s);
  return {g.phi + s.rho * g.d_rho, s.rho * g.d_m,
          s.m * g.d_rho, g.phi + s.m * g.d_m};
}

EigenStructure eigenstructure(const ModelSpec& model, State s) {
  validate(s);
  const auto g = velocity_gradient(model, s);
  EigenStructure e;
  e.jac = jacobian(model, s);
  e.lambda1 = g.phi;
  e.lambda2 = g.phi - s.rho * model.pressure.d1(s.rho);
  e.r2 = {1.0, s.w()};

  const double scale = std::abs(g.d_rho) + std::abs(g.d_m);
  if (std::abs(g.d_m) >= 1e-12) {
    e.r1 = {1.0, -g.d_rho / g.d_m};
  } else {
    // Kernel of dF - lambda1 I from its dominant row.
    const Mat2 a{e.jac.a11 - e.lambda1, e.jac.a12, e.jac.a21, e.jac.a22 - e.lambda1};
    const Vec2 row1{a.a11, a.a12};
    const Vec2 row2{a.a21, a.a22};
    const Vec2 row = row1.norm() >= row2.norm() ? row1 : row2;
    if (row.norm() <= 1e-14 * (1.0 + e.jac.norm())) {
      // dF = phi I: every direction is an eigenvector.
      e.r1 = {1.0, 0.0};
    } else {
      e.r1 = normalise({row.y, -row.x});
    }
  }
  // Defective when the two speeds coincide but dF is not a multiple of I.
  const double gap = std::abs(e.lambda2 - e.lambda1);
  if (gap <= 1e-14 * (1.0 + std::abs(e.lambda1)) && scale > 0.0 &&
      std::abs(e.jac.a12) + std::abs(e.jac.a21) + std::abs(e.jac.a11 - e.jac.a22) > 1e-14) {
    e.degenerate = true;
  }
  return e;
}

RiemannInvariants riemann_invariants(const ModelSpec& model, State s) {
  validate(s);
  const double w = s.w();
  return {model.phi(s.rho, w), w};
}

FieldDerivatives characteristic_fields(const ModelSpec& model, State s) {
  const auto e = eigenstructure(model, s);
  // Fourth-order central stencil; the step is a fixed fraction of rho in the
  // direction of r, so relative truncation error is uniform across states.
  auto along = [&](Vec2 r, auto speed) {
    const double t = 1e-3 * s.rho / r.norm();
    auto at = [&](double k) { return speed(eigenstructure(model, s + r * (k * t))); };
    return (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * t);
  };
  FieldDerivatives out;
  out.dl1_r1 = along(e.r1, [](const EigenStructure& x) { return x.lambda1; });
  out.dl2_r2 = along(e.r2, [](const EigenStructure& x) { return x.lambda2; });
  return out;
}

RegionMargins region_check(const ModelSpec& model, const RegionSpec& region, State s) {
  const auto ri = riemann_invariants(model, s);
  RegionMargins out;
  out.g1 = region.c1_low - ri.W;
  out.g2 = ri.Z - region.c2_high;
  out.inside = out.g1 <= kRegionSlack && out.g2 <= kRegionSlack;
  return out;
}

DensityBounds region_density_bounds(const ModelSpec& model, const RegionSpec& region) {
  const auto& wd = model.w_domain;
  const auto& rd = model.rho_domain;
  if (region.c2_high < wd.lo) {
    throw EmptyRegionError("Z <= C2 excludes the whole w domain");
  }
  // Phi is convex, so its supremum over [w_lo, C2] sits at an endpoint.
  const double w_top = std::min(region.c2_high, wd.hi);
  const double bound =
      std::max(model.profile.value(wd.lo), model.profile.value(w_top)) - region.c1_low;

  const auto& P = model.pressure;
  const double p_lo = P.value(rd.lo);
  const double p_hi = P.value(rd.hi);
  bool decreasing = true;
  bool increasing = true;
  for (int i = 0; i <= 64; ++i) {
    const double r = rd.lo * std::pow(rd.hi / rd.lo, i / 64.0);
    const double d = P.d1(r);
    decreasing = decreasing && d <= 0.0;
    increasing = increasing && d >= 0.0;
  }
  if (!decreasing && !increasing) {
    throw ConfigError("pressure is not monotone on rho_domain");
  }
  const double inf_p = std::min(p_lo, p_hi);
  if (bound < inf_p) {
    throw EmptyRegionError("Phi(C2) - C1 lies below inf P on rho_domain");
  }

  // Bisection in log rho for P(rho) = bound.
  auto invert = [&](double a, double b) {
    double la = std::log(a), lb = std::log(b);
    const bool a_above = P.value(a) > bound;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (la + lb);
      if (mid == la || mid == lb) break;
      if ((P.value(std::exp(mid)) > bound) == a_above) la = mid; else lb = mid;
    }
    return std::exp(0.5 * (la + lb));
  };

  DensityBounds out;
  if (decreasing) {
    if (p_lo > bound) out.low = invert(rd.lo, rd.hi);
  } else {
    if (p_hi > bound) out.high = invert(rd.lo, rd.hi);
  }
  return out;
}

QuasiconvexityResult quasiconvexity_check(const ModelSpec& model, RegionFunction which,
                                          State s) {
  validate(s);
  auto G = [&](double rho, double m) {
    if (which == RegionFunction::g1) return -(model.profile.value(m / rho) - model.pressure.value(rho));
    return m / rho;
  };
  const double hr = detail::fd_step(s.rho);
  const double hm = detail::fd_step(std::max(std::abs(s.m), s.rho));
  const Vec2 grad{(G(s.rho + hr, s.m) - G(s.rho - hr, s.m)) / (2 * hr),
                  (G(s.rho, s.m + hm) - G(s.rho, s.m - hm)) / (2 * hm)};
  QuasiconvexityResult out;
  if (grad.norm() <= 1e-12) {
    out.degenerate = true;
    return out;
  }
  const Vec2 r = std::abs(grad.y) > 1e-12 * grad.norm() ? Vec2{1.0, -grad.x / grad.y}
                                                       : Vec2{0.0, 1.0};
  const double t = 1e-4 * s.rho / std::max(1.0, std::abs(r.y) / std::max(s.rho, 1.0));
  const State p = s + r * t;
  const State q = s - r * t;
  out.value = (G(p.rho, p.m) - 2.0 * G(s.rho, s.m) + G(q.rho, q.m)) / (t * t);
  return out;
}

}  // namespace kk

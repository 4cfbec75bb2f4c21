#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "kk/model.hpp"
#include "kk/state.hpp"

namespace kk::test {

/// Frozen values from tests/oracles/derive_expected.py (sympy).
namespace oracle {
inline constexpr double gc_dF[4] = {-0.5, 1.0, -3.0, 3.0};
inline constexpr double chaplygin_dF[4] = {0.0, 1.0, -2.0, 3.0};
inline constexpr double convex_dF[4] = {-2.5, 2.0, -7.0, 5.0};
inline constexpr double gc_lambda2 = 1.5;
inline constexpr double chaplygin_lambda2 = 2.0;
inline constexpr double gc_dl2_r2 = 0.25;
inline constexpr double gc_h2 = 0.25;
inline constexpr double gc_G1_hess_12 = -0.25;
inline constexpr double gc_G1_hess_21 = -0.044194173824159220;
inline constexpr double gc_G1_hess_half = -1.4142135623730950;
inline constexpr double convex_G1_hess_12 = -0.3125;
inline constexpr double convex_G1_hess_21 = -0.16919417382415922;
inline constexpr double convex_G1_hess_half = -9.4142135623730950;
inline constexpr double gc_square_eta = 4.0;
inline constexpr double gc_square_q = 4.0;
inline constexpr double gc_square_hess_01 = 2.0;
inline constexpr double gc_region_rho_low = 1.0 / 9.0;
inline constexpr double chaplygin_region_rho_low = 0.5;
inline constexpr double gc_weighted_pressure_1 = -0.33332279240779944;
inline constexpr double gc_weighted_pressure_2 = -0.94279850065652947;
}  // namespace oracle

/// Fourth-order central difference of a vector field F(rho, m).
inline Mat2 fd_jacobian(const std::function<Vec2(State)>& F, State s) {
  auto column = [&](Vec2 dir, double h) {
    const Vec2 a = F(s + dir * (2 * h)), b = F(s + dir * h), c = F(s - dir * h),
               d = F(s - dir * (2 * h));
    return (b - c) * (8.0 / (12.0 * h)) - (a - d) * (1.0 / (12.0 * h));
  };
  // Steps relative to the density keep the truncation error uniform in rho.
  const double hr = 2e-3 * s.rho;
  const double hm = 2e-3 * std::max(std::abs(s.m), s.rho);
  const Vec2 c0 = column({1, 0}, hr), c1 = column({0, 1}, hm);
  return {c0.x, c1.x, c0.y, c1.y};
}

inline Vec2 flux(const ModelSpec& model, State s) {
  const double phi = model.phi(s.rho, s.w());
  return {s.rho * phi, s.m * phi};
}

/// Fourth-order second directional derivative of a scalar function.
inline double fd_quadratic(const std::function<double(State)>& f, State s, Vec2 X, double h) {
  const double a = f(s + X * (2 * h)), b = f(s + X * h), c = f(s), d = f(s - X * h),
               e = f(s - X * (2 * h));
  return (-a + 16.0 * b - 30.0 * c + 16.0 * d - e) / (12.0 * h * h);
}

/// Deterministic states with rho log-uniform in [rho_lo, rho_hi], w uniform.
inline std::vector<State> random_states(std::size_t n, unsigned seed, double rho_lo = 0.2,
                                        double rho_hi = 5.0, double w_lo = -2.0,
                                        double w_hi = 2.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> lr(std::log(rho_lo), std::log(rho_hi));
  std::uniform_real_distribution<double> uw(w_lo, w_hi);
  std::vector<State> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(State::from_rho_w(std::exp(lr(gen)), uw(gen)));
  return out;
}

}  // namespace kk::test

#pragma once

#include <cmath>

namespace kk {

/// Conservative state (density, momentum) of the symmetric system; the
/// velocity ratio w = m / rho is derived.
struct State {
  double rho = 1.0;
  double m = 0.0;

  double w() const { return m / rho; }
  static State from_rho_w(double rho, double w) { return {rho, rho * w}; }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

/// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  /// Frobenius norm.
  double norm() const { return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22); }
};

/// Row vector times matrix, v^T A.
inline Vec2 left_multiply(Vec2 v, const Mat2& a) {
  return {v.x * a.a11 + v.y * a.a21, v.x * a.a12 + v.y * a.a22};
}

inline State operator+(State s, Vec2 d) { return {s.rho + d.x, s.m + d.y}; }
inline State operator-(State s, Vec2 d) { return {s.rho - d.x, s.m - d.y}; }

}  // namespace kk

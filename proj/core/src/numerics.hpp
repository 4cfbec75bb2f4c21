#pragma once

#include <algorithm>
#include <cmath>

namespace kk::detail {

/// Step for a central first difference at x.
inline double fd_step(double x, double rel = 1e-5) { return rel * std::max(std::abs(x), 1e-3); }

template <class F>
double central_diff(const F& fn, double x, double h) {
  return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

template <class F>
double second_diff(const F& fn, double x, double h) {
  return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h);
}

/// Radical inverse in the given base (Halton sequence).
inline double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base;
  double scale = inv;
  double value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv;
  }
  return value;
}

}  // namespace kk::detail

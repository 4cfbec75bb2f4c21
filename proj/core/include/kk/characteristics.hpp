#pragma once

#include <optional>

#include "kk/model.hpp"
#include "kk/state.hpp"

namespace kk {

struct EigenStructure {
  double lambda1 = 0.0;  // contact speed, equal to phi
  double lambda2 = 0.0;  // phi - rho P'(rho)
  Vec2 r1;
  Vec2 r2;
  Mat2 jac;
  /// No well-defined eigenvector for the first field (defective or scalar dF).
  bool degenerate = false;
};

struct RiemannInvariants {
  double W = 0.0;  // Phi(m/rho) - P(rho)
  double Z = 0.0;  // m/rho
};

struct FieldDerivatives {
  double dl1_r1 = 0.0;
  double dl2_r2 = 0.0;
};

/// Invariant region {W >= c1_low, Z <= c2_high}.
struct RegionSpec {
  double c1_low = 0.0;
  double c2_high = 0.0;
};

struct RegionMargins {
  double g1 = 0.0;  // c1_low - W
  double g2 = 0.0;  // Z - c2_high
  bool inside = false;
};

/// Density interval implied by the region; an empty optional is an unbounded
/// side (within the model domain).
struct DensityBounds {
  std::optional<double> low;
  std::optional<double> high;
};

enum class RegionFunction { g1, g2 };

struct QuasiconvexityResult {
  double value = 0.0;
  bool degenerate = false;
};

/// Absolute slack applied to every "<= 0" region and source inequality.
inline constexpr double kRegionSlack = 1e-10;

/// Analytic dF of the symmetric flux F(rho, m) = (rho phi, m phi).
Mat2 jacobian(const ModelSpec& model, State s);

EigenStructure eigenstructure(const ModelSpec& model, State s);

RiemannInvariants riemann_invariants(const ModelSpec& model, State s);

/// grad(lambda_i) . r_i by central differences along the eigenvectors.
FieldDerivatives characteristic_fields(const ModelSpec& model, State s);

RegionMargins region_check(const ModelSpec& model, const RegionSpec& region, State s);

/// Throws EmptyRegionError when the region contains no admissible density.
DensityBounds region_density_bounds(const ModelSpec& model, const RegionSpec& region);

/// Restricted Hessian of G1 = C1 - W or G2 = Z - C2 along the tangent r with
/// r . grad G = 0, r normalised to unit first component. Everything is taken by
/// finite differences of the scalar G.
QuasiconvexityResult quasiconvexity_check(const ModelSpec& model, RegionFunction which,
                                          State s);

}  // namespace kk

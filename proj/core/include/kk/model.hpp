#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kk {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// A scalar function with its first two derivatives.
struct SmoothFn {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

using SourceFn = std::function<double(double rho, double w)>;

enum class SourceKind {
  none,
  exit,           // f = -k rho
  entry,          // f = +k rho
  remark,         // f = rho, g = rho w
  remark_damped,  // f = -rho, g = -rho w
  custom,
};

struct SourceSpec {
  SourceKind kind = SourceKind::none;
  double k = 0.0;
};

std::string_view to_string(SourceKind kind);
SourceKind source_kind_from_string(std::string_view name);

/// The pluggable model of the balance system
///
///   rho_t + (rho phi)_x = f(rho, w),   (rho w)_t + (rho w phi)_x = g(rho, w),
///
/// with phi(rho, w) = profile(w) - pressure(rho). Immutable once built; every
/// member function is pure.
struct ModelSpec {
  std::string name;
  SmoothFn profile;   // convex function of w
  SmoothFn pressure;  // function of rho > 0
  SourceFn density_source;   // f(rho, w)
  SourceFn momentum_source;  // g(rho, w)
  Interval rho_domain{1e-3, 1e3};
  Interval w_domain{-10.0, 10.0};
  SourceSpec source;
  /// Set when f = c rho and g = c rho w; sources are then integrated exactly.
  std::optional<double> linear_rate;

  double phi(double rho, double w) const { return profile.value(w) - pressure.value(rho); }
  double f(double rho, double w) const { return density_source(rho, w); }
  double g(double rho, double w) const { return momentum_source(rho, w); }
};

/// Velocity Phi(w) - P(rho); rejects coordinates outside the model domains.
double velocity(const ModelSpec& model, double rho, double w);

/// Attaches one of the preset sources. g is always w f.
ModelSpec with_source(ModelSpec model, SourceSpec source);

/// Phi(w) = w, P(rho) = B / rho^alpha.
ModelSpec make_gc(double B, double alpha, SourceSpec source = {});
/// Phi(w) = w, P(rho) = 1 / rho. Both fields linearly degenerate.
ModelSpec make_chaplygin(SourceSpec source = {});
/// Phi(w) = w^2 / 2, P(rho) = B / rho^alpha.
ModelSpec make_convex(double B, double alpha, SourceSpec source = {});

/// Every compiled-in family crossed with the {none, exit(k), entry(k)} presets.
std::vector<ModelSpec> builtin_models(double k = 0.1);

// Scalar reduction at frozen w.

struct ScalarFlux {
  std::function<double(double)> h;
  std::function<double(double)> dh;
  std::function<double(double)> d2h;
  /// Wave-speed bound used by the scalar Rusanov scheme.
  std::function<double(double)> max_speed;
};

/// h(rho) = Phi(w) rho - rho P(rho), h'' = -(2P' + rho P'').
///
/// The speed bound is max(|h'|, |h / rho|): the system's bound
/// max(|lambda1|, |lambda2|) restricted to constant w, so the system scheme and
/// the scalar scheme coincide when w is frozen.
ScalarFlux scalar_flux(const ModelSpec& model, double w);

// Condition audit.

enum class Verdict { pass, fail, not_applicable };
std::string_view to_string(Verdict v);

struct ConditionResult {
  std::string condition;
  Verdict verdict = Verdict::not_applicable;
  double witness_rho = 0.0;
  double witness_w = 0.0;
  double residual = 0.0;
  /// Counts toward the audit exit status.
  bool required = false;
  std::string note;
};

struct ConditionReport {
  std::string model;
  std::vector<ConditionResult> results;

  const ConditionResult& at(std::string_view condition) const;
  /// True when no required condition failed.
  bool required_pass() const;
  std::string to_json() const;
};

struct SamplingPlan {
  std::size_t n_points = 1024;
  /// Samples rho log-uniformly when the domain spans more than a decade.
  bool log_rho = true;
};

/// Deterministic Halton points covering rho_domain x w_domain.
std::vector<std::pair<double, double>> sample_points(const ModelSpec& model,
                                                     const SamplingPlan& plan);

/// Audits the structural conditions on the model. `dissipation_threshold` is
/// the constant beyond which s f(s) <= 0 must hold.
ConditionReport audit_conditions(const ModelSpec& model, const SamplingPlan& plan,
                                 double dissipation_threshold);

}  // namespace kk

#include "kk/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "kk/characteristics.hpp"
#include "kk/error.hpp"
#include "numerics.hpp"

namespace kk {

namespace {

SmoothFn identity_profile() {
  return {[](double w) { return w; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

SmoothFn quadratic_profile() {
  return {[](double w) { return 0.5 * w * w; }, [](double w) { return w; },
          [](double) { return 1.0; }};
}

/// B / rho^alpha
SmoothFn power_pressure(double B, double alpha) {
  return {[=](double r) { return B * std::pow(r, -alpha); },
          [=](double r) { return -alpha * B * std::pow(r, -alpha - 1.0); },
          [=](double r) { return alpha * (alpha + 1.0) * B * std::pow(r, -alpha - 2.0); }};
}

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::none: return "none";
    case SourceKind::exit: return "exit";
    case SourceKind::entry: return "entry";
    case SourceKind::remark: return "remark";
    case SourceKind::remark_damped: return "remark_damped";
    case SourceKind::custom: return "custom";
  }
  return "custom";
}

SourceKind source_kind_from_string(std::string_view name) {
  for (auto k : {SourceKind::none, SourceKind::exit, SourceKind::entry, SourceKind::remark,
                 SourceKind::remark_damped}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown source kind '" + std::string(name) + "'");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "na";
  }
  return "na";
}

double velocity(const ModelSpec& model, double rho, double w) {
  if (!model.rho_domain.contains(rho)) {
    throw InputError("rho=" + format_number(rho) + " outside rho_domain [" +
                     format_number(model.rho_domain.lo) + ", " +
                     format_number(model.rho_domain.hi) + "]");
  }
  if (!model.w_domain.contains(w)) {
    throw InputError("w=" + format_number(w) + " outside w_domain [" +
                     format_number(model.w_domain.lo) + ", " +
                     format_number(model.w_domain.hi) + "]");
  }
  return model.profile.value(w) - model.pressure.value(rho);
}

ModelSpec with_source(ModelSpec model, SourceSpec source) {
  double rate = 0.0;
  switch (source.kind) {
    case SourceKind::none: rate = 0.0; break;
    case SourceKind::exit: rate = -source.k; break;
    case SourceKind::entry: rate = source.k; break;
    case SourceKind::remark: rate = 1.0; break;
    case SourceKind::remark_damped: rate = -1.0; break;
    case SourceKind::custom:
      throw InputError("custom sources are attached by assigning the source functions");
  }
  if (source.kind == SourceKind::exit || source.kind == SourceKind::entry) {
    if (!(source.k >= 0.0) || !std::isfinite(source.k)) {
      throw InputError("source rate k must be finite and nonnegative");
    }
  }
  model.density_source = [rate](double rho, double) { return rate * rho; };
  model.momentum_source = [rate](double rho, double w) { return rate * rho * w; };
  model.source = source;
  model.linear_rate = rate;
  return model;
}

ModelSpec make_gc(double B, double alpha, SourceSpec source) {
  if (!(B > 0.0) || !(alpha > 0.0)) throw InputError("gc model needs B > 0 and alpha > 0");
  ModelSpec m;
  m.name = "gc";
  m.profile = identity_profile();
  m.pressure = power_pressure(B, alpha);
  return with_source(std::move(m), source);
}

ModelSpec make_chaplygin(SourceSpec source) {
  ModelSpec m;
  m.name = "chaplygin";
  m.profile = identity_profile();
  m.pressure = power_pressure(1.0, 1.0);
  return with_source(std::move(m), source);
}

ModelSpec make_convex(double B, double alpha, SourceSpec source) {
  if (!(B > 0.0) || !(alpha > 0.0)) throw InputError("convex model needs B > 0 and alpha > 0");
  ModelSpec m;
  m.name = "convex";
  m.profile = quadratic_profile();
  m.pressure = power_pressure(B, alpha);
  return with_source(std::move(m), source);
}

std::vector<ModelSpec> builtin_models(double k) {
  std::vector<ModelSpec> out;
  const SourceSpec presets[] = {{SourceKind::none, 0.0},
                                {SourceKind::exit, k},
                                {SourceKind::entry, k}};
  for (const auto& src : presets) {
    out.push_back(make_gc(1.0, 0.5, src));
    out.push_back(make_chaplygin(src));
    out.push_back(make_convex(1.0, 0.5, src));
  }
  return out;
}

ScalarFlux scalar_flux(const ModelSpec& model, double w) {
  if (!model.w_domain.contains(w)) {
    throw InputError("w=" + format_number(w) + " outside w_domain");
  }
  const double a = model.profile.value(w);
  const SmoothFn p = model.pressure;
  ScalarFlux s;
  s.h = [a, p](double r) { return a * r - r * p.value(r); };
  s.dh = [a, p](double r) { return a - p.value(r) - r * p.d1(r); };
  s.d2h = [p](double r) { return -(2.0 * p.d1(r) + r * p.d2(r)); };
  s.max_speed = [a, p](double r) {
    const double contact = a - p.value(r);
    return std::max(std::abs(contact), std::abs(contact - r * p.d1(r)));
  };
  return s;
}

const ConditionResult& ConditionReport::at(std::string_view condition) const {
  for (const auto& r : results) {
    if (r.condition == condition) return r;
  }
  throw InputError("no condition named '" + std::string(condition) + "' in report");
}

bool ConditionReport::required_pass() const {
  return std::none_of(results.begin(), results.end(), [](const ConditionResult& r) {
    return r.required && r.verdict == Verdict::fail;
  });
}

std::string ConditionReport::to_json() const {
  nlohmann::json j;
  j["model"] = model;
  j["required_pass"] = required_pass();
  j["conditions"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json c;
    c["condition"] = r.condition;
    c["verdict"] = std::string(to_string(r.verdict));
    c["witness"] = {r.witness_rho, r.witness_w};
    c["residual"] = r.residual;
    c["required"] = r.required;
    if (!r.note.empty()) c["note"] = r.note;
    j["conditions"].push_back(std::move(c));
  }
  return j.dump(2);
}

std::vector<std::pair<double, double>> sample_points(const ModelSpec& model,
                                                     const SamplingPlan& plan) {
  if (plan.n_points == 0) throw ConfigError("sampling plan is empty");
  const auto& rd = model.rho_domain;
  const auto& wd = model.w_domain;
  const bool use_log = plan.log_rho && rd.lo > 0.0 && rd.hi / rd.lo > 10.0;
  std::vector<std::pair<double, double>> pts;
  pts.reserve(plan.n_points);
  for (std::size_t i = 1; i <= plan.n_points; ++i) {
    const double u = detail::radical_inverse(i, 2);
    const double v = detail::radical_inverse(i, 3);
    const double rho = use_log ? std::exp(std::log(rd.lo) + u * (std::log(rd.hi) - std::log(rd.lo)))
                               : rd.lo + u * (rd.hi - rd.lo);
    pts.emplace_back(rho, wd.lo + v * (wd.hi - wd.lo));
  }
  return pts;
}

namespace {

/// Tracks the sample with the largest value of some residual.
struct Worst {
  double value = -std::numeric_limits<double>::infinity();
  double rho = 0.0;
  double w = 0.0;
  void offer(double v, double r, double ww) {
    if (v > value) {
      value = v;
      rho = r;
      w = ww;
    }
  }
};

ConditionResult make_result(std::string name, bool ok, const Worst& worst, bool required,
                            std::string note = {}) {
  ConditionResult r;
  r.condition = std::move(name);
  r.verdict = ok ? Verdict::pass : Verdict::fail;
  r.witness_rho = worst.rho;
  r.witness_w = worst.w;
  r.residual = worst.value;
  r.required = required;
  r.note = std::move(note);
  return r;
}

double clamp_to(const Interval& d, double x) { return std::clamp(x, d.lo, d.hi); }

double relative_gap(double analytic, double numeric, double scale) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), scale});
}

}  // namespace

ConditionReport audit_conditions(const ModelSpec& model, const SamplingPlan& plan,
                                 double dissipation_threshold) {
  const auto pts = sample_points(model, plan);
  const auto& P = model.pressure;
  const auto& Phi = model.profile;
  const double w_ref = clamp_to(model.w_domain, 0.0);

  ConditionReport report;
  report.model = model.name;

  // C1: coupling of the two sources.
  {
    Worst self, literal;
    for (auto [rho, w] : pts) {
      const double f = model.f(rho, w);
      const double g = model.g(rho, w);
      self.offer(std::abs(g - w * f) / (1.0 + std::abs(w * f)), rho, w);
      literal.offer(std::abs(w * g - f) / (1.0 + std::abs(f)), rho, w);
    }
    report.results.push_back(make_result("C1_source_coupling", self.value <= 1e-12, self, true,
                                         "g = w f"));
    report.results.push_back(make_result("C1_literal_coupling", literal.value <= 1e-12, literal,
                                         false, "w g = f as printed; informational"));
  }
  {
    Worst origin;
    origin.offer(std::max(std::abs(model.f(0.0, 0.0)), std::abs(model.g(0.0, 0.0))), 0.0, 0.0);
    report.results.push_back(make_result("C1_zero_at_origin", origin.value <= 1e-14, origin, true,
                                         "f, g evaluated at the closure point (0, 0)"));
  }

  // C2: s f(s) <= 0 beyond the threshold.
  {
    Worst diss;
    for (auto [rho, w] : pts) {
      if (std::abs(rho) > dissipation_threshold) diss.offer(rho * model.f(rho, w), rho, w);
    }
    ConditionResult r;
    if (diss.value == -std::numeric_limits<double>::infinity()) {
      r.condition = "C2_dissipative";
      r.verdict = Verdict::not_applicable;
      r.required = true;
      r.witness_rho = model.rho_domain.hi;
      r.witness_w = w_ref;
      r.note = "no sample with |rho| > M";
    } else {
      r = make_result("C2_dissipative", diss.value <= kRegionSlack, diss, true);
    }
    r.note += (r.note.empty() ? "" : "; ") + std::string("M = ") + format_number(dissipation_threshold);
    report.results.push_back(std::move(r));
  }

  // C3 sub-conditions, each reported on its own.
  const double rlo = model.rho_domain.lo;
  const double rhi = model.rho_domain.hi;
  double p_scale = 0.0;
  for (auto [rho, w] : pts) p_scale = std::max(p_scale, std::abs(P.value(rho)));
  {
    const double p0 = P.value(rlo);
    const double p1 = P.value(10.0 * rlo);
    Worst wst;
    wst.offer(p0, rlo, w_ref);
    const bool ok = std::abs(p0) <= std::abs(p1) && std::abs(p0) <= 1e-3 * (1.0 + p_scale);
    report.results.push_back(make_result("C3_P_at_zero", ok, wst, false,
                                         "P(rho_min) must approach 0 as rho -> 0"));
  }
  {
    const double v0 = rlo * P.d1(rlo);
    const double v1 = 10.0 * rlo * P.d1(10.0 * rlo);
    Worst wst;
    wst.offer(v0, rlo, w_ref);
    const bool ok = std::abs(v0) <= std::abs(v1) && std::abs(v0) <= 1e-3 * (1.0 + p_scale);
    report.results.push_back(make_result("C3_rhoP_prime_limit", ok, wst, false,
                                         "rho P'(rho) must approach 0 as rho -> 0"));
  }
  {
    const double a = P.value(rhi);
    const double b = P.value(rhi / 10.0);
    const double c = P.value(rhi / 100.0);
    Worst wst;
    wst.offer(a, rhi, w_ref);
    const bool ok = a > b && b > c && a > 1.0 + c;
    report.results.push_back(make_result("C3_P_at_infinity", ok, wst, false,
                                         "P must grow without bound over the last decades"));
  }
  {
    // 2P' + rho P'', normalised by 2|P'| + rho|P''| so the sign test is scale free.
    Worst hi;
    double lo = std::numeric_limits<double>::infinity();
    for (auto [rho, w] : pts) {
      const double d1 = P.d1(rho);
      const double d2 = P.d2(rho);
      const double scale = 2.0 * std::abs(d1) + rho * std::abs(d2);
      const double v = scale > 0.0 ? (2.0 * d1 + rho * d2) / scale : 0.0;
      hi.offer(v, rho, w);
      lo = std::min(lo, v);
    }
    std::string sign;
    if (hi.value < -1e-12) sign = "negative";
    else if (lo > 1e-12) sign = "positive";
    else if (std::max(std::abs(hi.value), std::abs(lo)) <= 1e-12) sign = "zero";
    else sign = "mixed";
    report.results.push_back(make_result("C3_genuine_nonlinearity_sign", sign == "negative", hi,
                                         false, "sign=" + sign +
                                             "; residual is max (2P'+rho P'')/(2|P'|+rho|P''|)"));
    // h'' = -(2P' + rho P'') > 0 is the same inequality seen from the scalar flux.
    Worst conv;
    conv.offer(-hi.value, hi.rho, hi.w);
    report.results.push_back(make_result("scalar_convexity", -hi.value > 1e-12, conv, false,
                                         "residual is min normalised h''"));
  }

  // Source compatibility with the region functions: grad G . (f, g) <= 0, with
  // grad G taken by central differences of G itself.
  {
    auto W = [&](double rho, double m) { return Phi.value(m / rho) - P.value(rho); };
    Worst g1w, g2w;
    bool g1_ok = true, g2_ok = true;
    for (auto [rho, w] : pts) {
      const double m = rho * w;
      const double hr = detail::fd_step(rho);
      const double hm = detail::fd_step(std::max(std::abs(m), rho));
      const Vec2 grad_g1{-(W(rho + hr, m) - W(rho - hr, m)) / (2 * hr),
                         -(W(rho, m + hm) - W(rho, m - hm)) / (2 * hm)};
      const Vec2 grad_g2{((m / (rho + hr)) - (m / (rho - hr))) / (2 * hr),
                         (((m + hm) / rho) - ((m - hm) / rho)) / (2 * hm)};
      const Vec2 H{model.f(rho, w), model.g(rho, w)};
      const double v1 = grad_g1.dot(H);
      const double v2 = grad_g2.dot(H);
      const double tol1 = kRegionSlack + 1e-6 * grad_g1.norm() * H.norm();
      const double tol2 = kRegionSlack + 1e-6 * grad_g2.norm() * H.norm();
      g1_ok = g1_ok && v1 <= tol1;
      g2_ok = g2_ok && v2 <= tol2;
      g1w.offer(v1, rho, w);
      g2w.offer(v2, rho, w);
    }
    report.results.push_back(make_result("source_region_compatibility_G1", g1_ok, g1w, false,
                                         "grad G1 . H <= 0"));
    report.results.push_back(make_result("source_region_compatibility_G2", g2_ok, g2w, false,
                                         "grad G2 . H <= 0"));
  }

  // Supplied derivatives against central differences.
  {
    Worst d;
    for (auto [rho, w] : pts) {
      const double hp = detail::fd_step(rho);
      const double hp2 = 1e-4 * rho;
      const double pscale = std::abs(P.value(rho)) / rho;
      d.offer(relative_gap(P.d1(rho), detail::central_diff(P.value, rho, hp), pscale), rho, w);
      d.offer(relative_gap(P.d2(rho), detail::second_diff(P.value, rho, hp2), pscale / rho), rho,
              w);
      const double hw = detail::fd_step(w);
      const double hw2 = 1e-4 * std::max(std::abs(w), 1.0);
      const double fscale = 1.0 + std::abs(Phi.value(w));
      d.offer(relative_gap(Phi.d1(w), detail::central_diff(Phi.value, w, hw), fscale), rho, w);
      d.offer(relative_gap(Phi.d2(w), detail::second_diff(Phi.value, w, hw2), fscale), rho, w);
    }
    bool convex = true;
    Worst cv;
    for (auto [rho, w] : pts) {
      const double v = -Phi.d2(w);
      cv.offer(v, rho, w);
      convex = convex && v <= 0.0;
    }
    report.results.push_back(make_result("derivative_consistency", d.value <= 1e-6, d, false,
                                         "max relative gap to central differences"));
    report.results.push_back(make_result("profile_convexity", convex, cv, false,
                                         "residual is max -Phi''"));
  }
  return report;
}

}  // namespace kk

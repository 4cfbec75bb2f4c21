#include <algorithm>
#include <cmath>
#include <functional>

#include "doctest.h"
#include "kk/compactness.hpp"
#include "kk/error.hpp"
#include "kk/young.hpp"
#include "support.hpp"

using namespace kk;

namespace {

/// K+1 identical snapshots of the given (rho, w) profile.
Trajectory frozen(const Grid& g, const std::function<double(double)>& rho,
                  const std::function<double(double)>& w, int K = 10, double t_end = 1.0,
                  double eps = 0.0) {
  Trajectory tr;
  tr.grid = g;
  tr.epsilon = eps;
  for (int k = 0; k <= K; ++k) {
    Field f;
    f.t = t_end * k / K;
    for (int i = 0; i < g.n_cells; ++i) {
      const double x = g.center(i);
      f.rho.push_back(rho(x));
      f.m.push_back(rho(x) * w(x));
    }
    tr.snapshots.push_back(f);
  }
  return tr;
}

auto constant(double v) {
  return [v](double) { return v; };
}

}  // namespace

TEST_SUITE("compactness") {
  TEST_CASE("weighted flux against the quadrature oracle") {
    const auto gc = make_gc(1.0, 0.5);
    CHECK(weighted_flux(gc, 1.0, 2.0) ==
          doctest::Approx(test::oracle::gc_weighted_pressure_1 + 1.0).epsilon(1e-12));
    CHECK(weighted_flux(gc, 2.0, 0.0) ==
          doctest::Approx(test::oracle::gc_weighted_pressure_2).epsilon(1e-12));
  }

  TEST_CASE("constant trajectory has vanishing diagnostics") {
    const Grid g{0.0, 1.0, 64};
    const auto tr = frozen(g, constant(1.3), constant(0.4), 10, 1.0, 0.01);
    const auto gc = make_gc(1.0, 0.5);
    const auto gn = grad_norms(tr, 0.01);
    CHECK(gn.rho == doctest::Approx(0.0));
    CHECK(gn.m == doctest::Approx(0.0));
    for (double v : tv_invariant(tr, gc)) CHECK(v == doctest::Approx(0.0));
    CHECK(rho_w_deviation(tr, std::vector<double>(64, 0.4)) == doctest::Approx(0.0));
    CHECK(w12_decay(tr, make_pair(EntropyProfile::square), 0.01) == doctest::Approx(0.0));
    const auto lib = test_function_library(g, 1.0);
    for (auto fn : {WeakFunctional::mass, WeakFunctional::weighted}) {
      const auto rows = weak_residual_decay({tr}, gc, fn, lib);
      REQUIRE(rows.size() == 1);
      CHECK(rows[0].value <= 1e-12);
    }
    const auto rep = diagnose(tr, gc, {make_pair(EntropyProfile::square)});
    CHECK(rep.valid());
    CHECK(rep.to_json().find("\"D\"") != std::string::npos);
  }

  TEST_CASE("total variation of a step") {
    const Grid g{0.0, 1.0, 32, Boundary::outflow};
    const auto tr = frozen(g, constant(1.0), [](double x) { return x < 0.5 ? 1.0 : 3.0; }, 2);
    for (double v : wx_l1(tr)) CHECK(v == doctest::Approx(2.0));
    const Grid p{0.0, 1.0, 32, Boundary::periodic};
    const auto tp = frozen(p, constant(1.0), [](double x) { return x < 0.5 ? 1.0 : 3.0; }, 2);
    for (double v : wx_l1(tp)) CHECK(v == doctest::Approx(4.0));
  }

  TEST_CASE("gradient norm of a linear profile") {
    const Grid g{0.0, 1.0, 100, Boundary::outflow};
    const auto tr = frozen(g, [](double x) { return 1.0 + x; }, constant(0.0), 4, 1.0);
    const auto gn = grad_norms(tr, 0.04);
    // window drops the two boundary cells: 98 cells of width 0.01
    CHECK(gn.rho == doctest::Approx(0.2 * std::sqrt(0.98)).epsilon(1e-10));
  }

  TEST_CASE("source pairing bound") {
    const Grid g{0.0, 1.0, 16};
    const auto tr = frozen(g, constant(2.0), constant(1.0), 2);
    const auto gc = make_gc(1.0, 0.5, {SourceKind::exit, 0.5});
    // grad(rho F(z)) . (f, w f) = F(w) f for F = 1
    CHECK(source_pairing_bound(tr, make_pair(EntropyProfile::one), gc) == doctest::Approx(1.0));
  }
}

TEST_SUITE("young") {
  TEST_CASE("constant trajectory gives a Dirac measure") {
    const Grid g{0.0, 1.0, 64};
    const auto tr = frozen(g, constant(1.5), constant(0.7), 8);
    const auto bins = shared_bins({tr}, 16, 16);
    const auto mu = empirical_measure({tr}, {0.0, 1.0, 0.0, 1.0}, bins)[0];
    double total = 0.0;
    int nonzero = 0;
    for (double v : mu.weights) {
      total += v;
      nonzero += v > 0.0;
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(nonzero == 1);
    CHECK(tartar_residual(mu, make_gc(1.0, 0.5)) <= 1e-12);
    CHECK(mu.clamped == 0);
  }

  TEST_CASE("bimodal measure splits mass and has a nonzero residual") {
    const Grid g{0.0, 1.0, 64};
    const auto tr =
        frozen(g, [](double x) { return x < 0.5 ? 1.0 : 2.0; },
               [](double x) { return x < 0.5 ? 0.5 : 1.5; }, 4);
    const auto bins = shared_bins({tr}, 16, 16);
    const auto mu = empirical_measure({tr}, {0.0, 1.0, 0.0, 1.0}, bins)[0];
    CHECK(moment(mu, [](double, double) { return 1.0; }) == doctest::Approx(1.0));
    CHECK(moment(mu, [](double r, double) { return r; }) == doctest::Approx(1.5).epsilon(0.05));
    CHECK(tartar_residual(mu, make_gc(1.0, 0.5)) > 1e-3);
  }

  TEST_CASE("measure is invariant under cell permutation") {
    const Grid g{0.0, 1.0, 64};
    auto tr = frozen(g, [](double x) { return 1.0 + x; }, [](double x) { return x * x; }, 4);
    auto shuffled = tr;
    for (auto& f : shuffled.snapshots) {
      std::reverse(f.rho.begin(), f.rho.end());
      std::reverse(f.m.begin(), f.m.end());
    }
    const auto bins = shared_bins({tr, shuffled}, 12, 12);
    const auto mus = empirical_measure({tr, shuffled}, {0.0, 1.0, 0.0, 1.0}, bins);
    for (std::size_t b = 0; b < mus[0].weights.size(); ++b) {
      CHECK(mus[0].weights[b] == doctest::Approx(mus[1].weights[b]));
    }
  }

  TEST_CASE("splitting the window averages the halves") {
    const Grid g{0.0, 1.0, 64};
    const auto tr = frozen(g, [](double x) { return 1.0 + x; }, constant(0.2), 4);
    const auto bins = shared_bins({tr}, 16, 8);
    const auto whole = empirical_measure({tr}, {0.0, 1.0, 0.0, 1.0}, bins)[0];
    const auto left = empirical_measure({tr}, {0.0, 0.5, 0.0, 1.0}, bins)[0];
    const auto right = empirical_measure({tr}, {0.5, 1.0, 0.0, 1.0}, bins)[0];
    for (std::size_t b = 0; b < whole.weights.size(); ++b) {
      CHECK(whole.weights[b] == doctest::Approx(0.5 * (left.weights[b] + right.weights[b])));
    }
  }

  TEST_CASE("bin and window errors") {
    const Grid g{0.0, 1.0, 16};
    const auto tr = frozen(g, constant(1.0), constant(0.0), 2);
    const BinSpec coarse{{0.0, 2.0, 4}, {-1.0, 1.0, 16}};
    CHECK_THROWS_AS(empirical_measure({tr}, {0.0, 1.0, 0.0, 1.0}, coarse), InputError);
    const auto bins = shared_bins({tr}, 16, 16);
    CHECK_THROWS_AS(empirical_measure({tr}, {2.0, 3.0, 0.0, 1.0}, bins), InputError);
    const BinSpec narrow{{5.0, 6.0, 8}, {-1.0, 1.0, 8}};
    CHECK(empirical_measure({tr}, {0.0, 1.0, 0.0, 1.0}, narrow)[0].clamped > 0);
  }

  TEST_CASE("commutation identity") {
    const auto samples = test::random_states(500, 21);
    for (const auto& m : {make_gc(1.0, 0.5), make_convex(1.0, 1.0), make_chaplygin()}) {
      const auto c = commutation_identity_check(m, samples);
      CHECK(c.implemented <= 1e-12);
      CHECK(c.augmented <= 1e-11);
    }
  }

  TEST_CASE("default patches tile the domain") {
    const Grid g{0.0, 2.0, 64};
    const auto p = default_patches(g, 1.0);
    CHECK(p.size() == 128);
    CHECK(p.front().x_lo == doctest::Approx(0.0));
    CHECK(p.back().x_hi == doctest::Approx(2.0));
    CHECK(p.back().t_hi == doctest::Approx(1.0));
    CHECK(p.front().t_lo > 0.0);
  }
}

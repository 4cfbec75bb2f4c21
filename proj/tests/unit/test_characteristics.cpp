#include <cmath>

#include "doctest.h"
#include "kk/characteristics.hpp"
#include "kk/error.hpp"
#include "support.hpp"

using namespace kk;
namespace o = kk::test::oracle;

namespace {

void check_matrix(const Mat2& a, const double (&e)[4]) {
  CHECK(a.a11 == doctest::Approx(e[0]));
  CHECK(a.a12 == doctest::Approx(e[1]));
  CHECK(a.a21 == doctest::Approx(e[2]));
  CHECK(a.a22 == doctest::Approx(e[3]));
}

}  // namespace

TEST_SUITE("characteristics") {
  TEST_CASE("jacobian matches the symbolic values") {
    const State s{1.0, 2.0};
    check_matrix(jacobian(make_gc(1.0, 0.5), s), o::gc_dF);
    check_matrix(jacobian(make_chaplygin(), s), o::chaplygin_dF);
    check_matrix(jacobian(make_convex(1.0, 0.5), s), o::convex_dF);
  }

  TEST_CASE("jacobian matches finite differences on random states") {
    for (const auto& model : {make_gc(1.0, 0.5), make_convex(0.5, 1.0), make_chaplygin()}) {
      for (const State s : test::random_states(100, 7)) {
        const Mat2 a = jacobian(model, s);
        const Mat2 fd = test::fd_jacobian([&](State u) { return test::flux(model, u); }, s);
        const Mat2 d{a.a11 - fd.a11, a.a12 - fd.a12, a.a21 - fd.a21, a.a22 - fd.a22};
        CHECK(d.norm() <= 1e-6 * std::max(1.0, a.norm()));
      }
    }
  }

  TEST_CASE("eigenpairs") {
    const auto gc = make_gc(1.0, 0.5);
    for (const State s : test::random_states(50, 3)) {
      const auto e = eigenstructure(gc, s);
      CHECK(e.lambda1 == doctest::Approx(gc.phi(s.rho, s.w())));
      CHECK(e.lambda1 + e.lambda2 == doctest::Approx(e.jac.trace()));
      CHECK(e.lambda1 * e.lambda2 == doctest::Approx(e.jac.det()));
      const Vec2 lhs = e.jac * e.r2;
      const Vec2 rhs = e.r2 * e.lambda2;
      CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + e.r2.norm()));
    }
    const auto e = eigenstructure(gc, {1.0, 2.0});
    CHECK(e.lambda2 == doctest::Approx(o::gc_lambda2));
    CHECK(eigenstructure(make_chaplygin(), {1.0, 2.0}).lambda2 ==
          doctest::Approx(o::chaplygin_lambda2));
  }

  TEST_CASE("Riemann invariants") {
    const auto ri = riemann_invariants(make_gc(1.0, 0.5), {4.0, 8.0});
    CHECK(ri.W == doctest::Approx(1.5));
    CHECK(ri.Z == doctest::Approx(2.0));
  }

  TEST_CASE("field characters") {
    const auto gc = characteristic_fields(make_gc(1.0, 0.5), {1.0, 2.0});
    CHECK(std::abs(gc.dl1_r1) <= 1e-8);
    CHECK(std::abs(gc.dl2_r2) == doctest::Approx(o::gc_dl2_r2).epsilon(1e-6));
    const auto ch = characteristic_fields(make_chaplygin(), {1.0, 2.0});
    CHECK(std::abs(ch.dl2_r2) <= 1e-8);
  }

  TEST_CASE("restricted Hessians of G1") {
    const auto gc = make_gc(1.0, 0.5);
    const auto cv = make_convex(1.0, 0.5);
    const double tol = 1e-5;
    CHECK(quasiconvexity_check(gc, RegionFunction::g1, {1.0, 2.0}).value ==
          doctest::Approx(o::gc_G1_hess_12).epsilon(tol));
    CHECK(quasiconvexity_check(gc, RegionFunction::g1, State{2.0, 1.0}).value ==
          doctest::Approx(o::gc_G1_hess_21).epsilon(tol));
    CHECK(quasiconvexity_check(gc, RegionFunction::g1, State{0.5, -0.25}).value ==
          doctest::Approx(o::gc_G1_hess_half).epsilon(tol));
    CHECK(quasiconvexity_check(cv, RegionFunction::g1, {1.0, 2.0}).value ==
          doctest::Approx(o::convex_G1_hess_12).epsilon(tol));
    CHECK(quasiconvexity_check(cv, RegionFunction::g1, State{2.0, 1.0}).value ==
          doctest::Approx(o::convex_G1_hess_21).epsilon(tol));
    CHECK(quasiconvexity_check(cv, RegionFunction::g1, State{0.5, -0.25}).value ==
          doctest::Approx(o::convex_G1_hess_half).epsilon(tol));
    CHECK(std::abs(quasiconvexity_check(gc, RegionFunction::g2, {1.0, 2.0}).value) <= 1e-6);
  }

  TEST_CASE("region membership and density bounds") {
    const auto gc = make_gc(1.0, 0.5);
    const RegionSpec region{0.0, 3.0};
    CHECK(region_check(gc, region, State::from_rho_w(1.0, 2.0)).inside);
    CHECK_FALSE(region_check(gc, region, State::from_rho_w(1.0, 3.5)).inside);
    CHECK_FALSE(region_check(gc, region, State::from_rho_w(0.01, 1.0)).inside);
    const auto b = region_density_bounds(gc, region);
    REQUIRE(b.low.has_value());
    CHECK(*b.low == doctest::Approx(o::gc_region_rho_low));
    const auto bc = region_density_bounds(make_chaplygin(), {0.0, 2.0});
    REQUIRE(bc.low.has_value());
    CHECK(*bc.low == doctest::Approx(o::chaplygin_region_rho_low));
    CHECK_THROWS_AS(region_density_bounds(gc, {5.0, -5.0}), EmptyRegionError);
  }
}

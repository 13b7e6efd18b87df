#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icefem/errors.hpp"
#include "icefem/model.hpp"
#include "test_util.hpp"

using namespace icefem;
using icefem::testing::Rng;

TEST_CASE("default parameters are the standard values") {
  PhysicalParams p;
  CHECK(p.rho == 900.0);
  CHECK(p.rho_o == 1028.0);
  CHECK(p.C_o == 5e-3);
  CHECK(p.P_star == 25e3);
  CHECK(p.c_m == 2e-9);
  CHECK(p.C_hard == 20.0);
}

TEST_CASE("viscosity law") {
  PhysicalParams p;  // standard values

  // h P*/c_m e^{C(A-1)} with A=1, h=1: 25e3 / 2e-9
  CHECK(eta(1.0, 1.0, p) == doctest::Approx(1.25e13).epsilon(1e-15));
  CHECK(eta(0.0, 1.0, p) ==
        doctest::Approx(1.25e13 * std::exp(-20.0)).epsilon(1e-13));
  CHECK(eta(0.0, 1.0, p) == doctest::Approx(2.575e4).epsilon(1e-3));

  CHECK_THROWS_AS(eta(1.2, 1.0, p), ModelError);
  CHECK_THROWS_AS(eta(-0.1, 1.0, p), ModelError);
  CHECK_THROWS_AS(eta(0.5, 0.5 * p.h_min, p), ModelError);
}

TEST_CASE("beta scaling") {
  PhysicalParams p;
  p.dt = 600.0;
  p.rho = 900.0;
  CHECK(beta(1.0, p) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  PhysicalParams p2 = p;
  p2.dt = 1200.0;
  CHECK(beta(1.0, p2) == doctest::Approx(2.0 * beta(1.0, p)).epsilon(1e-15));
  CHECK_THROWS_AS(beta(p.h_min / 2.0, p), ModelError);
}

TEST_CASE("viscosity bounds sandwich") {
  PhysicalParams p;
  const double h_max = 3.0;
  DerivedBounds b = derived_bounds(p, h_max);
  CHECK(b.eta_min == doctest::Approx(p.h_min * p.P_star / p.c_m * std::exp(-p.C_hard)));
  CHECK(b.eta_max == doctest::Approx(h_max * p.P_star / p.c_m));
  Rng rng(31);
  for (int i = 0; i < 10000; ++i) {
    double A = rng.uniform(0.0, 1.0);
    double h = rng.uniform(p.h_min, h_max);
    double e = eta(A, h, p);
    CHECK(e >= b.eta_min * (1.0 - 1e-12));
    CHECK(e <= b.eta_max * (1.0 + 1e-12));
    double bt = beta(h, p);
    CHECK(bt >= b.beta_min * (1.0 - 1e-12));
    CHECK(bt <= b.beta_max * (1.0 + 1e-12));
  }
}

TEST_CASE("ocean drag") {
  PhysicalParams p;
  SUBCASE("zero at u = v_o") {
    Vec2 d = ocean_drag({0.3, -0.1}, {0.3, -0.1}, p);
    CHECK(d.x == 0.0);
    CHECK(d.y == 0.0);
  }
  SUBCASE("w = (3,4) with standard parameters") {
    Vec2 d = ocean_drag({3.0, 4.0}, {0.0, 0.0}, p);
    CHECK(d.x == doctest::Approx(77.1).epsilon(1e-14));
    CHECK(d.y == doctest::Approx(102.8).epsilon(1e-14));
  }
  SUBCASE("odd in w") {
    Rng rng(32);
    for (int i = 0; i < 50; ++i) {
      Vec2 u = rng.vec2(-2, 2), v = rng.vec2(-2, 2);
      Vec2 a = ocean_drag(u, v, p);
      Vec2 b = ocean_drag(2.0 * v - u, v, p);
      CHECK(a.x == doctest::Approx(-b.x).epsilon(1e-13));
      CHECK(a.y == doctest::Approx(-b.y).epsilon(1e-13));
    }
  }
}

TEST_CASE("drag derivative") {
  PhysicalParams p;
  SUBCASE("zero at w = 0") {
    Vec2 d = ocean_drag_derivative({0.5, 0.5}, {0.5, 0.5}, {1.0, -2.0}, p);
    CHECK(d.x == 0.0);
    CHECK(d.y == 0.0);
  }
  SUBCASE("w = d = (1,0)") {
    Vec2 d = ocean_drag_derivative({1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, p);
    CHECK(d.x == doctest::Approx(2.0 * p.rho_o * p.C_o).epsilon(1e-14));
    CHECK(d.y == doctest::Approx(0.0));
  }
  SUBCASE("matches central finite differences over an eps sweep") {
    Rng rng(33);
    for (int i = 0; i < 50; ++i) {
      Vec2 w = rng.vec2(-1.0, 1.0);
      if (norm(w) < 0.01) w = w + Vec2{0.5, 0.0};
      Vec2 d = rng.vec2(-1.0, 1.0);
      Vec2 vo{0.0, 0.0};
      Vec2 exact = ocean_drag_derivative(w, vo, d, p);
      double best = 1e300;
      for (double eps : {1e-4, 1e-5, 1e-6, 1e-7}) {
        Vec2 fp = ocean_drag(w + eps * d, vo, p);
        Vec2 fm = ocean_drag(w - eps * d, vo, p);
        Vec2 fd = (1.0 / (2.0 * eps)) * (fp - fm);
        double err = norm(fd - exact) / std::max(norm(exact), 1e-14);
        best = std::min(best, err);
      }
      CHECK(best <= 1e-6);
    }
  }
  SUBCASE("first-order Taylor remainder is quadratic in the step") {
    PhysicalParams q;
    Vec2 w{0.4, -0.3}, d{0.2, 0.7}, vo{0, 0};
    Vec2 dd = ocean_drag_derivative(w, vo, d, q);
    double prev_ratio = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      Vec2 rem = ocean_drag(w + eps * d, vo, q) - ocean_drag(w, vo, q) - eps * dd;
      double ratio = norm(rem) / (eps * eps);
      if (prev_ratio > 0.0)
        CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.05));
      prev_ratio = ratio;
    }
  }
}

TEST_CASE("pointwise Lipschitz bound in a small ball") {
  PhysicalParams p;
  Rng rng(34);
  const double eps = 0.05;
  for (int i = 0; i < 200; ++i) {
    Vec2 u = rng.vec2(-eps, eps), v = rng.vec2(-eps, eps);
    Vec2 vo{0, 0};
    double lhs = norm(ocean_drag(u, vo, p) - ocean_drag(v, vo, p));
    double rhs = 2.0 * p.rho_o * p.C_o * (norm(u) + norm(v)) * norm(u - v);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("parameter validation") {
  PhysicalParams p;
  p.rho = -1.0;
  CHECK_THROWS_AS(p.validate(), ModelError);
  PhysicalParams q;
  CHECK_NOTHROW(q.validate());
}

TEST_CASE("model data clamps thickness at quadrature points of active cells") {
  ModelData m = testing::mild_model();
  m.fields.h = [](const Vec2& p, double) { return p.x < 0.5 ? 1.0 : 0.001; };
  // active cell decided cellwise; pointwise dips are clamped to h_min
  double e = m.eta_at({0.9, 0.5});
  CHECK(e == doctest::Approx(eta(1.0, m.params.h_min, m.params)));
}

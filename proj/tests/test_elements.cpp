#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icefem/elements.hpp"
#include "icefem/quadrature.hpp"
#include "test_util.hpp"

using namespace icefem;
using icefem::testing::Rng;

namespace {

Vec2 random_ref_point(Rng& rng) {
  double a = rng.uniform(0.0, 1.0), b = rng.uniform(0.0, 1.0);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  return {a, b};
}

// Numerical reference moments of an RT function given by its pointwise values.
template <typename F>
void numeric_rt_moments(int l, F&& value_at, double* out) {
  EdgeQuadratureRule eq = make_edge_quadrature(5);
  int nm = rt_edge_moments(l);
  for (int e = 0; e < 3; ++e) {
    auto ends = ref_edge_endpoints(e);
    Vec2 n = ref_edge_outward_normal(e);
    double len = ref_edge_length(e);
    for (int m = 0; m < nm; ++m) out[e * nm + m] = 0.0;
    for (int q = 0; q < eq.size(); ++q) {
      double s = eq.points[q];
      Vec2 p = ends[0] + s * (ends[1] - ends[0]);
      double vn = dot(value_at(p), n) * eq.weights[q] * len;
      out[e * nm + 0] += vn;
      if (nm > 1) out[e * nm + 1] += vn * (2.0 * s - 1.0);
    }
  }
  if (l == 1) {
    QuadratureRule tq = make_quadrature(5);
    out[6] = out[7] = 0.0;
    for (int q = 0; q < tq.size(); ++q) {
      Vec2 v = value_at(tq.points[q]);
      out[6] += tq.weights[q] * v.x;
      out[7] += tq.weights[q] * v.y;
    }
  }
}

}  // namespace

TEST_CASE("P2 nodal property") {
  auto nodes = lagrange_nodes(2);
  REQUIRE(nodes.size() == 6);
  for (int n = 0; n < 6; ++n) {
    double vals[6];
    lagrange_basis(2, nodes[n], vals, nullptr);
    for (int i = 0; i < 6; ++i)
      CHECK(vals[i] == doctest::Approx(i == n ? 1.0 : 0.0).epsilon(1e-14));
  }
}

TEST_CASE("partition of unity and zero gradient sum at random points") {
  Rng rng(11);
  for (int k : {1, 2}) {
    for (int trial = 0; trial < 100; ++trial) {
      Vec2 p = random_ref_point(rng);
      double vals[6];
      Vec2 grads[6];
      lagrange_basis(k, p, vals, grads);
      double vsum = 0.0;
      Vec2 gsum{0, 0};
      for (int i = 0; i < lagrange_size(k); ++i) {
        vsum += vals[i];
        gsum += grads[i];
      }
      CHECK(vsum == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(gsum.x) < 1e-13);
      CHECK(std::abs(gsum.y) < 1e-13);
    }
  }
}

TEST_CASE("P2 reproduces x^2 - 3xy + y by nodal interpolation") {
  auto poly = [](const Vec2& p) { return p.x * p.x - 3.0 * p.x * p.y + p.y; };
  auto nodes = lagrange_nodes(2);
  double coeff[6];
  for (int i = 0; i < 6; ++i) coeff[i] = poly(nodes[i]);
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    Vec2 p = random_ref_point(rng);
    double vals[6];
    lagrange_basis(2, p, vals, nullptr);
    double interp = 0.0;
    for (int i = 0; i < 6; ++i) interp += coeff[i] * vals[i];
    CHECK(interp == doctest::Approx(poly(p)).epsilon(1e-13));
  }
}

TEST_CASE("RT0 shape functions: unit flux on own edge, zero on others") {
  EdgeQuadratureRule eq = make_edge_quadrature(3);
  for (int e = 0; e < 3; ++e) {
    auto ends = ref_edge_endpoints(e);
    Vec2 n = ref_edge_outward_normal(e);
    double len = ref_edge_length(e);
    double flux[3] = {0, 0, 0};
    double trace_min[3] = {1e300, 1e300, 1e300}, trace_max[3] = {-1e300, -1e300, -1e300};
    for (int q = 0; q < eq.size(); ++q) {
      Vec2 p = ends[0] + eq.points[q] * (ends[1] - ends[0]);
      Vec2 vals[3];
      double divs[3];
      rt_basis(0, p, vals, divs);
      for (int i = 0; i < 3; ++i) {
        double tn = dot(vals[i], n);
        flux[i] += tn * eq.weights[q] * len;
        trace_min[i] = std::min(trace_min[i], tn);
        trace_max[i] = std::max(trace_max[i], tn);
      }
    }
    for (int i = 0; i < 3; ++i) {
      CHECK(flux[i] == doctest::Approx(i == e ? 1.0 : 0.0).epsilon(1e-14));
      CHECK(trace_max[i] - trace_min[i] < 1e-14);  // constant normal trace
    }
  }
}

TEST_CASE("RT0 divergence is constant 2 and flux sum is 3") {
  Rng rng(13);
  double fluxsum = 0.0;
  EdgeQuadratureRule eq = make_edge_quadrature(2);
  for (int e = 0; e < 3; ++e) {
    auto ends = ref_edge_endpoints(e);
    Vec2 n = ref_edge_outward_normal(e);
    for (int q = 0; q < eq.size(); ++q) {
      Vec2 p = ends[0] + eq.points[q] * (ends[1] - ends[0]);
      Vec2 vals[3];
      double divs[3];
      rt_basis(0, p, vals, divs);
      for (int i = 0; i < 3; ++i)
        fluxsum += dot(vals[i], n) * eq.weights[q] * ref_edge_length(e);
    }
  }
  CHECK(fluxsum == doctest::Approx(3.0).epsilon(1e-13));

  for (int trial = 0; trial < 10; ++trial) {
    Vec2 p = random_ref_point(rng);
    Vec2 vals[3];
    double divs[3];
    rt_basis(0, p, vals, divs);
    // unit net flux over area 1/2
    for (int i = 0; i < 3; ++i) CHECK(divs[i] == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("RT1 moment duality") {
  for (int i = 0; i < 8; ++i) {
    double mom[8];
    numeric_rt_moments(1, [&](const Vec2& p) {
      Vec2 vals[8];
      double divs[8];
      rt_basis(1, p, vals, divs);
      return vals[i];
    }, mom);
    for (int j = 0; j < 8; ++j)
      CHECK(mom[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("RT1 reproduces q = (x^2, xy) + x (x + y) via moment interpolation") {
  auto q = [](const Vec2& p) {
    return Vec2{p.x * p.x + p.x * (p.x + p.y), p.x * p.y + p.y * (p.x + p.y)};
  };
  double coeff[8];
  numeric_rt_moments(1, q, coeff);
  Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    Vec2 p = random_ref_point(rng);
    Vec2 vals[8];
    double divs[8];
    rt_basis(1, p, vals, divs);
    Vec2 acc{0, 0};
    for (int i = 0; i < 8; ++i) acc += coeff[i] * vals[i];
    Vec2 expect = q(p);
    CHECK(acc.x == doctest::Approx(expect.x).epsilon(1e-12));
    CHECK(acc.y == doctest::Approx(expect.y).epsilon(1e-12));
  }
}

TEST_CASE("piola transform") {
  SUBCASE("identity map leaves values unchanged") {
    AffineMap id = make_affine_map({0, 0}, {1, 0}, {0, 1});
    Vec2 vals[8];
    double divs[8];
    rt_basis(1, {0.3, 0.2}, vals, divs);
    Vec2 pv[8];
    double pd[8];
    piola_push(id, 8, vals, divs, pv, pd);
    for (int i = 0; i < 8; ++i) {
      CHECK(pv[i].x == doctest::Approx(vals[i].x));
      CHECK(pd[i] == doctest::Approx(divs[i]));
    }
  }

  SUBCASE("uniform scaling by 2 halves values and quarters divergences") {
    AffineMap s2 = make_affine_map({0, 0}, {2, 0}, {0, 2});
    Vec2 vals[3];
    double divs[3];
    rt_basis(0, {0.25, 0.25}, vals, divs);
    Vec2 pv[3];
    double pd[3];
    piola_push(s2, 3, vals, divs, pv, pd);
    for (int i = 0; i < 3; ++i) {
      CHECK(pv[i].x == doctest::Approx(0.5 * vals[i].x).epsilon(1e-15));
      CHECK(pv[i].y == doctest::Approx(0.5 * vals[i].y).epsilon(1e-15));
      CHECK(pd[i] == doctest::Approx(0.25 * divs[i]).epsilon(1e-15));
    }
  }

  SUBCASE("pushed RT0 shape has unit flux over its own physical edge") {
    Rng rng(15);
    for (int trial = 0; trial < 5; ++trial) {
      Vec2 p0 = rng.vec2(-2.0, 2.0);
      Vec2 p1 = p0 + rng.vec2(0.5, 2.0);
      Vec2 p2 = p0 + Vec2{rng.uniform(-1.0, 0.0), rng.uniform(0.5, 2.0)};
      AffineMap map = make_affine_map(p0, p1, p2);
      if (map.det <= 0.1) continue;
      const Vec2 phys[3] = {p0, p1, p2};
      EdgeQuadratureRule eq = make_edge_quadrature(4);
      for (int e = 0; e < 3; ++e) {
        // physical edge opposite vertex e, traversed with outward normal
        Vec2 a = phys[(e + 1) % 3], b = phys[(e + 2) % 3];
        Vec2 t = b - a;
        double len = norm(t);
        Vec2 n_out{t.y / len, -t.x / len};
        double flux = 0.0;
        for (int q = 0; q < eq.size(); ++q) {
          Vec2 ref_pt = ref_edge_endpoints(e)[0] +
                        eq.points[q] * (ref_edge_endpoints(e)[1] - ref_edge_endpoints(e)[0]);
          Vec2 vals[3];
          double divs[3];
          rt_basis(0, ref_pt, vals, divs);
          Vec2 pv[3];
          double pd[3];
          piola_push(map, 3, vals, divs, pv, pd);
          flux += dot(pv[e], n_out) * eq.weights[q] * len;
        }
        CHECK(flux == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

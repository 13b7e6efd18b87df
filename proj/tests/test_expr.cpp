#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "icefem/expr.hpp"
#include "test_util.hpp"

using namespace icefem;
using icefem::testing::Rng;

TEST_CASE("precedence and basic evaluation") {
  CHECK(Expr::parse("x + y*2").evaluate(1, 3) == doctest::Approx(7.0));
  CHECK(Expr::parse("sin(3.141592653589793/2)").evaluate(0, 0) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Expr::parse("0.1*(2*y-500000)/500000").evaluate(0, 500000) ==
        doctest::Approx(0.1).epsilon(1e-15));
  CHECK(Expr::parse("2*3+4").evaluate(0, 0) == doctest::Approx(10.0));
  CHECK(Expr::parse("2+3*4").evaluate(0, 0) == doctest::Approx(14.0));
  CHECK(Expr::parse("2-3-4").evaluate(0, 0) == doctest::Approx(-5.0));
  CHECK(Expr::parse("16/4/2").evaluate(0, 0) == doctest::Approx(2.0));
  CHECK(Expr::parse("min(3, max(1, 2))").evaluate(0, 0) == doctest::Approx(2.0));
  CHECK(Expr::parse("abs(-2.5)").evaluate(0, 0) == doctest::Approx(2.5));
  CHECK(Expr::parse("1e-3 * x").evaluate(2000, 0) == doctest::Approx(2.0));
  CHECK(Expr::parse("t*t").evaluate(0, 0, 3) == doctest::Approx(9.0));
}

TEST_CASE("power is right associative and binds tighter than unary minus") {
  CHECK(Expr::parse("-x^2").evaluate(2, 0) == doctest::Approx(-4.0));
  CHECK(Expr::parse("x^2^3").evaluate(2, 0) == doctest::Approx(256.0));
  CHECK(Expr::parse("2^-1").evaluate(0, 0) == doctest::Approx(0.5));
  CHECK(Expr::parse("(-x)^2").evaluate(2, 0) == doctest::Approx(4.0));
}

TEST_CASE("evaluation matches a hand-coded closure at random points") {
  Expr e = Expr::parse("x^2 - 3*x*y + y");
  auto closure = [](double x, double y) { return x * x - 3.0 * x * y + y; };
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    double x = rng.uniform(-10, 10), y = rng.uniform(-10, 10);
    double expect = closure(x, y);
    CHECK(e.evaluate(x, y) ==
          doctest::Approx(expect).epsilon(1e-15).scale(std::abs(expect) + 1.0));
  }
}

TEST_CASE("parse errors carry byte offsets") {
  auto offset_of = [](const std::string& text) -> long {
    try {
      Expr::parse(text);
    } catch (const ExprError& e) {
      return static_cast<long>(e.offset);
    }
    return -1;
  };
  CHECK(offset_of("x + ") == 4);
  CHECK(offset_of("x + * y") == 4);
  CHECK(offset_of("(x + y") == 6);
  CHECK(offset_of("x + y)") == 5);
  CHECK(offset_of("x + foo(y)") == 4);      // unknown identifier
  CHECK(offset_of("sin(x, y)") == 0);       // arity mismatch reported at the call
  CHECK(offset_of("min(x)") == 0);
  CHECK(offset_of("x $ y") == 2);
  CHECK(offset_of("sin + 1") == 4);         // function used without call
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(Expr::parse("1/0").evaluate(0, 0), ExprError);
  CHECK_THROWS_AS(Expr::parse("sqrt(-1)").evaluate(0, 0), ExprError);
  CHECK_THROWS_AS(Expr::parse("1/x").evaluate(0, 0), ExprError);
  CHECK(Expr::parse("1/x").evaluate(2, 0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Expr::parse("(-2)^0.5").evaluate(0, 0), ExprError);
  CHECK(Expr::parse("0^0").evaluate(0, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Expr::parse("10^400").evaluate(0, 0), ExprError);  // overflow
}

TEST_CASE("print-parse idempotence") {
  const char* cases[] = {
      "x + y*2",
      "-x^2",
      "0.1*(2*y-500000)/500000",
      "min(x, max(y, t)) - sqrt(abs(x*y))",
      "sin(3.14*x)*cos(2*y) + exp(-x^2)",
      "2^-3 + 1e10*t",
  };
  for (const char* text : cases) {
    Expr e = Expr::parse(text);
    Expr reparsed = Expr::parse(e.print());
    CHECK(tree_equal(e, reparsed));
    CHECK(e.print() == reparsed.print());
  }
}

TEST_CASE("uses_t detection") {
  CHECK(!Expr::parse("x + y").uses_t());
  CHECK(Expr::parse("x + t").uses_t());
  CHECK(Expr::parse("sin(max(1, t))").uses_t());
}

TEST_CASE("evaluation is pure") {
  Expr e = Expr::parse("x*sin(y) + y^2");
  double a = e.evaluate(1.5, 2.5);
  for (int i = 0; i < 10; ++i) CHECK(e.evaluate(1.5, 2.5) == a);
}

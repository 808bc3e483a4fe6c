#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracspec/expression.hpp"
#include "fracspec/jet.hpp"
#include "fracspec/types.hpp"

using namespace fracspec;

namespace {

double eval(const std::string& s, std::vector<double> v = {}, std::vector<std::string> names = {}) {
  return Expression::parse(s, names).eval(std::span<const double>(v));
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(eval("1 + 2 * 3") == 7.0);
  CHECK(eval("(1 + 2) * 3") == 9.0);
  CHECK(eval("2 ^ 3 ^ 2") == 512.0);
  CHECK(eval("-2 ^ 2") == -4.0);
  CHECK(eval("2 ^ -1") == 0.5);
  CHECK(eval("8 / 4 / 2") == 1.0);
  CHECK(eval("10 - 4 - 3") == 3.0);
  CHECK(eval("1.5e2") == 150.0);
  CHECK(eval("pi") == std::numbers::pi);
}

TEST_CASE("functions and variables") {
  CHECK(eval("gamma(5)") == doctest::Approx(24.0));
  CHECK(eval("pow(x, 2) + sin(y)", {3.0, 0.0}, {"x", "y"}) == 9.0);
  CHECK(eval("exp(log(x)) - sqrt(x*x)", {2.5}, {"x"}) == doctest::Approx(0.0).scale(1.0));
  CHECK(eval("cos(0)") == 1.0);
}

TEST_CASE("parse errors name the column") {
  CHECK_THROWS_AS(eval("1 +"), ConfigError);
  CHECK_THROWS_AS(eval("foo(1)"), ConfigError);
  CHECK_THROWS_AS(eval("y", {1.0}, {"x"}), ConfigError);
  CHECK_THROWS_AS(eval("pow(1)"), ConfigError);
  CHECK_THROWS_AS(eval("(1"), ConfigError);
  CHECK_THROWS_AS(eval("1 $ 2"), ConfigError);
  try {
    eval("1 + $");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("column 5") != std::string::npos);
  }
}

TEST_CASE("jet derivatives match closed forms") {
  const double x = 0.8;
  const Jet j = Jet::variable(x);
  const Jet s = sin(j * j);
  CHECK(s.d == doctest::Approx(2 * x * std::cos(x * x)).epsilon(1e-14));
  CHECK(s.dd == doctest::Approx(2 * std::cos(x * x) - 4 * x * x * std::sin(x * x)).epsilon(1e-14));

  const Jet p = pow(j, 3.5);
  CHECK(p.d == doctest::Approx(3.5 * std::pow(x, 2.5)));
  CHECK(p.dd == doctest::Approx(3.5 * 2.5 * std::pow(x, 1.5)));

  const Jet q = (1.0 - j) / (j + 2.0);  // -1 + 3/(x+2)
  CHECK(q.d == doctest::Approx(-3.0 / ((x + 2) * (x + 2))));
  CHECK(q.dd == doctest::Approx(6.0 / std::pow(x + 2, 3)));

  const Jet e = exp(log(sqrt(j)));
  CHECK(e.v == doctest::Approx(std::sqrt(x)));
  CHECK(e.dd == doctest::Approx(-0.25 * std::pow(x, -1.5)));
}

TEST_CASE("constant powers at zero stay finite") {
  const Jet zero_t(0.0);
  const Jet r = pow(zero_t, 0.3) * Jet::variable(0.5);
  CHECK(r.v == 0.0);
  CHECK(std::isfinite(r.d));
  CHECK(std::isfinite(r.dd));
}

TEST_CASE("jet gamma only for constants") {
  CHECK(tgamma(Jet(4.0)).v == doctest::Approx(6.0));
  CHECK_THROWS_AS(tgamma(Jet::variable(4.0)), std::domain_error);
}

TEST_CASE("expression evaluates on jets") {
  const auto e = Expression::parse("a * x^3 + pow(x, a)", {"x", "a"});
  const std::vector<Jet> v{Jet::variable(1.3), Jet(2.0)};
  const Jet r = e.eval(std::span<const Jet>(v));
  CHECK(r.v == doctest::Approx(2 * std::pow(1.3, 3) + 1.69));
  CHECK(r.d == doctest::Approx(6 * 1.69 + 2.6));
  CHECK(r.dd == doctest::Approx(12 * 1.3 + 2.0));
}

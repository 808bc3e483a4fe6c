#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fracspec/quadrature.hpp"

using namespace fracspec;

TEST_CASE("one- and two-point rules") {
  const auto r1 = gauss_legendre_rule(1, 1.0);
  REQUIRE(r1.size() == 1);
  CHECK(r1.nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  const auto r2 = gauss_legendre_rule(2, 1.0);
  REQUIRE(r2.size() == 2);
  const double off = 1.0 / (2.0 * std::sqrt(3.0));
  CHECK(r2.nodes[0] == doctest::Approx(0.5 - off).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(0.5 + off).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(integrate(r2, [](double x) { return x * x * x; }) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("rule invariants for m up to 64") {
  for (double X : {1.0, 2.0, 5.0}) {
    for (int m = 1; m <= 64; ++m) {
      const auto r = gauss_legendre_rule(m, X);
      REQUIRE(r.size() == static_cast<std::size_t>(m));
      CHECK(r.degree == m);
      CHECK(r.domain_length == X);
      const double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
      CHECK(std::abs(total - X) <= 1e-12 * X);
      for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(r.weights[i] > 0.0);
        CHECK(r.nodes[i] > 0.0);
        CHECK(r.nodes[i] < X);
        if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
        CHECK(std::abs(r.nodes[i] + r.nodes[r.size() - 1 - i] - X) <= 1e-12 * X);
      }
      // exact through degree 2m - 1
      for (int p = 0; p <= 2 * m - 1; ++p) {
        const double got = integrate(r, [&](double x) { return std::pow(x / X, p); });
        const double want = X / (p + 1.0);
        CHECK(std::abs(got - want) <= 1e-12 * want * (1 + p / 8.0));
      }
    }
  }
}

TEST_CASE("integrate examples") {
  CHECK(integrate(gauss_legendre_rule(3, 2.0), [](double) { return 1.0; }) ==
        doctest::Approx(2.0).epsilon(1e-15));
  const auto r20 = gauss_legendre_rule(20, 1.0);
  CHECK(std::abs(integrate(r20, [](double x) { return std::sin(x); }) - (1.0 - std::cos(1.0))) < 1e-12);
  CHECK(std::abs(integrate(r20, [](double x) { return std::pow(x, 2.5); }) - 1.0 / 3.5) < 1e-6);
}

TEST_CASE("doubling m never increases the error on the fixed test set") {
  const auto errors = [](int m) {
    const auto r = gauss_legendre_rule(m, 1.0);
    return std::array<double, 3>{
        std::abs(integrate(r, [](double x) { return std::pow(x, 7) - 3 * x * x; }) - (1.0 / 8 - 1.0)),
        std::abs(integrate(r, [](double x) { return std::sin(x); }) - (1.0 - std::cos(1.0))),
        std::abs(integrate(r, [](double x) { return std::pow(x, 2.5); }) - 1.0 / 3.5)};
  };
  for (int m = 1; m <= 32; m *= 2) {
    const auto e1 = errors(m);
    const auto e2 = errors(2 * m);
    for (int i = 0; i < 3; ++i) CHECK(e2[i] <= e1[i] + 1e-15);
  }
}

TEST_CASE("bad arguments") {
  CHECK_THROWS_AS(gauss_legendre_rule(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre_rule(4, 0.0), std::invalid_argument);
  CHECK_NOTHROW(gauss_legendre_rule(200, 1.0));
}

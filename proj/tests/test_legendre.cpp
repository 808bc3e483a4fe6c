#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracspec/legendre.hpp"
#include "fracspec/quadrature.hpp"

using namespace fracspec;
using namespace fracspec::legendre;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Sum of |monomial coefficients| of Phat_n on [0, 1], i.e. P_n(3).
double series_condition(int n) {
  double prev = 1.0, cur = 3.0;
  if (n == 0) return 1.0;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * 3.0 * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

TEST_CASE("fractional order") {
  FractionalOrder a(1.5);
  CHECK(a.kappa() == 2);
  CHECK_FALSE(a.is_integer());
  FractionalOrder b(1.0);
  CHECK(b.kappa() == 1);
  CHECK(b.is_integer());
  FractionalOrder c(0.3);
  CHECK(c.kappa() == 1);
  CHECK_THROWS_AS(FractionalOrder(0.0), std::invalid_argument);
  CHECK_THROWS_AS(FractionalOrder(-0.5), std::invalid_argument);
}

TEST_CASE("shifted_eval examples") {
  CHECK(shifted_eval(0, 0.7, 1.0) == 1.0);
  CHECK(shifted_eval(5, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  // 1 - 6x + 6x^2 at 0.3
  CHECK(shifted_eval(2, 0.3, 1.0) == doctest::Approx(-0.26).epsilon(1e-14));
  CHECK_THROWS_AS(shifted_eval(-1, 0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(shifted_eval(2, 0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(shifted_eval(2, 1.5, 1.0), std::domain_error);
}

TEST_CASE("shifted_deriv examples and finite differences") {
  CHECK(shifted_deriv(1, 0.4, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(shifted_deriv(0, 0.5, 1.0) == 0.0);
  CHECK(shifted_deriv(2, 0.3, 1.0) == doctest::Approx(-2.4).epsilon(1e-14));
  for (double X : {1.0, 2.5}) {
    for (int n = 0; n <= 15; ++n) {
      for (double t = 0.05; t < 0.96; t += 0.1) {
        const double x = t * X;
        const double h = 1e-6;
        const double fd = (shifted_eval(n, x + h, X) - shifted_eval(n, x - h, X)) / (2 * h);
        const double d = shifted_deriv(n, x, X);
        CHECK(std::abs(d - fd) <= 1e-6 * std::max(1.0, std::abs(d)));
      }
    }
  }
}

TEST_CASE("derivative series agrees with the recurrence") {
  for (int n = 0; n <= 12; ++n) {
    for (int i = 0; i <= 20; ++i) {
      const double x = 2.0 * i / 20.0;
      const double series = static_cast<double>(shifted_deriv_series<__float128>(n, x, 2.0));
      CHECK(std::abs(series - shifted_deriv(n, x, 2.0)) <= 1e-11 * (n * (n + 1.0) / 2.0 + 1.0));
    }
  }
}

TEST_CASE("recurrence matches the series evaluated in quad precision") {
  // |Phat_n| <= 1 on [0, X], so errors are measured against the sup norm.
  for (int n = 0; n <= 30; ++n) {
    for (int i = 0; i <= 100; ++i) {
      const double x = i / 100.0;
      const auto series = static_cast<double>(shifted_eval_series<__float128>(n, x, 1.0));
      const double rec = shifted_eval(n, x, 1.0);
      if (n <= 20) {
        CHECK(std::abs(series - rec) < 1e-10);
      }
      CHECK(std::abs(series - rec) < 1e-12);
    }
  }
}

TEST_CASE("double-precision series is only trustworthy for low degree") {
  // Cancellation in the monomial form: fine for the degrees the solver uses.
  for (int n = 0; n <= 12; ++n) {
    for (int i = 0; i <= 100; ++i) {
      const double x = i / 100.0;
      const double bound = 4.0 * (n + 1) * 1.2e-16 * series_condition(n);
      CHECK(std::abs(shifted_eval_series<double>(n, x, 1.0) - shifted_eval(n, x, 1.0)) < bound);
    }
  }
}

TEST_CASE("orthogonality on [0, 1] with the degree-20 rule") {
  const QuadratureRule rule = gauss_legendre_rule(20, 1.0);
  for (int m = 0; m <= 12; ++m) {
    for (int n = 0; n <= 12; ++n) {
      const double ip = integrate(rule, [&](double x) {
        return shifted_eval(m, x, 1.0) * shifted_eval(n, x, 1.0);
      });
      const double want = m == n ? 1.0 / (2 * n + 1) : 0.0;
      CHECK(std::abs(ip - want) < 1e-10);
    }
  }
  const QuadratureRule rule3 = gauss_legendre_rule(20, 3.0);
  for (int n = 0; n <= 12; ++n) {
    const double ip = integrate(rule3, [&](double x) {
      const double p = shifted_eval(n, x, 3.0);
      return p * p;
    });
    CHECK(std::abs(ip - 3.0 / (2 * n + 1)) < 1e-10);
  }
}

TEST_CASE("shifted_caputo examples") {
  // ceil(1.5) = 2 > n = 1: empty sum.
  CHECK(shifted_caputo(1, 0.5, 1.0, FractionalOrder(1.5)) == 0.0);
  // D^{0.5}(2x - 1) = 2 x^{0.5} / Gamma(1.5)
  CHECK(shifted_caputo(1, 1.0, 1.0, FractionalOrder(0.5)) ==
        doctest::Approx(2.0 / std::tgamma(1.5)).epsilon(1e-14));
  CHECK(2.0 / std::tgamma(1.5) == doctest::Approx(2.25676).epsilon(1e-5));

  const FractionalOrder z(0.7);
  const double oracle = caputo_oracle([](double s) { return shifted_deriv(4, s, 1.0); }, 0.6, z);
  CHECK(rel_err(shifted_caputo(4, 0.6, 1.0, z), oracle) < 1e-6);

  CHECK_THROWS_AS(shifted_caputo(3, -0.1, 1.0, z), std::domain_error);
}

TEST_CASE("shifted_caputo at x = 0 is the term-by-term limit") {
  CHECK(shifted_caputo(5, 0.0, 1.0, FractionalOrder(0.7)) == 0.0);
  CHECK(shifted_caputo(5, 0.0, 1.0, FractionalOrder(1.5)) == 0.0);
  // Integer order keeps the k = zeta term: D^1 Phat_1 = 2 / X.
  CHECK(shifted_caputo(1, 0.0, 2.0, FractionalOrder(1.0)) == doctest::Approx(1.0));
  CHECK(shifted_caputo(3, 0.0, 1.0, FractionalOrder(1.0)) ==
        doctest::Approx(shifted_deriv(3, 0.0, 1.0)).epsilon(1e-13));
}

TEST_CASE("integer order reduces to the plain derivative") {
  const FractionalOrder one(1.0);
  const FractionalOrder two(2.0);
  for (int n = 0; n <= 10; ++n) {
    for (double x : {0.1, 0.35, 0.8, 1.0}) {
      // Same cancellation as the value series, amplified by n^2 for the derivative.
      const double bound = 4.0 * (n + 1) * 1.2e-16 * series_condition(n) * (n * n + 1.0);
      CHECK(std::abs(shifted_caputo(n, x, 1.0, one) - shifted_deriv(n, x, 1.0)) <= bound);
      const double h = 1e-4;
      const double xx = std::min(std::max(x, h), 1.0 - h);
      const double d2 = (shifted_eval(n, xx + h, 1.0) - 2 * shifted_eval(n, xx, 1.0) +
                         shifted_eval(n, xx - h, 1.0)) / (h * h);
      CHECK(std::abs(shifted_caputo(n, xx, 1.0, two) - d2) < 1e-4 * std::max(1.0, std::abs(d2)));
    }
  }
}

TEST_CASE("Caputo series matches quadrature of the defining integral") {
  for (double zeta : {0.3, 0.7, 1.5}) {
    const FractionalOrder order(zeta);
    for (int n = 0; n <= 10; ++n) {
      for (int i = 1; i <= 9; ++i) {
        const double x = i / 10.0;
        const auto kth = [n, &order](double s) {
          if (order.kappa() == 1) return shifted_deriv(n, s, 1.0);
          // Differentiating P'_{k+1} = P'_{k-1} + (2k+1) P_k once more in x.
          std::vector<double> v(static_cast<std::size_t>(n) + 2), d(v.size()), dd(v.size(), 0.0);
          shifted_values_and_derivs(n + 1, s, 1.0, v, d);
          for (std::size_t k = 1; k <= static_cast<std::size_t>(n); ++k) {
            dd[k + 1] = dd[k - 1] + (2.0 * k + 1.0) * d[k] * 2.0;
          }
          return dd[static_cast<std::size_t>(n)];
        };
        const double want = caputo_oracle(kth, x, order);
        const double got = shifted_caputo(n, x, 1.0, order);
        if (n < order.kappa()) {
          CHECK(got == 0.0);
          CHECK(std::abs(want) < 1e-12);
        } else {
          CHECK_MESSAGE(rel_err(got, want) < 1e-5, "n=" << n << " zeta=" << zeta << " x=" << x);
        }
      }
    }
  }
}

TEST_CASE("caputo_oracle examples") {
  CHECK(caputo_oracle([](double s) { return 2.0 * s; }, 1.0, FractionalOrder(1.0)) == 2.0);
  const double want = std::sqrt(0.5) / std::tgamma(1.5);
  CHECK(want == doctest::Approx(0.79788).epsilon(1e-5));
  CHECK(rel_err(caputo_oracle([](double) { return 1.0; }, 0.5, FractionalOrder(0.5)), want) < 1e-12);
  // Monomials x^p with fractional p (integrand singular at s = 0).
  for (double p : {1.25, 2.5, 3.7}) {
    for (double zeta : {0.3, 0.7}) {
      const double x = 0.8;
      const double exact = std::tgamma(p + 1) / std::tgamma(p + 1 - zeta) * std::pow(x, p - zeta);
      const double got = caputo_oracle([p](double s) { return p * std::pow(s, p - 1); }, x,
                                       FractionalOrder(zeta));
      CHECK(rel_err(got, exact) < 1e-9);
    }
  }
  const double fd = caputo_oracle_fd([](double s) { return s * s * s; }, 0.5, FractionalOrder(1.5));
  const double exact = 6.0 / std::tgamma(2.5) * std::pow(0.5, 1.5);
  CHECK(rel_err(fd, exact) < 1e-5);
  CHECK(rel_err(caputo_oracle([](double s) { return shifted_deriv(3, s, 1.0); }, 0.4, FractionalOrder(0.7)),
                shifted_caputo(3, 0.4, 1.0, FractionalOrder(0.7))) < 1e-6);
}

TEST_CASE("modified basis boundary conditions") {
  const auto dir = BasisSpec::dirichlet(1.0, 12);
  const auto dir3 = BasisSpec::dirichlet(3.0, 12);
  const auto neu = BasisSpec::neumann(1.0, 12);
  const auto neu2 = BasisSpec::neumann(2.0, 12);
  for (int n = 0; n <= 11; ++n) {
    CHECK(dir.modification(n).a == 0.0);
    CHECK(dir.modification(n).b == -1.0);
    CHECK(std::abs(modified_eval(dir, n, 0.0)) < 1e-12);
    CHECK(std::abs(modified_eval(dir, n, 1.0)) < 1e-12);
    CHECK(std::abs(modified_eval(dir3, n, 0.0)) < 1e-12);
    CHECK(std::abs(modified_eval(dir3, n, 3.0)) < 1e-12);
    CHECK(neu.modification(n).b == doctest::Approx(-n * (n + 1.0) / ((n + 2.0) * (n + 3.0))));
    CHECK(std::abs(modified_deriv(neu, n, 0.0)) < 1e-10);
    CHECK(std::abs(modified_deriv(neu, n, 1.0)) < 1e-10);
    CHECK(std::abs(modified_deriv(neu2, n, 0.0)) < 1e-10);
    CHECK(std::abs(modified_deriv(neu2, n, 2.0)) < 1e-10);
  }
  CHECK(modified_deriv(BasisSpec::neumann(1.0, 4), 1, 0.0) == doctest::Approx(0.0));
  CHECK(modified_eval(neu, 0, 0.3) == 1.0);
  CHECK_THROWS_AS(dir.modification(-1), std::domain_error);
  CHECK_THROWS_AS(modified_eval(dir, 12, 0.5), std::domain_error);
  CHECK_THROWS_AS(BasisSpec::dirichlet(1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(BasisSpec::dirichlet(-1.0, 5), std::invalid_argument);
}

TEST_CASE("modified Caputo derivative is the same combination of shifted ones") {
  const auto neu = BasisSpec::neumann(1.0, 10);
  const FractionalOrder z(0.7);
  for (int n = 0; n <= 9; ++n) {
    for (double x : {0.05, 0.5, 0.95}) {
      const auto& m = neu.modification(n);
      const double combo = shifted_caputo(n, x, 1.0, z) + m.a * shifted_caputo(n + 1, x, 1.0, z) +
                           m.b * shifted_caputo(n + 2, x, 1.0, z);
      CHECK(modified_caputo(neu, n, x, z) == combo);
    }
  }
}

TEST_CASE("tabulate agrees with pointwise evaluation") {
  const auto spec = BasisSpec::dirichlet(2.0, 8);
  const FractionalOrder z(0.7);
  const std::vector<double> pts{0.0, 0.3, 1.1, 2.0};
  const BasisTable t = tabulate(spec, pts, z);
  REQUIRE(t.value.rows() == 4);
  REQUIRE(t.value.cols() == 7);
  for (int q = 0; q < 4; ++q) {
    for (int n = 0; n <= 6; ++n) {
      CHECK(t.value(q, n) == doctest::Approx(modified_eval(spec, n, pts[q])).epsilon(1e-14));
      CHECK(t.deriv(q, n) == doctest::Approx(modified_deriv(spec, n, pts[q])).epsilon(1e-14));
      CHECK(t.caputo(q, n) == modified_caputo(spec, n, pts[q], z));
    }
  }
  CHECK(tabulate(spec, pts).caputo.size() == 0);
}

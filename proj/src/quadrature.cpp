#include "fracspec/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fracspec {

namespace {

constexpr double kNewtonTolerance = 1e-14;
constexpr int kNewtonMaxIterations = 100;

// Legendre P_m and P_m' on [-1, 1].
void legendre_with_derivative(int m, double y, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = y;
  if (m == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 1; k < m; ++k) {
    const double p2 = ((2.0 * k + 1.0) * y * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  // Interior nodes only, so 1 - y^2 > 0.
  dp = m * (p0 - y * p1) / (1.0 - y * y);
}

}  // namespace

QuadratureRule gauss_legendre_rule(int m, double a, double b) {
  if (m < 1) throw std::invalid_argument("quadrature: degree must be >= 1");
  if (!(b > a)) throw std::invalid_argument("quadrature: empty interval");

  QuadratureRule rule;
  rule.degree = m;
  rule.domain_length = b - a;
  rule.nodes.assign(static_cast<std::size_t>(m), 0.0);
  rule.weights.assign(static_cast<std::size_t>(m), 0.0);

  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const int pairs = (m + 1) / 2;
  for (int i = 0; i < pairs; ++i) {
    double y = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double p = 0.0;
    double dp = 0.0;
    bool converged = false;
    for (int it = 0; it < kNewtonMaxIterations; ++it) {
      legendre_with_derivative(m, y, p, dp);
      const double step = p / dp;
      y -= step;
      if (std::abs(step) <= kNewtonTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw std::runtime_error("quadrature: Newton iteration did not converge for m = " +
                               std::to_string(m));
    }
    legendre_with_derivative(m, y, p, dp);
    const double w = 2.0 / ((1.0 - y * y) * dp * dp) * half;
    // y is the i-th largest root; mirror it so the rule is exactly symmetric.
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(m - 1 - i);
    if (lo == hi) {
      rule.nodes[lo] = mid;
    } else {
      rule.nodes[lo] = mid - half * y;
      rule.nodes[hi] = mid + half * y;
    }
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

QuadratureRule gauss_legendre_rule(int m, double X) {
  if (!(X > 0.0)) throw std::invalid_argument("quadrature: domain length must be positive");
  return gauss_legendre_rule(m, 0.0, X);
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * g(rule.nodes[i]);
  return s;
}

}  // namespace fracspec

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fracspec {

/// Gauss-Legendre rule on [0, X]. Nodes ascending, weights positive; exact for
/// polynomials of degree <= 2 * degree - 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int degree = 0;
  double domain_length = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Roots of Phat_m on [0, X] by Newton iteration on the recurrence, started
/// from Chebyshev-like guesses, converged to 1e-14.
QuadratureRule gauss_legendre_rule(int m, double X);

/// Same rule mapped onto [a, b].
QuadratureRule gauss_legendre_rule(int m, double a, double b);

/// sum_i w_i g(x_i)
double integrate(const QuadratureRule& rule, const std::function<double(double)>& g);

}  // namespace fracspec

#pragma once

// Shifted Legendre polynomials on [0, X], the boundary-adapted combinations
//   P_n = Phat_n + a_n Phat_{n+1} + b_n Phat_{n+2},
// and their first and Caputo fractional derivatives.
//
// Values and first derivatives come from the three-term recurrence. The
// Caputo derivative has no recurrence and is summed from the explicit
// monomial series, which loses digits to cancellation as n grows; it is
// reliable to ~1e-11 relative for n <= 12.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracspec/types.hpp"

namespace fracspec {

/// Caputo order zeta > 0 with kappa = ceil(zeta), so kappa - 1 < zeta <= kappa.
class FractionalOrder {
 public:
  explicit FractionalOrder(double zeta);

  double zeta() const noexcept { return zeta_; }
  int kappa() const noexcept { return kappa_; }
  bool is_integer() const noexcept { return static_cast<double>(kappa_) == zeta_; }

 private:
  double zeta_;
  int kappa_;
};

enum class BoundaryKind { dirichlet, neumann };

struct Modification {
  double a = 0.0;
  double b = 0.0;
};

/// A directional basis on [0, domain_length]. The trial space is
/// span{P_0, ..., P_{count-2}}: for Dirichlet this is every polynomial of
/// degree <= count vanishing at both ends. P_{count-1} can still be evaluated.
class BasisSpec {
 public:
  BasisSpec(double domain_length, int count, BoundaryKind kind);

  static BasisSpec dirichlet(double domain_length, int count) {
    return {domain_length, count, BoundaryKind::dirichlet};
  }
  static BasisSpec neumann(double domain_length, int count) {
    return {domain_length, count, BoundaryKind::neumann};
  }

  double domain_length() const noexcept { return length_; }
  int count() const noexcept { return count_; }
  /// Number of trial functions, count - 1.
  std::size_t size() const noexcept { return static_cast<std::size_t>(count_ - 1); }
  BoundaryKind kind() const noexcept { return kind_; }
  /// Constants (a_n, b_n) for 0 <= n <= count - 1.
  const Modification& modification(int n) const;

 private:
  double length_;
  int count_;
  BoundaryKind kind_;
  std::vector<Modification> mods_;
};

namespace legendre {

double shifted_eval(int n, double x, double X);
double shifted_deriv(int n, double x, double X);
double shifted_caputo(int n, double x, double X, const FractionalOrder& zeta);

/// Phat_0..Phat_{nmax} at x; out.size() must be nmax + 1.
void shifted_values(int nmax, double x, double X, std::span<double> out);
/// Values and first derivatives of Phat_0..Phat_{nmax} at x.
void shifted_values_and_derivs(int nmax, double x, double X,
                               std::span<double> values, std::span<double> derivs);

double modified_eval(const BasisSpec& spec, int n, double x);
double modified_deriv(const BasisSpec& spec, int n, double x);
double modified_caputo(const BasisSpec& spec, int n, double x,
                       const FractionalOrder& zeta);

/// Explicit series sum_k (-1)^{n+k} (n+k)! (x/X)^k / ((n-k)! (k!)^2).
/// Templated so that tests can evaluate it in extended precision.
template <class T>
T shifted_eval_series(int n, T x, T X) {
  if (n < 0) throw std::domain_error("legendre: negative degree");
  const T y = x / X;
  T coeff = 1;  // (n+k)! / ((n-k)! (k!)^2) at k = 0
  T power = 1;
  T sum = 0;
  for (int k = 0; k <= n; ++k) {
    const T term = coeff * power;
    sum += ((n + k) % 2 == 0) ? term : -term;
    coeff = coeff * T(n + k + 1) * T(n - k) / (T(k + 1) * T(k + 1));
    power *= y;
  }
  return sum;
}

/// Series for the first derivative, sum_{k>=1} (-1)^{n+k} k (n+k)! x^{k-1} / (X^k (n-k)! (k!)^2).
template <class T>
T shifted_deriv_series(int n, T x, T X) {
  if (n < 0) throw std::domain_error("legendre: negative degree");
  const T y = x / X;
  T coeff = 1;
  T power = 1;  // y^{k-1}
  T sum = 0;
  for (int k = 0; k <= n; ++k) {
    if (k >= 1) {
      const T term = T(k) * coeff * power / X;
      sum += ((n + k) % 2 == 0) ? term : -term;
      power *= y;
    }
    coeff = coeff * T(n + k + 1) * T(n - k) / (T(k + 1) * T(k + 1));
  }
  return sum;
}

/// Trial functions at a set of points: row q, column k holds P_k(points[q]).
struct BasisTable {
  Matrix value;
  Matrix deriv;
  Matrix caputo;  // empty unless an order was supplied
};

BasisTable tabulate(const BasisSpec& spec, std::span<const double> points);
BasisTable tabulate(const BasisSpec& spec, std::span<const double> points,
                    const FractionalOrder& zeta);

/// Caputo derivative by direct quadrature of its defining integral,
///   (1/Gamma(kappa-zeta)) int_0^x (x-s)^{kappa-zeta-1} g^{(kappa)}(s) ds.
/// `kth_derivative` is g^{(kappa)}. The kernel singularity is removed with
/// s = x (1 - u^{1/(kappa-zeta)}) and the remaining integral over u in [0, 1]
/// uses composite Gauss-Legendre panels graded geometrically toward both ends,
/// which also resolves algebraic endpoint behaviour of g^{(kappa)} near s = 0.
/// Relative accuracy is better than 1e-9 for smooth g. Integer zeta returns
/// g^{(kappa)}(x). Test oracle only; the solver never calls it.
double caputo_oracle(const std::function<double(double)>& kth_derivative, double x,
                     const FractionalOrder& zeta);

/// Same, with g^{(kappa)} estimated by nested central differences of g
/// (one-sided near s = 0). Accuracy is limited to roughly 1e-6.
double caputo_oracle_fd(const std::function<double(double)>& g, double x,
                        const FractionalOrder& zeta);

}  // namespace legendre
}  // namespace fracspec

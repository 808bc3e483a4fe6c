#include "fracspec/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracspec {

FractionalOrder::FractionalOrder(double zeta) : zeta_(zeta), kappa_(0) {
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw std::invalid_argument("fractional order must be a positive finite number");
  }
  kappa_ = static_cast<int>(std::ceil(zeta));
}

BasisSpec::BasisSpec(double domain_length, int count, BoundaryKind kind)
    : length_(domain_length), count_(count), kind_(kind) {
  if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
    throw std::invalid_argument("basis: domain length must be positive");
  }
  if (count < 3) throw std::invalid_argument("basis: count must be >= 3");
  mods_.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n <= count - 1; ++n) {
    Modification m;
    m.a = 0.0;
    if (kind == BoundaryKind::dirichlet) {
      m.b = -1.0;
    } else {
      const double nn = n;
      m.b = -nn * (nn + 1.0) / ((nn + 2.0) * (nn + 3.0));
    }
    mods_.push_back(m);
  }
}

const Modification& BasisSpec::modification(int n) const {
  if (n < 0 || n > count_ - 1) {
    throw std::domain_error("basis: index " + std::to_string(n) + " outside 0.." +
                            std::to_string(count_ - 1));
  }
  return mods_[static_cast<std::size_t>(n)];
}

namespace legendre {

namespace {

void check_args(int n, double x, double X) {
  if (n < 0) throw std::domain_error("legendre: negative degree");
  if (!(X > 0.0)) throw std::domain_error("legendre: domain length must be positive");
  const double slack = 1e-12 * X;
  if (!(x >= -slack && x <= X + slack)) {
    throw std::domain_error("legendre: point " + std::to_string(x) + " outside [0, X]");
  }
}

}  // namespace

void shifted_values(int nmax, double x, double X, std::span<double> out) {
  const double y = 2.0 * x / X - 1.0;
  out[0] = 1.0;
  if (nmax >= 1) out[1] = y;
  for (int k = 1; k < nmax; ++k) {
    const auto i = static_cast<std::size_t>(k);
    out[i + 1] = ((2.0 * k + 1.0) * y * out[i] - k * out[i - 1]) / (k + 1.0);
  }
}

void shifted_values_and_derivs(int nmax, double x, double X, std::span<double> values,
                               std::span<double> derivs) {
  shifted_values(nmax, x, X, values);
  // d/dy: P'_{k+1} = P'_{k-1} + (2k+1) P_k, then chain rule dy/dx = 2/X.
  derivs[0] = 0.0;
  if (nmax >= 1) derivs[1] = 1.0;
  for (int k = 1; k < nmax; ++k) {
    const auto i = static_cast<std::size_t>(k);
    derivs[i + 1] = derivs[i - 1] + (2.0 * k + 1.0) * values[i];
  }
  const double scale = 2.0 / X;
  for (int k = 0; k <= nmax; ++k) derivs[static_cast<std::size_t>(k)] *= scale;
}

double shifted_eval(int n, double x, double X) {
  check_args(n, x, X);
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  shifted_values(n, x, X, v);
  return v.back();
}

double shifted_deriv(int n, double x, double X) {
  check_args(n, x, X);
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  std::vector<double> d(static_cast<std::size_t>(n) + 1);
  shifted_values_and_derivs(n, x, X, v, d);
  return d.back();
}

double shifted_caputo(int n, double x, double X, const FractionalOrder& order) {
  if (n < 0) throw std::domain_error("legendre: negative degree");
  if (!(X > 0.0)) throw std::domain_error("legendre: domain length must be positive");
  if (x < 0.0) throw std::domain_error("legendre: Caputo derivative needs x >= 0");

  const double zeta = order.zeta();
  const int first = order.kappa();
  if (first > n) return 0.0;

  // coeff_k = (n+k)! / ((n-k)! (k!)^2), built up as exact integer products.
  double coeff = 1.0;
  for (int k = 0; k < first; ++k) {
    coeff = coeff * (n + k + 1.0) * (n - k) / ((k + 1.0) * (k + 1.0));
  }
  // x^{k-zeta} / X^k, advanced by x/X per term. At x = 0 only a k = zeta term
  // (integer order) survives, through pow(0, 0) = 1.
  double power = std::pow(x, first - zeta) / std::pow(X, first);
  const double ratio = x / X;

  double sum = 0.0;
  for (int k = first; k <= n; ++k) {
    // (-1)^{n+k} coeff_k * Gamma(k+1) / Gamma(k+1-zeta) * x^{k-zeta} / X^k;
    // k + 1 - zeta > 0 here, so the log-gamma difference carries no sign.
    const double gamma_ratio = std::exp(std::lgamma(k + 1.0) - std::lgamma(k + 1.0 - zeta));
    const double term = coeff * gamma_ratio * power;
    sum += ((n + k) % 2 == 0) ? term : -term;
    coeff = coeff * (n + k + 1.0) * (n - k) / ((k + 1.0) * (k + 1.0));
    power *= ratio;
  }
  return sum;
}

double modified_eval(const BasisSpec& spec, int n, double x) {
  const Modification& m = spec.modification(n);
  const double X = spec.domain_length();
  check_args(n, x, X);
  std::vector<double> v(static_cast<std::size_t>(n) + 3);
  shifted_values(n + 2, x, X, v);
  const auto i = static_cast<std::size_t>(n);
  return v[i] + m.a * v[i + 1] + m.b * v[i + 2];
}

double modified_deriv(const BasisSpec& spec, int n, double x) {
  const Modification& m = spec.modification(n);
  const double X = spec.domain_length();
  check_args(n, x, X);
  std::vector<double> v(static_cast<std::size_t>(n) + 3);
  std::vector<double> d(static_cast<std::size_t>(n) + 3);
  shifted_values_and_derivs(n + 2, x, X, v, d);
  const auto i = static_cast<std::size_t>(n);
  return d[i] + m.a * d[i + 1] + m.b * d[i + 2];
}

double modified_caputo(const BasisSpec& spec, int n, double x, const FractionalOrder& zeta) {
  const Modification& m = spec.modification(n);
  const double X = spec.domain_length();
  return shifted_caputo(n, x, X, zeta) + m.a * shifted_caputo(n + 1, x, X, zeta) +
         m.b * shifted_caputo(n + 2, x, X, zeta);
}

namespace {

BasisTable tabulate_impl(const BasisSpec& spec, std::span<const double> points,
                         const FractionalOrder* zeta) {
  const int top = spec.count();  // P_{count-2} reaches Phat_{count}
  const auto rows = static_cast<Eigen::Index>(points.size());
  const auto cols = static_cast<Eigen::Index>(spec.size());
  const double X = spec.domain_length();

  BasisTable t;
  t.value.resize(rows, cols);
  t.deriv.resize(rows, cols);
  if (zeta != nullptr) t.caputo.resize(rows, cols);

  std::vector<double> v(static_cast<std::size_t>(top) + 1);
  std::vector<double> d(static_cast<std::size_t>(top) + 1);
  std::vector<double> c(static_cast<std::size_t>(top) + 1);
  for (Eigen::Index q = 0; q < rows; ++q) {
    const double x = points[static_cast<std::size_t>(q)];
    check_args(0, x, X);
    shifted_values_and_derivs(top, x, X, v, d);
    if (zeta != nullptr) {
      for (int n = 0; n <= top; ++n) c[static_cast<std::size_t>(n)] = shifted_caputo(n, x, X, *zeta);
    }
    for (int n = 0; n <= spec.count() - 2; ++n) {
      const Modification& m = spec.modification(n);
      const auto i = static_cast<std::size_t>(n);
      const Eigen::Index col = n;
      t.value(q, col) = v[i] + m.a * v[i + 1] + m.b * v[i + 2];
      t.deriv(q, col) = d[i] + m.a * d[i + 1] + m.b * d[i + 2];
      if (zeta != nullptr) t.caputo(q, col) = c[i] + m.a * c[i + 1] + m.b * c[i + 2];
    }
  }
  return t;
}

}  // namespace

BasisTable tabulate(const BasisSpec& spec, std::span<const double> points) {
  return tabulate_impl(spec, points, nullptr);
}

BasisTable tabulate(const BasisSpec& spec, std::span<const double> points,
                    const FractionalOrder& zeta) {
  return tabulate_impl(spec, points, &zeta);
}

}  // namespace legendre
}  // namespace fracspec

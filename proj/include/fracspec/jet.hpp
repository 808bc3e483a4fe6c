#pragma once

// Second-order forward-mode number: value, first and second derivative along
// one seeded direction. Used to differentiate exact solutions for the
// strong-form checks; the solver itself never needs it.

#include <cmath>
#include <stdexcept>

namespace fracspec {

struct Jet {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: implicit constants are the point
  constexpr Jet(double value, double d1, double d2) : v(value), d(d1), dd(d2) {}

  static constexpr Jet variable(double x) { return {x, 1.0, 0.0}; }
  constexpr bool is_constant() const { return d == 0.0 && dd == 0.0; }
};

namespace jet_detail {

// f(u) given f, f', f'' at u.v. Skips terms whose seed is zero so that
// infinite derivatives (x^p at 0) do not turn constants into NaN.
inline Jet chain(const Jet& u, double f0, double f1, double f2) {
  Jet r(f0);
  if (u.d != 0.0) {
    r.d = f1 * u.d;
    r.dd = f2 * u.d * u.d;
  }
  if (u.dd != 0.0) r.dd += f1 * u.dd;
  return r;
}

}  // namespace jet_detail

inline Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
inline Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
inline Jet operator-(const Jet& a) { return {-a.v, -a.d, -a.dd}; }
inline Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
inline Jet operator/(const Jet& a, const Jet& b) {
  const double i = 1.0 / b.v;
  return a * jet_detail::chain(b, i, -i * i, 2.0 * i * i * i);
}
inline Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
inline Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet sin(const Jet& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return jet_detail::chain(u, s, c, -s);
}
inline Jet cos(const Jet& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return jet_detail::chain(u, c, -s, -c);
}
inline Jet exp(const Jet& u) {
  const double e = std::exp(u.v);
  return jet_detail::chain(u, e, e, e);
}
inline Jet log(const Jet& u) { return jet_detail::chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v)); }
inline Jet sqrt(const Jet& u) {
  const double s = std::sqrt(u.v);
  return jet_detail::chain(u, s, 0.5 / s, -0.25 / (s * u.v));
}
inline Jet pow(const Jet& u, double p) {
  if (p == 0.0) return Jet(1.0);
  const double f0 = std::pow(u.v, p);
  if (u.is_constant()) return Jet(f0);
  return jet_detail::chain(u, f0, p * std::pow(u.v, p - 1.0), p * (p - 1.0) * std::pow(u.v, p - 2.0));
}
inline Jet pow(const Jet& u, const Jet& p) {
  if (p.is_constant()) return pow(u, p.v);
  return exp(p * log(u));
}
/// Gamma is only needed of parameters, never of the differentiated variable.
inline Jet tgamma(const Jet& u) {
  if (!u.is_constant()) throw std::domain_error("gamma of a differentiated variable is not supported");
  return Jet(std::tgamma(u.v));
}

}  // namespace fracspec

#include "fracspec/problems.hpp"

#include <cmath>

#include "fracspec/quadrature.hpp"

namespace fracspec {

namespace {

using std::tgamma;

ProblemSpec linear1d() {
  ProblemSpec p;
  p.name = "linear1d";
  p.dim = 1;
  p.zeta = FractionalOrder(1.5);
  p.advection = 1.0;
  p.exact = [](const Jet& x, const Jet&, const ParamVector& u) { return u[0] * (1.0 - x) * pow(x, u[1]); };
  p.forcing1d = [](double x, const ParamVector& u) {
    const double m1 = u[0], m2 = u[1], z = 1.5;
    return -m1 * m2 * tgamma(m2) * (z + (m2 + 1) * (x - 1)) * std::pow(x, m2 - z) / tgamma(m2 + 2 - z) +
           m1 * m2 * (1 - x) * std::pow(x, m2 - 1) - m1 * std::pow(x, m2);
  };
  p.sampler = ParameterSampler::uniform({{3.0, 5.0}, {3.0, 5.0}});
  p.defaults = {.basis_count = 10, .quad_degree = 10, .hidden = 16, .samples = 500, .epochs = 500, .adam_epochs = 300};
  return p;
}

ProblemSpec heat(double X, const std::string& name) {
  ProblemSpec p;
  p.name = name;
  p.dim = 2;
  p.zeta = FractionalOrder(0.7);
  p.X = X;
  p.T = 1.0;
  p.diffusion = 1.0;
  const double C = 5.0, T = p.T;
  p.exact = [C, X, T](const Jet& t, const Jet& x, const ParamVector& u) {
    return u[0] * C * (T - t) * (X - x) * x * pow(t, u[1]);
  };
  p.forcing2d = [C, X, T](double t, double x, const ParamVector& u) {
    const double m1 = u[0], m2 = u[1], z = 0.7;
    return m1 * std::pow(t, m2) * C *
           (-x * std::pow(t, -z) * tgamma(m2 + 1) * (X - x) * (T * (z - m2 - 1) + m2 * t + t) /
                tgamma(-z + m2 + 2) +
            2 * T - 2 * t);
  };
  p.sampler = ParameterSampler::uniform({{5.0, 7.0}, {5.0, 7.0}});
  p.defaults = {.basis_count = 10, .quad_degree = 10, .hidden = 4, .samples = 300, .epochs = 500, .adam_epochs = 300};
  return p;
}

ProblemSpec adv_diff(double X, double T, double C, const std::string& name) {
  ProblemSpec p;
  p.name = name;
  p.dim = 2;
  p.zeta = FractionalOrder(0.7);
  p.X = X;
  p.T = T;
  const double v = 1.0, mu = 0.1;
  p.diffusion = v;
  p.drift = [mu](const ParamVector&) { return mu; };
  p.consistent = false;
  p.exact = [C, X, T](const Jet& t, const Jet& x, const ParamVector& u) {
    return C * (T - t) * pow(t, u[1]) * sin(u[0] * (X - x) * x);
  };
  // Transcribed as printed; the mu term does not match mu z_x of the exact solution.
  p.forcing2d = [C, X, T, v, mu](double t, double x, const ParamVector& u) {
    const double m1 = u[0], m2 = u[1], z = 0.7;
    const double s = std::sin(m1 * x * (X - x));
    const double c = std::cos(m1 * x * (X - x));
    const double s_printed = std::sin(m1 * t * (X - x));
    return C * std::pow(t, m2) *
           (-std::pow(t, -z) * tgamma(m2 + 1) * (T * (z - m2 - 1) + (m2 + 1) * t) * s / tgamma(-z + m2 + 2) +
            mu * std::pow(t, m2) * (t - T) * (t - T) * s_printed * s_printed +
            m1 * v * (T - t) * (m1 * (X - 2 * x) * (X - 2 * x) * s + 2 * c));
  };
  p.sampler = ParameterSampler::uniform({{1.0, 1.5}, {1.0, 1.5}});
  p.defaults = {.basis_count = 10, .quad_degree = 20, .hidden = 16, .samples = 100, .epochs = 5000, .adam_epochs = 3000};
  return p;
}

ProblemSpec advection_const() {
  ProblemSpec p;
  p.name = "advection_const";
  p.dim = 2;
  p.zeta = FractionalOrder(0.7);
  p.drift = [](const ParamVector& u) { return -u[0]; };
  // Upsilon = (a, m1)
  p.exact = [](const Jet& t, const Jet& x, const ParamVector& u) {
    return std::pow(20.0, u[0]) * (1.0 - t) * pow(t, u[1]) * sin(u[0] * (1.0 - x) * x);
  };
  p.forcing2d = [](double t, double x, const ParamVector& u) {
    const double a = u[0], m1 = u[1], z = 0.7;
    return std::pow(20.0, a) * std::pow(t, m1) *
           (std::pow(t, -z) * tgamma(m1 + 1) * (z + (m1 + 1) * (t - 1)) * std::sin(a * (x - 1) * x) /
                tgamma(-z + m1 + 2) -
            a * a * (t - 1) * (2 * x - 1) * std::cos(a * (x - 1) * x));
  };
  p.sampler = ParameterSampler::uniform({{1.0, 1.5}, {1.0, 1.5}});
  p.defaults = {.basis_count = 10, .quad_degree = 15, .hidden = 16, .samples = 100, .epochs = 500, .adam_epochs = 0};
  return p;
}

ProblemSpec advection_var() {
  ProblemSpec p;
  p.name = "advection_var";
  p.dim = 2;
  p.zeta = FractionalOrder(0.7);
  const int N = 10;
  const int m = 20;
  p.sampler = ParameterSampler::grf(N, 1.0 / ((N + 1.0) * (N + 1.0)), 1.0,
                                    gauss_legendre_rule(m, 1.0).nodes);
  const ParameterSampler field = p.sampler;
  p.drift = [](const ParamVector&) { return -1.0; };
  p.drift_profile = [field](double t, const ParamVector& c) { return grf_value(field, c, t); };
  p.exact = [](const Jet& t, const Jet& x, const ParamVector&) {
    return 200.0 * (1.0 - t) * t * t * (1.0 - x) * x * sin(x);
  };
  p.forcing2d = [field](double t, double x, const ParamVector& c) {
    const double z = 0.7;
    const double a = grf_value(field, c, t);
    return 200.0 * (2 * (x - 1) * x * std::pow(t, 2 - z) * (z + 3 * t - 3) * std::sin(x) / tgamma(4 - z) -
                    a * (t - 1) * t * t * ((2 * x - 1) * std::sin(x) + (x - 1) * x * std::cos(x)));
  };
  p.defaults = {.basis_count = N, .quad_degree = m, .hidden = 16, .samples = 100, .epochs = 500, .adam_epochs = 0};
  return p;
}

// D^zeta z + z^3 = f with z = m1 (1 - x) x^2.
ProblemSpec cubic1d() {
  ProblemSpec p;
  p.name = "cubic1d";
  p.dim = 1;
  p.zeta = FractionalOrder(0.6);
  p.nonlinearity = Nonlinearity{[](double z) { return z * z * z; }, [](double z) { return 3 * z * z; }};
  p.exact = [](const Jet& x, const Jet&, const ParamVector& u) { return u[0] * (1.0 - x) * x * x; };
  p.forcing1d = [](double x, const ParamVector& u) {
    const double m1 = u[0], z = 0.6;
    const double e = m1 * (1 - x) * x * x;
    return m1 * (2 * std::pow(x, 2 - z) / tgamma(3 - z) - 6 * std::pow(x, 3 - z) / tgamma(4 - z)) + e * e * e;
  };
  p.sampler = ParameterSampler::uniform({{1.0, 2.0}});
  p.defaults = {.basis_count = 8, .quad_degree = 12, .hidden = 16, .samples = 100, .epochs = 300, .adam_epochs = 200};
  return p;
}

}  // namespace

void ProblemSpec::set_quad_degree(int m) {
  defaults.quad_degree = m;
  if (sampler.kind == ParameterSampler::Kind::gaussian_random_field) {
    sampler.feature_nodes = gauss_legendre_rule(m, sampler.grf_length).nodes;
  }
}

std::vector<std::string> problem_names() {
  return {"linear1d", "heat", "heat_long", "adv_diff", "adv_diff_long", "advection_const", "advection_var",
          "cubic1d"};
}

ProblemSpec registry_get(const std::string& name) {
  if (name == "linear1d") return linear1d();
  if (name == "heat") return heat(1.0, name);
  if (name == "heat_long") return heat(5.0, name);
  if (name == "adv_diff") return adv_diff(1.0, 1.0, 20.0, name);
  if (name == "adv_diff_long") return adv_diff(4.0, 10.0, 0.01, name);
  if (name == "advection_const") return advection_const();
  if (name == "advection_var") return advection_var();
  if (name == "cubic1d") return cubic1d();
  std::string known;
  for (const auto& n : problem_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown problem '" + name + "' (known: " + known + ")");
}

double exact_value(const ProblemSpec& p, double x1, double x2, const ParamVector& params) {
  return p.exact(Jet(x1), Jet(x2), params).v;
}

double strong_residual(const ProblemSpec& p, double x1, double x2, const ParamVector& params) {
  if (p.zeta.kappa() > 2) throw InputError("strong_residual: orders above 2 unsupported");
  const bool second = p.zeta.kappa() == 2;
  const auto kth = [&](double s) {
    const Jet z = p.exact(Jet::variable(s), Jet(x2), params);
    return second ? z.dd : z.d;
  };
  const double caputo = legendre::caputo_oracle(kth, x1, p.zeta);
  if (p.dim == 1) {
    const Jet z = p.exact(Jet::variable(x1), Jet(0.0), params);
    double r = caputo + p.advection * z.d - p.forcing1d(x1, params);
    if (p.nonlinearity) r += p.nonlinearity->value(z.v);
    return r;
  }
  const Jet zx = p.exact(Jet(x1), Jet::variable(x2), params);
  double drift = p.drift ? p.drift(params) : 0.0;
  if (p.drift_profile) drift *= p.drift_profile(x1, params);
  return caputo - p.diffusion * zx.dd + drift * zx.d - p.forcing2d(x1, x2, params);
}

std::size_t Discretization::output_dim() const {
  if (sys1d) return sys1d->size();
  return sys2d->nt() * sys2d->ns();
}

Discretization discretize(const ProblemSpec& p, int basis_count, int quad_degree) {
  if (basis_count < 3) throw ConfigError("basis count must be >= 3");
  if (quad_degree < 1) throw ConfigError("quadrature degree must be >= 1");
  Discretization d;
  d.basis_count = basis_count;
  d.quad_degree = quad_degree;
  if (p.dim == 1) {
    d.sys1d = assemble_1d(BasisSpec::dirichlet(p.X, basis_count), p.zeta,
                          gauss_legendre_rule(quad_degree, p.X));
  } else {
    d.sys2d = assemble_2d(BasisSpec::dirichlet(p.T, basis_count), BasisSpec::dirichlet(p.X, basis_count),
                          p.zeta, gauss_legendre_rule(quad_degree, p.T),
                          gauss_legendre_rule(quad_degree, p.X));
  }
  return d;
}

Vector assemble_source(const ProblemSpec& p, const Discretization& d, const ParamVector& params) {
  if (p.dim == 1) return assemble_source_1d(*d.sys1d, p.forcing1d, params);
  return assemble_source_2d(*d.sys2d, p.forcing2d, params);
}

Operator2D operator_for(const ProblemSpec& p, const Discretization& d, const ParamVector& params) {
  Coefficients2D c;
  c.diffusion = p.diffusion;
  c.drift = p.drift ? p.drift(params) : 0.0;
  if (p.drift_profile && c.drift != 0.0) {
    for (double t : d.sys2d->time.rule.nodes) c.drift_profile.push_back(p.drift_profile(t, params));
  }
  return operator_2d(*d.sys2d, c);
}

Vector direct_solve(const ProblemSpec& p, const Discretization& d, const ParamVector& params) {
  const Vector F = assemble_source(p, d, params);
  Matrix A;
  if (p.dim == 1) {
    A = d.sys1d->H + p.advection * d.sys1d->M;
  } else {
    A = operator_for(p, d, params).materialize();
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (!(lu.rcond() > 1e-14)) throw TrainingError("direct solve: singular Galerkin system");
  Vector omega = lu.solve(F);
  if (!p.nonlinearity) return omega;

  // Newton from the linear solution.
  for (int it = 0; it < 50; ++it) {
    const Vector r = residual_nonlinear(*d.sys1d, p.advection, *p.nonlinearity, omega, F);
    if (r.cwiseAbs().maxCoeff() < 1e-13 * std::max(1.0, F.cwiseAbs().maxCoeff())) return omega;
    const Matrix J = jacobian_nonlinear(*d.sys1d, p.advection, *p.nonlinearity, omega);
    omega -= Eigen::PartialPivLU<Eigen::MatrixXd>(J).solve(r);
    if (!omega.allFinite()) break;
  }
  throw TrainingError("direct solve: Newton iteration did not converge");
}

namespace {

legendre::BasisTable table_on(const BasisSpec& b, std::span<const double> pts) {
  for (double x : pts) {
    if (!(x >= 0.0 && x <= b.domain_length())) {
      throw InputError("surrogate: point " + std::to_string(x) + " outside [0, " +
                       std::to_string(b.domain_length()) + "]");
    }
  }
  return legendre::tabulate(b, pts);
}

}  // namespace

std::vector<double> evaluate_surrogate(const ProblemSpec& p, int basis_count, const Vector& omega,
                                       std::span<const double> xs) {
  if (p.dim != 1) throw InputError("surrogate: 2-D problem needs a tensor grid");
  const auto t = table_on(BasisSpec::dirichlet(p.X, basis_count), xs);
  if (omega.size() != t.value.cols()) throw InputError("surrogate: coefficient count mismatch");
  const Vector z = t.value * omega;
  return {z.data(), z.data() + z.size()};
}

std::vector<double> evaluate_surrogate(const ProblemSpec& p, int basis_count, const Vector& omega,
                                       std::span<const double> ts, std::span<const double> xs) {
  if (p.dim != 2) throw InputError("surrogate: 1-D problem takes a single grid");
  const auto tt = table_on(BasisSpec::dirichlet(p.T, basis_count), ts);
  const auto tx = table_on(BasisSpec::dirichlet(p.X, basis_count), xs);
  const Eigen::Index n = tt.value.cols();
  if (omega.size() != n * n) throw InputError("surrogate: coefficient count mismatch");
  const Eigen::Map<const Matrix> Om(omega.data(), n, n);
  const Matrix Z = tt.value * Om * tx.value.transpose();
  return {Z.data(), Z.data() + Z.size()};
}

std::vector<double> evaluate_surrogate(const ProblemSpec& p, int basis_count, const Mlp& model,
                                       const ParamVector& params, std::span<const double> ts,
                                       std::span<const double> xs) {
  const Vector omega = model.forward(features_of(p.sampler, params));
  if (p.dim == 1) return evaluate_surrogate(p, basis_count, omega, ts);
  return evaluate_surrogate(p, basis_count, omega, ts, xs);
}

}  // namespace fracspec

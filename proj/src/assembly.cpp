#include "fracspec/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "fracspec/kernels.hpp"

namespace fracspec {

namespace {

void check_domain(const BasisSpec& basis, const QuadratureRule& rule) {
  const double X = basis.domain_length();
  if (std::abs(rule.domain_length - X) > 1e-12 * X) {
    throw InputError("assembly: quadrature rule on [0, " + std::to_string(rule.domain_length) +
                     "] does not match basis domain [0, " + std::to_string(X) + "]");
  }
}

Eigen::Map<const Eigen::VectorXd> weights_of(const QuadratureRule& rule) {
  return {rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size())};
}

}  // namespace

AssembledSystem1D assemble_1d(const BasisSpec& basis, const FractionalOrder& zeta,
                              const QuadratureRule& rule) {
  check_domain(basis, rule);
  legendre::BasisTable table = legendre::tabulate(basis, rule.nodes, zeta);
  const auto w = weights_of(rule);
  const Matrix WP = w.asDiagonal() * table.value;
  const Matrix WD = w.asDiagonal() * table.deriv;

  AssembledSystem1D sys{
      .H = WP.transpose() * table.caputo,
      .M = WP.transpose() * table.deriv,
      .K = table.deriv.transpose() * WD,
      .Q = table.value.transpose() * WP,
      .basis = basis,
      .zeta = zeta,
      .rule = rule,
      .table = std::move(table),
  };
  return sys;
}

Matrix weighted_mass(const legendre::BasisTable& table, const QuadratureRule& rule,
                     const std::vector<double>& weight_at_nodes) {
  if (weight_at_nodes.size() != rule.size()) {
    throw InputError("weighted_mass: need one weight per quadrature node");
  }
  Eigen::VectorXd w = weights_of(rule);
  for (std::size_t q = 0; q < rule.size(); ++q) w[static_cast<Eigen::Index>(q)] *= weight_at_nodes[q];
  return table.value.transpose() * (w.asDiagonal() * table.value);
}

Vector assemble_source_1d(const AssembledSystem1D& sys, const Source1D& f,
                          const ParamVector& params) {
  const std::size_t nq = sys.rule.size();
  Eigen::VectorXd wf(static_cast<Eigen::Index>(nq));
  for (std::size_t q = 0; q < nq; ++q) {
    const double x = sys.rule.nodes[q];
    const double v = f(x, params);
    if (!std::isfinite(v)) {
      throw InputError("source: non-finite forcing at node x = " + std::to_string(x));
    }
    wf[static_cast<Eigen::Index>(q)] = sys.rule.weights[q] * v;
  }
  return sys.table.value.transpose() * wf;
}

Vector residual_linear(const AssembledSystem1D& sys, double vhat, const Vector& omega,
                       const Vector& F) {
  if (omega.size() != sys.H.cols() || F.size() != sys.H.rows()) {
    throw InputError("residual_linear: dimension mismatch");
  }
  return sys.H * omega + vhat * (sys.M * omega) - F;
}

Vector residual_nonlinear(const AssembledSystem1D& sys, double vhat, const Nonlinearity& n,
                          const Vector& omega, const Vector& F) {
  Vector r = residual_linear(sys, vhat, omega, F);
  const Eigen::VectorXd z = sys.table.value * omega;
  Eigen::VectorXd wn(z.size());
  for (Eigen::Index q = 0; q < z.size(); ++q) {
    const double v = n.value(z[q]);
    if (!std::isfinite(v)) throw InputError("residual_nonlinear: non-finite N(z)");
    wn[q] = sys.rule.weights[static_cast<std::size_t>(q)] * v;
  }
  r.noalias() += sys.table.value.transpose() * wn;
  return r;
}

Matrix jacobian_nonlinear(const AssembledSystem1D& sys, double vhat, const Nonlinearity& n,
                          const Vector& omega) {
  const Eigen::VectorXd z = sys.table.value * omega;
  Eigen::VectorXd wd(z.size());
  for (Eigen::Index q = 0; q < z.size(); ++q) {
    wd[q] = sys.rule.weights[static_cast<std::size_t>(q)] * n.deriv(z[q]);
  }
  Matrix J = sys.H + vhat * sys.M;
  J.noalias() += sys.table.value.transpose() * (wd.asDiagonal() * sys.table.value);
  return J;
}

void Operator2D::add(std::shared_ptr<const Matrix> time, std::shared_ptr<const Matrix> space,
                     double coeff) {
  if (static_cast<std::size_t>(time->rows()) != nt_ || static_cast<std::size_t>(time->cols()) != nt_ ||
      static_cast<std::size_t>(space->rows()) != ns_ || static_cast<std::size_t>(space->cols()) != ns_) {
    throw InputError("Operator2D: factor shape mismatch");
  }
  terms_.push_back({std::move(time), std::move(space), coeff});
}

Vector Operator2D::apply(const Vector& omega) const {
  if (static_cast<std::size_t>(omega.size()) != rows()) throw InputError("Operator2D: bad input size");
  const auto& k = kernels::active();
  Vector out = Vector::Zero(omega.size());
  std::vector<double> tmp(rows());
  for (const auto& t : terms_) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    kernels::gemm_nt(k, nt_, ns_, ns_, 1.0, omega.data(), t.space->data(), tmp.data());
    kernels::gemm_nn(k, nt_, nt_, ns_, t.coeff, t.time->data(), tmp.data(), out.data());
  }
  return out;
}

Vector Operator2D::apply_transpose(const Vector& r) const {
  if (static_cast<std::size_t>(r.size()) != rows()) throw InputError("Operator2D: bad input size");
  const auto& k = kernels::active();
  Vector out = Vector::Zero(r.size());
  std::vector<double> tmp(rows());
  for (const auto& t : terms_) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    kernels::gemm_nn(k, nt_, ns_, ns_, 1.0, r.data(), t.space->data(), tmp.data());
    kernels::gemm_tn(k, nt_, nt_, ns_, t.coeff, t.time->data(), tmp.data(), out.data());
  }
  return out;
}

Matrix Operator2D::materialize() const {
  const auto n = static_cast<Eigen::Index>(rows());
  const auto ns = static_cast<Eigen::Index>(ns_);
  Matrix out = Matrix::Zero(n, n);
  for (const auto& t : terms_) {
    const Matrix& A = *t.time;
    const Matrix& B = *t.space;
    for (Eigen::Index k = 0; k < A.rows(); ++k)
      for (Eigen::Index j = 0; j < A.cols(); ++j)
        out.block(k * ns, j * ns, ns, ns) += t.coeff * A(k, j) * B;
  }
  return out;
}

AssembledSystem2D assemble_2d(const BasisSpec& time_basis, const BasisSpec& space_basis,
                              const FractionalOrder& zeta, const QuadratureRule& time_rule,
                              const QuadratureRule& space_rule) {
  AssembledSystem2D sys{assemble_1d(time_basis, zeta, time_rule),
                        assemble_1d(space_basis, zeta, space_rule),
                        {}, {}, {}, {}, {}, {}};
  sys.Ht = std::make_shared<const Matrix>(sys.time.H);
  sys.Qt = std::make_shared<const Matrix>(sys.time.Q);
  sys.Mt = std::make_shared<const Matrix>(sys.time.M);
  sys.Qs = std::make_shared<const Matrix>(sys.space.Q);
  sys.Ks = std::make_shared<const Matrix>(sys.space.K);
  sys.Ms = std::make_shared<const Matrix>(sys.space.M);
  return sys;
}

Operator2D operator_2d(const AssembledSystem2D& sys, const Coefficients2D& coeffs) {
  if (coeffs.diffusion != 0.0 && (sys.time.basis.kind() != BoundaryKind::dirichlet ||
                                  sys.space.basis.kind() != BoundaryKind::dirichlet)) {
    throw InputError("operator_2d: diffusion needs Dirichlet bases");
  }
  Operator2D op(sys.nt(), sys.ns());
  op.add(sys.Ht, sys.Qs, 1.0);
  if (coeffs.diffusion != 0.0) op.add(sys.Qt, sys.Ks, coeffs.diffusion);
  if (coeffs.drift != 0.0) {
    if (coeffs.drift_profile.empty()) {
      op.add(sys.Qt, sys.Ms, coeffs.drift);
    } else {
      auto Qa = std::make_shared<const Matrix>(
          weighted_mass(sys.time.table, sys.time.rule, coeffs.drift_profile));
      op.add(std::move(Qa), sys.Ms, coeffs.drift);
    }
  }
  return op;
}

Vector assemble_source_2d(const AssembledSystem2D& sys, const Source2D& f,
                          const ParamVector& params) {
  const QuadratureRule& rt = sys.time.rule;
  const QuadratureRule& rs = sys.space.rule;
  Matrix G(static_cast<Eigen::Index>(rt.size()), static_cast<Eigen::Index>(rs.size()));
  for (std::size_t a = 0; a < rt.size(); ++a) {
    for (std::size_t b = 0; b < rs.size(); ++b) {
      const double v = f(rt.nodes[a], rs.nodes[b], params);
      if (!std::isfinite(v)) {
        throw InputError("source: non-finite forcing at node (" + std::to_string(rt.nodes[a]) +
                         ", " + std::to_string(rs.nodes[b]) + ")");
      }
      G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rt.weights[a] * rs.weights[b] * v;
    }
  }
  const Matrix F = sys.time.table.value.transpose() * G * sys.space.table.value;
  return Eigen::Map<const Vector>(F.data(), F.size());
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace fracspec

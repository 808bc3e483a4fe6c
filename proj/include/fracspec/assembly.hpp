#pragma once

// Galerkin operators of the weak form.
//
// Orientation: row k is the test function P_k, column j the trial function
// P_j, so that row k of a residual is int (L z_N - f) P_k. All integrals use
// the supplied Gauss rule; nothing here refines adaptively.
//
// In 2-D the first direction is time (Caputo derivative) and the second is
// space. A coefficient grid Omega (n_t x n_s, row-major) represents
//   z(t, x) = sum_{j,i} Omega[j][i] P_j(t) P_i(x),
// and every operator is a short sum of terms c * A Omega B^T.

#include <cstddef>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "fracspec/legendre.hpp"
#include "fracspec/quadrature.hpp"
#include "fracspec/types.hpp"

namespace fracspec {

struct AssembledSystem1D {
  Matrix H;  // int D^zeta P_j P_k
  Matrix M;  // int P_j' P_k
  Matrix K;  // int P_j' P_k'
  Matrix Q;  // int P_j P_k
  BasisSpec basis;
  FractionalOrder zeta;
  QuadratureRule rule;
  legendre::BasisTable table;  // basis at the rule nodes

  std::size_t size() const noexcept { return basis.size(); }
};

/// Throws InputError when the rule and basis live on different intervals.
AssembledSystem1D assemble_1d(const BasisSpec& basis, const FractionalOrder& zeta,
                              const QuadratureRule& rule);

/// Weighted mass matrix int w(x) P_j P_k, with w given at the rule nodes.
Matrix weighted_mass(const legendre::BasisTable& table, const QuadratureRule& rule,
                     const std::vector<double>& weight_at_nodes);

using Source1D = std::function<double(double x, const ParamVector& params)>;
using Source2D = std::function<double(double t, double x, const ParamVector& params)>;

/// F[k] = int f(x; params) P_k(x) dx. Non-finite f throws InputError.
Vector assemble_source_1d(const AssembledSystem1D& sys, const Source1D& f,
                          const ParamVector& params);

/// (H + vhat M) omega - F
Vector residual_linear(const AssembledSystem1D& sys, double vhat, const Vector& omega,
                       const Vector& F);

/// Pointwise nonlinearity N(z) and its derivative.
struct Nonlinearity {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

/// (H + vhat M) omega + int N(z_N) P_k - F, with z_N = sum_j omega_j P_j.
Vector residual_nonlinear(const AssembledSystem1D& sys, double vhat, const Nonlinearity& n,
                          const Vector& omega, const Vector& F);

/// d residual_nonlinear / d omega
Matrix jacobian_nonlinear(const AssembledSystem1D& sys, double vhat, const Nonlinearity& n,
                          const Vector& omega);

/// One term c * A Omega B^T of a 2-D operator.
struct KroneckerTerm {
  std::shared_ptr<const Matrix> time;
  std::shared_ptr<const Matrix> space;
  double coeff = 1.0;
};

/// Sum of Kronecker terms acting on a row-major n_t x n_s coefficient grid.
class Operator2D {
 public:
  Operator2D(std::size_t nt, std::size_t ns) : nt_(nt), ns_(ns) {}

  void add(std::shared_ptr<const Matrix> time, std::shared_ptr<const Matrix> space,
           double coeff);

  std::size_t rows() const noexcept { return nt_ * ns_; }
  const std::vector<KroneckerTerm>& terms() const noexcept { return terms_; }

  /// sum c A Omega B^T, factor-wise.
  Vector apply(const Vector& omega) const;
  /// Adjoint: sum c A^T R B.
  Vector apply_transpose(const Vector& r) const;
  /// sum c kron(A, B); the (n_t n_s)^2 matrix, for tests and direct solves.
  Matrix materialize() const;

 private:
  std::size_t nt_, ns_;
  std::vector<KroneckerTerm> terms_;
};

struct AssembledSystem2D {
  AssembledSystem1D time;   // H_t, M_t, Q_t on [0, T]
  AssembledSystem1D space;  // K_s, M_s, Q_s on [0, X]
  std::shared_ptr<const Matrix> Ht, Qt, Mt, Qs, Ks, Ms;

  std::size_t nt() const noexcept { return time.size(); }
  std::size_t ns() const noexcept { return space.size(); }
};

AssembledSystem2D assemble_2d(const BasisSpec& time_basis, const BasisSpec& space_basis,
                              const FractionalOrder& zeta, const QuadratureRule& time_rule,
                              const QuadratureRule& space_rule);

/// Coefficients of D^zeta_t z - diffusion z_xx + drift(t) z_x.
struct Coefficients2D {
  double diffusion = 0.0;
  double drift = 0.0;
  /// Optional time-varying drift at the time-rule nodes; multiplies `drift`.
  std::vector<double> drift_profile;
};

/// H_t (x) Q_s + diffusion Q_t (x) K_s + drift Q_t^a (x) M_s. Diffusion is
/// integrated by parts with zero boundary terms, so both bases must be
/// Dirichlet.
Operator2D operator_2d(const AssembledSystem2D& sys, const Coefficients2D& coeffs);

/// F[k][l] = int int f(t, x) P_k(t) P_l(x), flattened row-major.
Vector assemble_source_2d(const AssembledSystem2D& sys, const Source2D& f,
                          const ParamVector& params);

/// Full-precision CSV, one matrix row per line.
void write_matrix_csv(std::ostream& out, const Matrix& m);

}  // namespace fracspec

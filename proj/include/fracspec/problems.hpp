#pragma once

// Parametric benchmark problems with manufactured exact solutions.
//
// 1-D:  D^zeta z + vhat z' + N(z) = f(x; Upsilon) on [0, X]
// 2-D:  D^zeta_t z - diffusion z_xx + drift(t; Upsilon) z_x = f(t, x; Upsilon)
//       on [0, T] x [0, X]
// with homogeneous Dirichlet conditions on the whole boundary.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracspec/assembly.hpp"
#include "fracspec/jet.hpp"
#include "fracspec/legendre.hpp"
#include "fracspec/model.hpp"
#include "fracspec/sampling.hpp"

namespace fracspec {

struct ProblemDefaults {
  int basis_count = 10;
  int quad_degree = 10;
  int hidden = 16;
  int samples = 100;
  int epochs = 500;
  int adam_epochs = 300;
};

/// Exact solution z(x1, x2; params); 1-D problems ignore x2.
using ExactFn = std::function<Jet(const Jet& x1, const Jet& x2, const ParamVector& params)>;

struct ProblemSpec {
  std::string name;
  int dim = 1;
  FractionalOrder zeta{1.0};
  double X = 1.0;  // space (or the only) interval length
  double T = 1.0;  // time interval length, 2-D only

  double advection = 0.0;  // 1-D vhat
  std::optional<Nonlinearity> nonlinearity;  // 1-D only

  double diffusion = 0.0;
  /// Constant factor of z_x, may depend on the parameters. Empty means 0.
  std::function<double(const ParamVector&)> drift;
  /// Optional time profile multiplying `drift`.
  std::function<double(double t, const ParamVector&)> drift_profile;

  Source1D forcing1d;
  Source2D forcing2d;
  ExactFn exact;

  ParameterSampler sampler;
  ProblemDefaults defaults;
  /// False when the printed forcing is known not to match the exact solution.
  bool consistent = true;

  /// Domain length of the time (first) direction.
  double first_length() const { return dim == 1 ? X : T; }
  /// Re-derives quadrature-dependent pieces (random-field feature nodes).
  void set_quad_degree(int m);
};

/// Registered names, in a stable order.
std::vector<std::string> problem_names();

/// Throws ConfigError for unknown names.
ProblemSpec registry_get(const std::string& name);

/// Problem from a TOML file (see README for the keys). Throws ConfigError.
ProblemSpec load_custom_problem(const std::string& path);

double exact_value(const ProblemSpec& p, double x1, double x2, const ParamVector& params);

/// Strong-form residual L z - f of the registered exact solution at a point,
/// with the Caputo term from caputo_oracle and the other derivatives by
/// forward-mode differentiation.
double strong_residual(const ProblemSpec& p, double x1, double x2, const ParamVector& params);

/// Solution coefficients for the linear path: the time-direction table,
/// operator and source for one parameter draw.
struct Discretization {
  int basis_count = 0;
  int quad_degree = 0;
  std::optional<AssembledSystem1D> sys1d;
  std::optional<AssembledSystem2D> sys2d;

  std::size_t output_dim() const;
};

Discretization discretize(const ProblemSpec& p, int basis_count, int quad_degree);

/// Source vector F(Upsilon).
Vector assemble_source(const ProblemSpec& p, const Discretization& d, const ParamVector& params);
/// 2-D operator for one parameter draw.
Operator2D operator_for(const ProblemSpec& p, const Discretization& d, const ParamVector& params);

/// Direct Galerkin solve for one parameter draw (linear problems only).
/// Throws TrainingError when the system is singular.
Vector direct_solve(const ProblemSpec& p, const Discretization& d, const ParamVector& params);

/// z(x) = sum_k omega_k P_k(x) at the given points (1-D).
std::vector<double> evaluate_surrogate(const ProblemSpec& p, int basis_count, const Vector& omega,
                                       std::span<const double> xs);
/// Tensor-product evaluation on the grid ts x xs; result row-major [t][x].
std::vector<double> evaluate_surrogate(const ProblemSpec& p, int basis_count, const Vector& omega,
                                       std::span<const double> ts, std::span<const double> xs);
/// Same, with the coefficients produced by a network.
std::vector<double> evaluate_surrogate(const ProblemSpec& p, int basis_count, const Mlp& model,
                                       const ParamVector& params, std::span<const double> ts,
                                       std::span<const double> xs = {});

}  // namespace fracspec

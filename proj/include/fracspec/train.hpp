#pragma once

// Monte-Carlo residual loss over a fixed set of parameter draws and the two
// optimizers used to minimize it.
//
//   loss = (|Omega-hat| / L) sum_m || R(omega(Upsilon_m); Upsilon_m) ||^2

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fracspec/model.hpp"
#include "fracspec/problems.hpp"

namespace fracspec {

struct TrainConfig {
  int samples = 100;  // L
  int epochs = 500;
  int adam_epochs = 300;
  double adam_lr = 1e-3;
  int lbfgs_memory = 10;
  std::uint64_t seed = 0;
  /// |Omega-hat|; taken from the sampler when unset.
  std::optional<double> domain_measure;
  /// 0 picks the hardware concurrency. Results do not depend on it.
  int threads = 0;

  /// Throws ConfigError.
  void validate() const;
};

/// The loss for one problem, discretization and training set.
class Objective {
 public:
  Objective(const ProblemSpec& problem, const Discretization& disc, std::vector<Sample> samples,
            double domain_measure, int threads = 0);

  std::size_t sample_count() const noexcept { return samples_.size(); }
  std::size_t output_dim() const noexcept { return dim_; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }

  /// Residual for one draw given its coefficients.
  Vector residual(std::size_t m, const Vector& omega) const;
  /// J^T r for the same draw.
  Vector residual_adjoint(std::size_t m, const Vector& omega, const Vector& r) const;

  double loss(const Mlp& model) const;
  /// Loss and its gradient with respect to model.params(). grad is
  /// overwritten. Throws TrainingError naming the sample on a non-finite
  /// residual.
  double loss_gradient(const Mlp& model, std::span<double> grad) const;

 private:
  double accumulate(const Mlp& model, std::span<double> grad, bool want_grad) const;

  const ProblemSpec* problem_;
  const Discretization* disc_;
  std::vector<Sample> samples_;
  double scale_;
  int threads_;
  std::size_t dim_;
  Matrix A1d_;                     // H + vhat M
  std::vector<Vector> F_;
  std::vector<Operator2D> ops_;    // 2-D, one per draw
};

struct AdamState {
  std::vector<double> m, v;
  long long t = 0;
};

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam update of x in place.
void adam_step(std::span<double> x, std::span<const double> grad, AdamState& state,
               const AdamOptions& opt = {});

/// Value and gradient of a scalar function; writes the gradient.
using LossFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsState {
  int memory = 10;
  std::deque<std::vector<double>> s, y;
  std::deque<double> rho;
  double f = 0.0;
  std::vector<double> g;
  bool primed = false;
  int fallbacks = 0;  // line searches that gave up
};

struct LbfgsOptions {
  double c1 = 1e-4;
  int max_trials = 20;
  double fallback_norm = 1e-3;
  double curvature_floor = 1e-12;
};

/// One L-BFGS iteration with Armijo backtracking. Updates x, state.f and
/// state.g; evaluates fn at x first when the state is fresh. A zero gradient
/// leaves x unchanged.
void lbfgs_step(std::span<double> x, LbfgsState& state, const LossFn& fn, const LbfgsOptions& opt = {});

struct TrainResult {
  Mlp model;
  /// Loss at the start of each epoch.
  std::vector<double> history;
  double final_loss = 0.0;
  int lbfgs_fallbacks = 0;
};

/// Adam for adam_epochs, then L-BFGS, on a training set drawn once from the
/// problem's sampler with config.seed.
TrainResult train(const ProblemSpec& problem, const Discretization& disc, const TrainConfig& config,
                  Mlp init);

/// Network shape for a problem: features -> hidden^layers -> coefficients.
std::vector<int> network_widths(const ProblemSpec& problem, const Discretization& disc, int hidden,
                                int hidden_layers = 1);

}  // namespace fracspec

#pragma once

// Test errors of a trained surrogate and (n, L, seed) sweeps.
//
//   L2_Te   = sqrt( mean_m int |z - z~|^2 ),  trapezoid rule on a uniform grid
//   Linf_Te = max over samples and grid points of |z - z~|

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracspec/model.hpp"
#include "fracspec/problems.hpp"
#include "fracspec/train.hpp"

namespace fracspec {

struct ErrorReport {
  double l2_test = 0.0;
  double linf_test = 0.0;
  std::vector<double> per_sample_l2;    // sqrt of each sample's integral
  std::vector<double> per_sample_linf;
};

struct TestOptions {
  int test_count = 100;
  std::uint64_t seed = 0;  // training seed; test draws use test_seed(seed)
  int grid = 101;          // points per dimension
};

/// Seed of the test draws, offset from the training seed.
std::uint64_t test_seed(std::uint64_t train_seed);

/// Coefficients for one parameter vector.
using CoefficientMap = std::function<Vector(const ParamVector&)>;
/// Surrogate values on the problem's evaluation grid for one parameter
/// vector, in the layout of evaluate_surrogate.
using SurrogateMap = std::function<std::vector<double>(const ParamVector&)>;

ErrorReport test_error(const ProblemSpec& problem, const SurrogateMap& surrogate, const TestOptions& opt = {});
ErrorReport test_error(const ProblemSpec& problem, int basis_count, const CoefficientMap& coeffs,
                       const TestOptions& opt = {});
ErrorReport test_error(const ProblemSpec& problem, int basis_count, const Mlp& model, const TestOptions& opt = {});

/// Uniform grid of `points` nodes on [0, length].
std::vector<double> uniform_grid(double length, int points);

struct SweepConfig {
  std::vector<int> n_values;  // hidden widths
  std::vector<int> L_values;  // sample counts
  std::vector<std::uint64_t> seeds;
  int basis_count = 10;
  int quad_degree = 10;
  int hidden_layers = 1;
  Activation activation = Activation::tanh;
  TrainConfig train;  // samples and seed are overridden per cell
  TestOptions test;   // seed is overridden per cell
};

struct SweepRow {
  int n = 0;
  int L = 0;
  std::uint64_t seed = 0;
  double l2_te = 0.0;
  double linf_te = 0.0;
  double final_loss = 0.0;
  double seconds = 0.0;
  std::string status = "ok";
};

/// seed + hash(n, L).
std::uint64_t cell_seed(std::uint64_t seed, int n, int L);

/// One training run per (n, L, seed), in axis order. Failed cells are
/// reported through `status` and do not stop the sweep.
std::vector<SweepRow> sweep(const ProblemSpec& problem, const SweepConfig& cfg,
                            const std::function<void(const SweepRow&)>& on_row = {});

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace fracspec

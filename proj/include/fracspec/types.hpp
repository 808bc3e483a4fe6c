#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fracspec {

// Row-major so that rows can be handed straight to the kernels.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// A draw of the random problem parameters (m1, m2, a, GRF coefficients, ...).
using ParamVector = std::vector<double>;

/// Malformed user or caller input (shape mismatch, non-finite forcing, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite loss/residual or other numerical breakdown during training.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration (unknown problem, missing file, invalid value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracspec

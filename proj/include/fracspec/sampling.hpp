#pragma once

// Random problem parameters and the network features derived from them.
//
// uniform_box: independent uniforms; the network sees each component mapped
// affinely onto [-1, 1].
// gaussian_random_field: a(t) = sum_{k=0}^{order} c_k Phat_k(t) on [0, T] with
// c_k ~ Normal(0, variance). The network sees a(t_q) / sd(t_q) at fixed nodes,
// where sd(t)^2 = variance * sum_k Phat_k(t)^2.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fracspec/types.hpp"

namespace fracspec {

struct ParameterSampler {
  enum class Kind { uniform_box, gaussian_random_field };
  Kind kind = Kind::uniform_box;

  std::vector<std::pair<double, double>> bounds;  // uniform_box

  int grf_order = 10;          // highest Legendre index
  double grf_variance = 1.0;   // of each coefficient
  double grf_length = 1.0;     // T
  std::vector<double> feature_nodes;

  static ParameterSampler uniform(std::vector<std::pair<double, double>> bounds);
  static ParameterSampler grf(int order, double variance, double length, std::vector<double> nodes);

  /// Length of the physical parameter vector.
  std::size_t param_dim() const;
  /// Length of the network input.
  std::size_t feature_dim() const;
  /// |Omega-hat|: product of interval lengths, or 1 for the random field.
  double measure() const;

  /// Throws InputError for empty, non-finite or inverted bounds, or a
  /// non-positive variance.
  void validate() const;
};

struct Sample {
  ParamVector params;
  std::vector<double> features;
};

/// Network input for a given parameter vector.
std::vector<double> features_of(const ParameterSampler& s, const ParamVector& params);

/// Deterministic in (sampler, count, seed).
std::vector<Sample> sample(const ParameterSampler& s, std::size_t count, std::uint64_t seed);

/// a(t) for a random-field parameter vector.
double grf_value(const ParameterSampler& s, const ParamVector& coeffs, double t);

}  // namespace fracspec

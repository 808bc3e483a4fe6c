#pragma once

// Feed-forward coefficient map Upsilon -> omega:
//   a^0 = input, z^r = W^r a^{r-1} + B^r, a^r = sigma(z^r) for hidden layers,
//   output = z^H (or C tanh(z^H) with the bounded head).
// All weights and biases live in one flat vector so optimizers can treat the
// network as a point in R^p.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fracspec/types.hpp"

namespace fracspec {

enum class Activation { tanh, sigmoid, relu, silu };

std::string_view activation_name(Activation a) noexcept;
/// Throws ConfigError for unknown names.
Activation parse_activation(std::string_view name);

class Mlp {
 public:
  Mlp() = default;
  /// Zero parameters. widths = (n_0, ..., n_H), at least two entries.
  Mlp(std::vector<int> widths, Activation activation);

  /// Glorot-uniform weights, zero biases, fully determined by the seed.
  static Mlp init(const std::vector<int>& widths, Activation activation, std::uint64_t seed);

  const std::vector<int>& widths() const noexcept { return widths_; }
  Activation activation() const noexcept { return activation_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t layers() const noexcept { return widths_.size() - 1; }
  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(widths_.front()); }
  std::size_t output_dim() const noexcept { return static_cast<std::size_t>(widths_.back()); }

  void set_bounded_head(double bound);
  bool bounded_head() const noexcept { return bound_ > 0.0; }
  double bound() const noexcept { return bound_; }

  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }
  std::size_t param_count() const noexcept { return params_.size(); }

  /// Row-major n_r x n_{r-1} block of layer r (1-based, as in the recursion).
  std::span<double> weight(std::size_t r);
  std::span<const double> weight(std::size_t r) const;
  std::span<double> bias(std::size_t r);
  std::span<const double> bias(std::size_t r) const;

  Vector forward(std::span<const double> input) const;

  /// Reverse pass of <forward(input), cotangent>. Parameter gradients are
  /// added into grad_params (size param_count()); the input gradient is
  /// written to grad_input when non-empty.
  void backward(std::span<const double> input, std::span<const double> cotangent,
                std::span<double> grad_params, std::span<double> grad_input = {}) const;

  nlohmann::json to_json() const;
  /// Throws InputError on malformed or inconsistent checkpoints.
  static Mlp from_json(const nlohmann::json& j);

 private:
  std::size_t weight_offset(std::size_t r) const;

  std::vector<int> widths_;
  Activation activation_ = Activation::tanh;
  std::uint64_t seed_ = 0;
  double bound_ = 0.0;
  std::vector<std::size_t> offsets_;  // start of W^r; B^r follows it
  std::vector<double> params_;
};

void save_checkpoint(const Mlp& model, const std::string& path);
Mlp load_checkpoint(const std::string& path);

}  // namespace fracspec

#include "fracspec/model.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "fracspec/kernels.hpp"

namespace fracspec {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double activate(Activation a, double z) {
  switch (a) {
    case Activation::tanh: return std::tanh(z);
    case Activation::sigmoid: return sigmoid(z);
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::silu: return z * sigmoid(z);
  }
  return z;
}

double activate_deriv(Activation a, double z) {
  switch (a) {
    case Activation::tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::sigmoid: {
      const double s = sigmoid(z);
      return s * (1.0 - s);
    }
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::silu: {
      const double s = sigmoid(z);
      return s + z * s * (1.0 - s);
    }
  }
  return 1.0;
}

}  // namespace

std::string_view activation_name(Activation a) noexcept {
  switch (a) {
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
    case Activation::relu: return "relu";
    case Activation::silu: return "silu";
  }
  return "?";
}

Activation parse_activation(std::string_view name) {
  for (Activation a : {Activation::tanh, Activation::sigmoid, Activation::relu, Activation::silu}) {
    if (name == activation_name(a)) return a;
  }
  throw ConfigError("unknown activation '" + std::string(name) + "' (tanh, sigmoid, relu, silu)");
}

Mlp::Mlp(std::vector<int> widths, Activation activation)
    : widths_(std::move(widths)), activation_(activation) {
  if (widths_.size() < 2) throw InputError("mlp: need at least input and output widths");
  std::size_t total = 0;
  for (std::size_t r = 1; r < widths_.size(); ++r) {
    if (widths_[r] < 1 || widths_[r - 1] < 1) throw InputError("mlp: widths must be positive");
    offsets_.push_back(total);
    total += static_cast<std::size_t>(widths_[r]) * static_cast<std::size_t>(widths_[r - 1] + 1);
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::init(const std::vector<int>& widths, Activation activation, std::uint64_t seed) {
  Mlp m(widths, activation);
  m.seed_ = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t r = 1; r <= m.layers(); ++r) {
    const double limit = std::sqrt(6.0 / (widths[r - 1] + widths[r]));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (double& w : m.weight(r)) w = u(rng);
  }
  return m;
}

void Mlp::set_bounded_head(double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) throw InputError("mlp: head bound must be positive");
  bound_ = bound;
}

std::size_t Mlp::weight_offset(std::size_t r) const {
  if (r < 1 || r > layers()) throw InputError("mlp: layer index out of range");
  return offsets_[r - 1];
}

std::span<double> Mlp::weight(std::size_t r) {
  const std::size_t n = static_cast<std::size_t>(widths_[r]) * static_cast<std::size_t>(widths_[r - 1]);
  return std::span<double>(params_).subspan(weight_offset(r), n);
}

std::span<const double> Mlp::weight(std::size_t r) const {
  const std::size_t n = static_cast<std::size_t>(widths_[r]) * static_cast<std::size_t>(widths_[r - 1]);
  return std::span<const double>(params_).subspan(weight_offset(r), n);
}

std::span<double> Mlp::bias(std::size_t r) {
  const std::size_t nw = static_cast<std::size_t>(widths_[r]) * static_cast<std::size_t>(widths_[r - 1]);
  return std::span<double>(params_).subspan(weight_offset(r) + nw, static_cast<std::size_t>(widths_[r]));
}

std::span<const double> Mlp::bias(std::size_t r) const {
  const std::size_t nw = static_cast<std::size_t>(widths_[r]) * static_cast<std::size_t>(widths_[r - 1]);
  return std::span<const double>(params_).subspan(weight_offset(r) + nw,
                                                  static_cast<std::size_t>(widths_[r]));
}

Vector Mlp::forward(std::span<const double> input) const {
  if (input.size() != input_dim()) throw InputError("mlp: input has the wrong length");
  const auto& k = kernels::active();
  std::vector<double> a(input.begin(), input.end());
  std::vector<double> z;
  for (std::size_t r = 1; r <= layers(); ++r) {
    const auto rows = static_cast<std::size_t>(widths_[r]);
    const auto b = bias(r);
    z.assign(b.begin(), b.end());
    k.gemv(weight(r).data(), rows, a.size(), a.data(), z.data(), true);
    if (r < layers()) {
      for (double& v : z) v = activate(activation_, v);
    }
    a.swap(z);
  }
  if (bounded_head()) {
    for (double& v : a) v = bound_ * std::tanh(v);
  }
  return Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size()));
}

void Mlp::backward(std::span<const double> input, std::span<const double> cotangent,
                   std::span<double> grad_params, std::span<double> grad_input) const {
  if (input.size() != input_dim() || cotangent.size() != output_dim() ||
      grad_params.size() != param_count()) {
    throw InputError("mlp: backward shape mismatch");
  }
  const auto& k = kernels::active();
  const std::size_t H = layers();

  // acts[r] = a^r (acts[0] = input), pre[r] = z^r.
  std::vector<std::vector<double>> acts(H + 1), pre(H + 1);
  acts[0].assign(input.begin(), input.end());
  for (std::size_t r = 1; r <= H; ++r) {
    const auto b = bias(r);
    pre[r].assign(b.begin(), b.end());
    k.gemv(weight(r).data(), pre[r].size(), acts[r - 1].size(), acts[r - 1].data(), pre[r].data(), true);
    acts[r] = pre[r];
    if (r < H) {
      for (double& v : acts[r]) v = activate(activation_, v);
    }
  }

  std::vector<double> g(cotangent.begin(), cotangent.end());
  if (bounded_head()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = std::tanh(pre[H][i]);
      g[i] *= bound_ * (1.0 - t * t);
    }
  }
  for (std::size_t r = H; r >= 1; --r) {
    const std::size_t rows = pre[r].size();
    const std::size_t cols = acts[r - 1].size();
    const std::size_t off = weight_offset(r);
    kernels::rank1(k, grad_params.data() + off, rows, cols, 1.0, g.data(), acts[r - 1].data());
    k.axpy(1.0, g.data(), grad_params.data() + off + rows * cols, rows);
    if (r == 1 && grad_input.empty()) break;
    std::vector<double> prev(cols, 0.0);
    kernels::gemv_t(k, weight(r).data(), rows, cols, g.data(), prev.data());
    if (r == 1) {
      std::copy(prev.begin(), prev.end(), grad_input.begin());
      break;
    }
    for (std::size_t i = 0; i < cols; ++i) prev[i] *= activate_deriv(activation_, pre[r - 1][i]);
    g.swap(prev);
  }
}

nlohmann::json Mlp::to_json() const {
  nlohmann::json j;
  j["widths"] = widths_;
  j["activation"] = std::string(activation_name(activation_));
  j["seed"] = seed_;
  if (bounded_head()) j["bound"] = bound_;
  auto layers_json = nlohmann::json::array();
  for (std::size_t r = 1; r <= layers(); ++r) {
    const auto w = weight(r);
    const auto b = bias(r);
    layers_json.push_back({{"W", std::vector<double>(w.begin(), w.end())},
                           {"B", std::vector<double>(b.begin(), b.end())}});
  }
  j["layers"] = std::move(layers_json);
  return j;
}

Mlp Mlp::from_json(const nlohmann::json& j) {
  try {
    Mlp m(j.at("widths").get<std::vector<int>>(),
          parse_activation(j.at("activation").get<std::string>()));
    m.seed_ = j.value("seed", std::uint64_t{0});
    if (j.contains("bound")) m.set_bounded_head(j.at("bound").get<double>());
    const auto& layers_json = j.at("layers");
    if (layers_json.size() != m.layers()) throw InputError("checkpoint: layer count mismatch");
    for (std::size_t r = 1; r <= m.layers(); ++r) {
      const auto W = layers_json[r - 1].at("W").get<std::vector<double>>();
      const auto B = layers_json[r - 1].at("B").get<std::vector<double>>();
      auto w = m.weight(r);
      auto b = m.bias(r);
      if (W.size() != w.size() || B.size() != b.size()) {
        throw InputError("checkpoint: layer " + std::to_string(r) + " has the wrong shape");
      }
      std::copy(W.begin(), W.end(), w.begin());
      std::copy(B.begin(), B.end(), b.begin());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw InputError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Mlp& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << model.to_json().dump(1) << '\n';
}

Mlp load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("checkpoint " + path + ": " + e.what());
  }
  return Mlp::from_json(j);
}

}  // namespace fracspec

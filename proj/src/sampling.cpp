#include "fracspec/sampling.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fracspec/legendre.hpp"

namespace fracspec {

ParameterSampler ParameterSampler::uniform(std::vector<std::pair<double, double>> bounds) {
  ParameterSampler s;
  s.kind = Kind::uniform_box;
  s.bounds = std::move(bounds);
  s.validate();
  return s;
}

ParameterSampler ParameterSampler::grf(int order, double variance, double length,
                                       std::vector<double> nodes) {
  ParameterSampler s;
  s.kind = Kind::gaussian_random_field;
  s.grf_order = order;
  s.grf_variance = variance;
  s.grf_length = length;
  s.feature_nodes = std::move(nodes);
  s.validate();
  return s;
}

void ParameterSampler::validate() const {
  if (kind == Kind::uniform_box) {
    if (bounds.empty()) throw InputError("sampler: no parameters");
    for (const auto& [lo, hi] : bounds) {
      if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
        throw InputError("sampler: bad interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      }
    }
  } else {
    if (grf_order < 0) throw InputError("sampler: negative field order");
    if (!(grf_variance > 0.0)) throw InputError("sampler: field variance must be positive");
    if (!(grf_length > 0.0)) throw InputError("sampler: field interval must be positive");
    if (feature_nodes.empty()) throw InputError("sampler: field needs feature nodes");
  }
}

std::size_t ParameterSampler::param_dim() const {
  return kind == Kind::uniform_box ? bounds.size() : static_cast<std::size_t>(grf_order + 1);
}

std::size_t ParameterSampler::feature_dim() const {
  return kind == Kind::uniform_box ? bounds.size() : feature_nodes.size();
}

double ParameterSampler::measure() const {
  if (kind == Kind::gaussian_random_field) return 1.0;
  double m = 1.0;
  for (const auto& [lo, hi] : bounds) m *= hi - lo;
  return m;
}

double grf_value(const ParameterSampler& s, const ParamVector& coeffs, double t) {
  if (coeffs.size() != s.param_dim()) throw InputError("grf: wrong number of coefficients");
  std::vector<double> p(coeffs.size());
  legendre::shifted_values(s.grf_order, t, s.grf_length, p);
  double a = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) a += coeffs[k] * p[k];
  return a;
}

std::vector<double> features_of(const ParameterSampler& s, const ParamVector& params) {
  if (params.size() != s.param_dim()) throw InputError("sampler: wrong parameter count");
  std::vector<double> f(s.feature_dim());
  if (s.kind == ParameterSampler::Kind::uniform_box) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto [lo, hi] = s.bounds[i];
      f[i] = hi > lo ? 2.0 * (params[i] - lo) / (hi - lo) - 1.0 : 0.0;
    }
    return f;
  }
  std::vector<double> p(params.size());
  for (std::size_t q = 0; q < s.feature_nodes.size(); ++q) {
    legendre::shifted_values(s.grf_order, s.feature_nodes[q], s.grf_length, p);
    double a = 0.0, var = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      a += params[k] * p[k];
      var += p[k] * p[k];
    }
    f[q] = a / std::sqrt(s.grf_variance * var);
  }
  return f;
}

std::vector<Sample> sample(const ParameterSampler& s, std::size_t count, std::uint64_t seed) {
  s.validate();
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  out.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    Sample smp;
    smp.params.resize(s.param_dim());
    if (s.kind == ParameterSampler::Kind::uniform_box) {
      for (std::size_t i = 0; i < s.bounds.size(); ++i) {
        const auto [lo, hi] = s.bounds[i];
        // Degenerate intervals return lo exactly.
        smp.params[i] = hi > lo ? std::uniform_real_distribution<double>(lo, hi)(rng) : lo;
      }
    } else {
      std::normal_distribution<double> n(0.0, std::sqrt(s.grf_variance));
      for (double& c : smp.params) c = n(rng);
    }
    smp.features = features_of(s, smp.params);
    out.push_back(std::move(smp));
  }
  return out;
}

}  // namespace fracspec

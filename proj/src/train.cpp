#include "fracspec/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

namespace fracspec {

void TrainConfig::validate() const {
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (adam_epochs < 0 || adam_epochs > epochs) throw ConfigError("adam epochs must lie in 0..epochs");
  if (!(adam_lr > 0.0)) throw ConfigError("adam learning rate must be positive");
  if (lbfgs_memory < 1) throw ConfigError("lbfgs memory must be >= 1");
  if (domain_measure && !(*domain_measure > 0.0)) throw ConfigError("domain measure must be positive");
}

Objective::Objective(const ProblemSpec& problem, const Discretization& disc, std::vector<Sample> samples,
                     double domain_measure, int threads)
    : problem_(&problem),
      disc_(&disc),
      samples_(std::move(samples)),
      scale_(domain_measure / static_cast<double>(samples_.size())),
      threads_(threads),
      dim_(disc.output_dim()) {
  if (samples_.empty()) throw InputError("objective: no samples");
  if (disc.sys1d) A1d_ = disc.sys1d->H + problem.advection * disc.sys1d->M;
  F_.reserve(samples_.size());
  for (const auto& s : samples_) {
    F_.push_back(assemble_source(problem, disc, s.params));
    if (disc.sys2d) ops_.push_back(operator_for(problem, disc, s.params));
  }
}

Vector Objective::residual(std::size_t m, const Vector& omega) const {
  if (disc_->sys2d) return ops_[m].apply(omega) - F_[m];
  if (problem_->nonlinearity) {
    return residual_nonlinear(*disc_->sys1d, problem_->advection, *problem_->nonlinearity, omega, F_[m]);
  }
  return A1d_ * omega - F_[m];
}

Vector Objective::residual_adjoint(std::size_t m, const Vector& omega, const Vector& r) const {
  if (disc_->sys2d) return ops_[m].apply_transpose(r);
  if (problem_->nonlinearity) {
    return jacobian_nonlinear(*disc_->sys1d, problem_->advection, *problem_->nonlinearity, omega).transpose() *
           r;
  }
  return A1d_.transpose() * r;
}

double Objective::accumulate(const Mlp& model, std::span<double> grad, bool want_grad) const {
  if (model.output_dim() != dim_) {
    throw InputError("objective: model has " + std::to_string(model.output_dim()) + " outputs, system needs " +
                     std::to_string(dim_));
  }
  const std::size_t n = samples_.size();
  const std::size_t P = model.param_count();
  // Fixed chunking keeps the summation order independent of the thread count.
  const std::size_t chunks = std::min<std::size_t>(n, 16);
  std::vector<double> part_loss(chunks, 0.0);
  std::vector<std::vector<double>> part_grad(want_grad ? chunks : 0);
  std::vector<std::string> errors(chunks);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t lo = c * n / chunks, hi = (c + 1) * n / chunks;
    if (want_grad) part_grad[c].assign(P, 0.0);
    double acc = 0.0;
    for (std::size_t m = lo; m < hi; ++m) {
      const auto& s = samples_[m];
      const Vector omega = model.forward(s.features);
      const Vector r = residual(m, omega);
      if (!r.allFinite()) {
        errors[c] = "non-finite residual for training sample " + std::to_string(m);
        return;
      }
      acc += r.squaredNorm();
      if (want_grad) {
        const Vector cot = 2.0 * scale_ * residual_adjoint(m, omega, r);
        model.backward(s.features, std::span<const double>(cot.data(), dim_), part_grad[c]);
      }
    }
    part_loss[c] = acc;
  };

  unsigned workers = threads_ > 0 ? static_cast<unsigned>(threads_) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(chunks));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c; (c = next.fetch_add(1)) < chunks;) run_chunk(c);
      });
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw TrainingError(e);
  }

  double loss = 0.0;
  for (double l : part_loss) loss += l;
  if (want_grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (const auto& g : part_grad) {
      for (std::size_t i = 0; i < P; ++i) grad[i] += g[i];
    }
  }
  return scale_ * loss;
}

double Objective::loss(const Mlp& model) const { return accumulate(model, {}, false); }

double Objective::loss_gradient(const Mlp& model, std::span<double> grad) const {
  if (grad.size() != model.param_count()) throw InputError("loss_gradient: gradient buffer has the wrong size");
  return accumulate(model, grad, true);
}

void adam_step(std::span<double> x, std::span<const double> grad, AdamState& state, const AdamOptions& opt) {
  if (grad.size() != x.size()) throw InputError("adam: gradient size mismatch");
  if (state.m.size() != x.size()) {
    state.m.assign(x.size(), 0.0);
    state.v.assign(x.size(), 0.0);
    state.t = 0;
  }
  ++state.t;
  const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < x.size(); ++i) {
    state.m[i] = opt.beta1 * state.m[i] + (1.0 - opt.beta1) * grad[i];
    state.v[i] = opt.beta2 * state.v[i] + (1.0 - opt.beta2) * grad[i] * grad[i];
    x[i] -= opt.lr * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + opt.eps);
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

void lbfgs_step(std::span<double> x, LbfgsState& state, const LossFn& fn, const LbfgsOptions& opt) {
  const std::size_t n = x.size();
  if (!state.primed) {
    state.g.assign(n, 0.0);
    state.f = fn(x, state.g);
    state.primed = true;
  }
  const double gnorm = std::sqrt(dot(state.g, state.g));
  if (gnorm == 0.0) return;

  // Two-loop recursion for d = -H g.
  std::vector<double> d(state.g.begin(), state.g.end());
  const std::size_t k = state.s.size();
  std::vector<double> alpha(k);
  for (std::size_t i = k; i-- > 0;) {
    alpha[i] = state.rho[i] * dot(state.s[i], d);
    for (std::size_t j = 0; j < n; ++j) d[j] -= alpha[i] * state.y[i][j];
  }
  double gamma = 1.0;
  if (k > 0) gamma = dot(state.s.back(), state.y.back()) / dot(state.y.back(), state.y.back());
  else gamma = std::min(1.0, 1.0 / gnorm);
  for (double& v : d) v *= gamma;
  for (std::size_t i = 0; i < k; ++i) {
    const double beta = state.rho[i] * dot(state.y[i], d);
    for (std::size_t j = 0; j < n; ++j) d[j] += (alpha[i] - beta) * state.s[i][j];
  }
  for (double& v : d) v = -v;

  double slope = dot(state.g, d);
  if (!(slope < 0.0)) {
    // Not a descent direction: restart from steepest descent.
    state.s.clear();
    state.y.clear();
    state.rho.clear();
    for (std::size_t j = 0; j < n; ++j) d[j] = -state.g[j] * std::min(1.0, 1.0 / gnorm);
    slope = dot(state.g, d);
  }

  std::vector<double> trial(n), gtrial(n);
  double t = 1.0, ftrial = 0.0;
  bool accepted = false;
  for (int i = 0; i < opt.max_trials; ++i, t *= 0.5) {
    for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] + t * d[j];
    ftrial = fn(trial, gtrial);
    if (std::isfinite(ftrial) && ftrial <= state.f + opt.c1 * t * slope) {
      accepted = true;
      break;
    }
  }
  if (!accepted) {
    ++state.fallbacks;
    for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] - opt.fallback_norm * state.g[j] / gnorm;
    ftrial = fn(trial, gtrial);
  }

  std::vector<double> s(n), y(n);
  for (std::size_t j = 0; j < n; ++j) {
    s[j] = trial[j] - x[j];
    y[j] = gtrial[j] - state.g[j];
  }
  const double sy = dot(s, y);
  if (sy > opt.curvature_floor) {
    state.s.push_back(std::move(s));
    state.y.push_back(std::move(y));
    state.rho.push_back(1.0 / sy);
    if (static_cast<int>(state.s.size()) > state.memory) {
      state.s.pop_front();
      state.y.pop_front();
      state.rho.pop_front();
    }
  }
  std::copy(trial.begin(), trial.end(), x.begin());
  state.f = ftrial;
  state.g = std::move(gtrial);
}

std::vector<int> network_widths(const ProblemSpec& problem, const Discretization& disc, int hidden,
                                int hidden_layers) {
  if (hidden < 1) throw ConfigError("hidden width must be >= 1");
  if (hidden_layers < 1) throw ConfigError("hidden layer count must be >= 1");
  std::vector<int> w{static_cast<int>(problem.sampler.feature_dim())};
  for (int i = 0; i < hidden_layers; ++i) w.push_back(hidden);
  w.push_back(static_cast<int>(disc.output_dim()));
  return w;
}

TrainResult train(const ProblemSpec& problem, const Discretization& disc, const TrainConfig& config, Mlp init) {
  config.validate();
  TrainResult out;
  out.model = std::move(init);
  if (config.epochs == 0) return out;

  const double measure = config.domain_measure.value_or(problem.sampler.measure());
  const Objective obj(problem, disc, sample(problem.sampler, static_cast<std::size_t>(config.samples), config.seed),
                      measure, config.threads);
  Mlp& model = out.model;
  const std::size_t P = model.param_count();
  std::vector<double> grad(P);

  auto check = [&](double f, int epoch) {
    if (!std::isfinite(f)) {
      throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + " (value " + std::to_string(f) + ")");
    }
  };

  out.history.reserve(static_cast<std::size_t>(config.epochs));
  AdamState adam;
  const AdamOptions aopt{.lr = config.adam_lr};
  for (int e = 0; e < config.adam_epochs; ++e) {
    const double f = obj.loss_gradient(model, grad);
    check(f, e);
    out.history.push_back(f);
    adam_step(model.params(), grad, adam, aopt);
  }

  LbfgsState lb;
  lb.memory = config.lbfgs_memory;
  const LossFn fn = [&](std::span<const double> x, std::span<double> g) {
    Mlp probe = model;
    std::copy(x.begin(), x.end(), probe.params().begin());
    return obj.loss_gradient(probe, g);
  };
  for (int e = config.adam_epochs; e < config.epochs; ++e) {
    if (!lb.primed) {
      lb.g.assign(P, 0.0);
      lb.f = obj.loss_gradient(model, lb.g);
      lb.primed = true;
    }
    check(lb.f, e);
    out.history.push_back(lb.f);
    lbfgs_step(model.params(), lb, fn);
  }
  out.lbfgs_fallbacks = lb.fallbacks;
  out.final_loss = obj.loss(model);
  check(out.final_loss, config.epochs);
  return out;
}

}  // namespace fracspec

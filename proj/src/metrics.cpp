#include "fracspec/metrics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace fracspec {

std::uint64_t test_seed(std::uint64_t train_seed) { return train_seed + 0x9E3779B97F4A7C15ULL; }

std::vector<double> uniform_grid(double length, int points) {
  if (points < 2) throw InputError("grid needs at least two points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[i] = length * i / (points - 1);
  g.back() = length;
  return g;
}

namespace {

std::vector<double> trapezoid_weights(double length, int points) {
  std::vector<double> w(static_cast<std::size_t>(points), length / (points - 1));
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

}  // namespace

ErrorReport test_error(const ProblemSpec& problem, const SurrogateMap& surrogate, const TestOptions& opt) {
  if (opt.test_count < 1) throw InputError("test_count must be >= 1");
  const auto draws = sample(problem.sampler, static_cast<std::size_t>(opt.test_count), test_seed(opt.seed));
  const auto g1 = uniform_grid(problem.first_length(), opt.grid);
  const auto w1 = trapezoid_weights(problem.first_length(), opt.grid);
  const auto g2 = problem.dim == 2 ? uniform_grid(problem.X, opt.grid) : std::vector<double>{0.0};
  const auto w2 = problem.dim == 2 ? trapezoid_weights(problem.X, opt.grid) : std::vector<double>{1.0};

  ErrorReport rep;
  double total = 0.0;
  for (const auto& d : draws) {
    const auto z = surrogate(d.params);
    if (z.size() != g1.size() * g2.size()) throw InputError("test_error: surrogate returned the wrong grid size");
    double integral = 0.0, worst = 0.0;
    for (std::size_t a = 0; a < g1.size(); ++a) {
      for (std::size_t b = 0; b < g2.size(); ++b) {
        const double e = z[a * g2.size() + b] - exact_value(problem, g1[a], g2[b], d.params);
        integral += w1[a] * w2[b] * e * e;
        worst = std::max(worst, std::abs(e));
      }
    }
    rep.per_sample_l2.push_back(std::sqrt(integral));
    rep.per_sample_linf.push_back(worst);
    total += integral;
    rep.linf_test = std::max(rep.linf_test, worst);
  }
  rep.l2_test = std::sqrt(total / static_cast<double>(draws.size()));
  return rep;
}

ErrorReport test_error(const ProblemSpec& problem, int basis_count, const CoefficientMap& coeffs,
                       const TestOptions& opt) {
  const auto g1 = uniform_grid(problem.first_length(), opt.grid);
  const auto g2 = uniform_grid(problem.X, opt.grid);
  return test_error(
      problem,
      [&](const ParamVector& u) {
        const Vector omega = coeffs(u);
        return problem.dim == 1 ? evaluate_surrogate(problem, basis_count, omega, g1)
                                : evaluate_surrogate(problem, basis_count, omega, g1, g2);
      },
      opt);
}

ErrorReport test_error(const ProblemSpec& problem, int basis_count, const Mlp& model, const TestOptions& opt) {
  return test_error(
      problem, basis_count,
      [&](const ParamVector& u) { return model.forward(features_of(problem.sampler, u)); }, opt);
}

std::uint64_t cell_seed(std::uint64_t seed, int n, int L) {
  // splitmix64 finalizer of the packed pair
  std::uint64_t z = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
                    static_cast<std::uint32_t>(L);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return seed + (z ^ (z >> 31));
}

std::vector<SweepRow> sweep(const ProblemSpec& problem, const SweepConfig& cfg,
                            const std::function<void(const SweepRow&)>& on_row) {
  if (cfg.n_values.empty() || cfg.L_values.empty() || cfg.seeds.empty()) {
    throw ConfigError("sweep axes must be nonempty");
  }
  ProblemSpec p = problem;
  p.set_quad_degree(cfg.quad_degree);
  const Discretization disc = discretize(p, cfg.basis_count, cfg.quad_degree);

  std::vector<SweepRow> rows;
  for (int n : cfg.n_values) {
    for (int L : cfg.L_values) {
      for (std::uint64_t seed : cfg.seeds) {
        SweepRow row;
        row.n = n;
        row.L = L;
        row.seed = seed;
        const auto start = std::chrono::steady_clock::now();
        try {
          const std::uint64_t s = cell_seed(seed, n, L);
          TrainConfig tc = cfg.train;
          tc.samples = L;
          tc.seed = s;
          const auto init = Mlp::init(network_widths(p, disc, n, cfg.hidden_layers), cfg.activation, s);
          const auto result = train(p, disc, tc, init);
          TestOptions to = cfg.test;
          to.seed = s;
          const auto rep = test_error(p, cfg.basis_count, result.model, to);
          row.l2_te = rep.l2_test;
          row.linf_te = rep.linf_test;
          row.final_loss = result.final_loss;
        } catch (const TrainingError& e) {
          row.status = std::string("training_error: ") + e.what();
        } catch (const std::exception& e) {
          row.status = std::string("error: ") + e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (row.status != "ok") row.l2_te = row.linf_te = row.final_loss = NAN;
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n,L,seed,l2_te,linf_te,final_loss,seconds,status\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.L << ',' << r.seed << ',' << fmt(r.l2_te) << ',' << fmt(r.linf_te) << ','
        << fmt(r.final_loss) << ',' << fmt(r.seconds) << ',' << csv_field(r.status) << '\n';
  }
}

}  // namespace fracspec

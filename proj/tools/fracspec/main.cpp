// fracspec: train, evaluate and sweep spectral neural surrogates for
// parametric fractional differential equations.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <any>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>
#include <toml.hpp>

#include "fracspec/assembly.hpp"
#include "fracspec/kernels.hpp"
#include "fracspec/metrics.hpp"
#include "fracspec/problems.hpp"
#include "fracspec/train.hpp"

namespace fs = std::filesystem;
using namespace fracspec;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) throw ConfigError(std::string("bad ") + what + " list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
  return out;
}

// Settings after merging problem defaults, the config file and flags, in
// that order of increasing priority.
struct Settings {
  std::string problem = "linear1d";
  std::string problem_file;
  int basis_n = 0;
  int quad_degree = 0;
  int hidden = 0;
  int hidden_layers = 1;
  std::string activation = "tanh";
  double bound = 0.0;
  int samples = 0;
  int epochs = -1;
  int adam_epochs = -1;
  double adam_lr = 1e-3;
  int lbfgs_memory = 10;
  std::int64_t seed = 0;
  int threads = 0;
  std::string out = "out";
  int test_count = 100;
  int grid = 101;
  std::string params;
  std::string checkpoint;
  std::string n_values = "4,16";
  std::string L_values = "10,100,500";
  std::string seeds = "0";
  std::string sweep_name = "sweep";
};

class Flags {
 public:
  explicit Flags(CLI::App* cmd) : cmd_(cmd) {}

  template <class T>
  void add(const std::string& name, T& slot, const std::string& help) {
    auto* opt = cmd_->add_option("--" + name, staged<T>(name), help);
    opts_.push_back({opt, [this, name, &slot] { slot = staged<T>(name); }});
  }

  void apply() const {
    for (const auto& [opt, set] : opts_) {
      if (opt->count() > 0) set();
    }
  }

 private:
  template <class T>
  T& staged(const std::string& name) {
    auto& box = values_[name];
    if (!box.has_value()) box = std::make_shared<T>();
    return *std::any_cast<std::shared_ptr<T>>(box);
  }

  CLI::App* cmd_;
  std::map<std::string, std::any> values_;
  std::vector<std::pair<CLI::Option*, std::function<void()>>> opts_;
};

template <class T>
void take(const toml::table& t, const char* key, T& slot) {
  const auto* node = t.get(key);
  if (!node) return;
  if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = node->value<std::string>()) {
      slot = *v;
      return;
    }
    if (const auto* arr = node->as_array()) {
      // arrays of numbers become comma lists
      std::string s;
      for (const auto& e : *arr) {
        std::ostringstream os;
        if (auto d = e.value<double>()) os << std::setprecision(17) << *d;
        else throw ConfigError(std::string("config key '") + key + "' must hold numbers");
        s += (s.empty() ? "" : ",") + os.str();
      }
      slot = s;
      return;
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (auto v = node->value<double>()) {
      slot = *v;
      return;
    }
  } else {
    if (auto v = node->value<std::int64_t>()) {
      slot = static_cast<T>(*v);
      return;
    }
  }
  throw ConfigError(std::string("config key '") + key + "' has the wrong type");
}

void load_config(const std::string& path, Settings& s) {
  toml::table t;
  try {
    t = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    throw ConfigError(path + ": " + std::string(e.description()));
  }
  static const std::set<std::string> known{
      "problem", "problem_file", "basis_n", "quad_degree", "hidden", "hidden_layers", "activation", "bound",
      "samples", "epochs", "adam_epochs", "adam_lr", "lbfgs_memory", "seed", "threads", "out", "test_count",
      "grid", "params", "checkpoint", "n_values", "L_values", "seeds", "sweep_name"};
  for (const auto& [k, v] : t) {
    if (!known.contains(std::string(k.str()))) throw ConfigError(path + ": unknown key '" + std::string(k.str()) + "'");
  }
  take(t, "problem", s.problem);
  take(t, "problem_file", s.problem_file);
  take(t, "basis_n", s.basis_n);
  take(t, "quad_degree", s.quad_degree);
  take(t, "hidden", s.hidden);
  take(t, "hidden_layers", s.hidden_layers);
  take(t, "activation", s.activation);
  take(t, "bound", s.bound);
  take(t, "samples", s.samples);
  take(t, "epochs", s.epochs);
  take(t, "adam_epochs", s.adam_epochs);
  take(t, "adam_lr", s.adam_lr);
  take(t, "lbfgs_memory", s.lbfgs_memory);
  take(t, "seed", s.seed);
  take(t, "threads", s.threads);
  take(t, "out", s.out);
  take(t, "test_count", s.test_count);
  take(t, "grid", s.grid);
  take(t, "params", s.params);
  take(t, "checkpoint", s.checkpoint);
  take(t, "n_values", s.n_values);
  take(t, "L_values", s.L_values);
  take(t, "seeds", s.seeds);
  take(t, "sweep_name", s.sweep_name);
}

void register_flags(Flags& f, Settings& s) {
  f.add("problem", s.problem, "registered problem name");
  f.add("problem-file", s.problem_file, "custom problem TOML (overrides --problem)");
  f.add("basis-n", s.basis_n, "basis count N per direction");
  f.add("quad-degree", s.quad_degree, "Gauss-Legendre points m per direction");
  f.add("hidden", s.hidden, "hidden layer width n");
  f.add("hidden-layers", s.hidden_layers, "number of hidden layers");
  f.add("activation", s.activation, "tanh, sigmoid, relu or silu");
  f.add("bound", s.bound, "bounded output head C tanh(.), 0 to disable");
  f.add("samples", s.samples, "training sample count L");
  f.add("epochs", s.epochs, "total epochs");
  f.add("adam-epochs", s.adam_epochs, "Adam epochs before L-BFGS");
  f.add("adam-lr", s.adam_lr, "Adam learning rate");
  f.add("lbfgs-memory", s.lbfgs_memory, "L-BFGS history length");
  f.add("seed", s.seed, "random seed");
  f.add("threads", s.threads, "worker threads, 0 for all cores");
  f.add("out", s.out, "output directory");
  f.add("test-count", s.test_count, "test draws for the error");
  f.add("grid", s.grid, "evaluation points per dimension");
  f.add("params", s.params, "comma-separated parameter values");
  f.add("checkpoint", s.checkpoint, "model checkpoint JSON");
  f.add("n-values", s.n_values, "sweep hidden widths, comma-separated");
  f.add("L-values", s.L_values, "sweep sample counts, comma-separated");
  f.add("seeds", s.seeds, "sweep seeds, comma-separated");
  f.add("sweep-name", s.sweep_name, "sweep file suffix");
}

ProblemSpec resolve_problem(Settings& s) {
  ProblemSpec p = s.problem_file.empty() ? registry_get(s.problem) : load_custom_problem(s.problem_file);
  if (s.basis_n == 0) s.basis_n = p.defaults.basis_count;
  if (s.quad_degree == 0) s.quad_degree = p.defaults.quad_degree;
  if (s.hidden == 0) s.hidden = p.defaults.hidden;
  if (s.samples == 0) s.samples = p.defaults.samples;
  if (s.epochs < 0) s.epochs = p.defaults.epochs;
  if (s.adam_epochs < 0) s.adam_epochs = std::min(p.defaults.adam_epochs, s.epochs);
  if (s.basis_n < 3) throw ConfigError("basis-n must be >= 3");
  if (s.quad_degree < 1) throw ConfigError("quad-degree must be >= 1");
  if (s.grid < 2) throw ConfigError("grid must be >= 2");
  if (s.test_count < 1) throw ConfigError("test-count must be >= 1");
  if (s.bound < 0.0) throw ConfigError("bound must be >= 0");
  p.set_quad_degree(s.quad_degree);
  return p;
}

TrainConfig train_config(const Settings& s) {
  TrainConfig tc;
  tc.samples = s.samples;
  tc.epochs = s.epochs;
  tc.adam_epochs = s.adam_epochs;
  tc.adam_lr = s.adam_lr;
  tc.lbfgs_memory = s.lbfgs_memory;
  tc.seed = static_cast<std::uint64_t>(s.seed);
  tc.threads = s.threads;
  tc.validate();
  return tc;
}

fs::path prepare_out(const Settings& s) {
  const fs::path dir(s.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + s.out + ": " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  return f;
}

void echo_config(const fs::path& dir, const std::string& command, const Settings& s) {
  toml::table t{
      {"command", command},         {"problem", s.problem},         {"basis_n", s.basis_n},
      {"quad_degree", s.quad_degree}, {"hidden", s.hidden},         {"hidden_layers", s.hidden_layers},
      {"activation", s.activation}, {"bound", s.bound},             {"samples", s.samples},
      {"epochs", s.epochs},         {"adam_epochs", s.adam_epochs}, {"adam_lr", s.adam_lr},
      {"lbfgs_memory", s.lbfgs_memory}, {"seed", s.seed},           {"test_count", s.test_count},
      {"grid", s.grid},
  };
  if (!s.problem_file.empty()) t.insert("problem_file", s.problem_file);
  if (!s.params.empty()) t.insert("params", s.params);
  if (!s.checkpoint.empty()) t.insert("checkpoint", s.checkpoint);
  if (command == "sweep") {
    t.insert("n_values", s.n_values);
    t.insert("L_values", s.L_values);
    t.insert("seeds", s.seeds);
    t.insert("sweep_name", s.sweep_name);
  }
  open_out(dir / "config.toml") << t << '\n';
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ParamVector parse_params(const ProblemSpec& p, const Settings& s) {
  if (s.params.empty()) throw ConfigError("--params is required");
  auto u = parse_list<double>(s.params, "parameter");
  if (u.size() != p.sampler.param_dim()) {
    throw ConfigError("problem " + p.name + " takes " + std::to_string(p.sampler.param_dim()) +
                      " parameters, got " + std::to_string(u.size()));
  }
  return u;
}

int cmd_train(Settings& s) {
  const ProblemSpec p = resolve_problem(s);
  const TrainConfig tc = train_config(s);
  const Discretization disc = discretize(p, s.basis_n, s.quad_degree);
  Mlp init = Mlp::init(network_widths(p, disc, s.hidden, s.hidden_layers), parse_activation(s.activation),
                       static_cast<std::uint64_t>(s.seed));
  if (s.bound > 0.0) init.set_bounded_head(s.bound);
  const fs::path dir = prepare_out(s);
  echo_config(dir, "train", s);

  const auto start = std::chrono::steady_clock::now();
  const TrainResult r = train(p, disc, tc, std::move(init));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto csv = open_out(dir / "loss.csv");
  csv << "epoch,loss\n";
  for (std::size_t e = 0; e < r.history.size(); ++e) csv << e << ',' << fmt(r.history[e]) << '\n';
  save_checkpoint(r.model, (dir / "checkpoint.json").string());

  std::cout << "problem " << p.name << ": final loss " << fmt(r.final_loss) << " after " << r.history.size()
            << " epochs (" << secs << " s)";
  if (r.lbfgs_fallbacks > 0) std::cout << ", " << r.lbfgs_fallbacks << " line-search fallbacks";
  std::cout << '\n';
  return 0;
}

int cmd_direct(Settings& s) {
  const ProblemSpec p = resolve_problem(s);
  const ParamVector u = parse_params(p, s);
  const Discretization disc = discretize(p, s.basis_n, s.quad_degree);
  const Vector omega = direct_solve(p, disc, u);
  const fs::path dir = prepare_out(s);
  echo_config(dir, "direct", s);

  const auto g1 = uniform_grid(p.first_length(), s.grid);
  auto csv = open_out(dir / "solution.csv");
  double worst = 0.0;
  if (p.dim == 1) {
    const auto z = evaluate_surrogate(p, s.basis_n, omega, g1);
    csv << "x,z_approx,z_exact,abs_err\n";
    for (std::size_t i = 0; i < g1.size(); ++i) {
      const double e = exact_value(p, g1[i], 0.0, u);
      worst = std::max(worst, std::abs(z[i] - e));
      csv << fmt(g1[i]) << ',' << fmt(z[i]) << ',' << fmt(e) << ',' << fmt(std::abs(z[i] - e)) << '\n';
    }
  } else {
    const auto g2 = uniform_grid(p.X, s.grid);
    const auto z = evaluate_surrogate(p, s.basis_n, omega, g1, g2);
    csv << "t,x,z_approx,z_exact,abs_err\n";
    for (std::size_t a = 0; a < g1.size(); ++a) {
      for (std::size_t b = 0; b < g2.size(); ++b) {
        const double zz = z[a * g2.size() + b];
        const double e = exact_value(p, g1[a], g2[b], u);
        worst = std::max(worst, std::abs(zz - e));
        csv << fmt(g1[a]) << ',' << fmt(g2[b]) << ',' << fmt(zz) << ',' << fmt(e) << ',' << fmt(std::abs(zz - e))
            << '\n';
      }
    }
  }
  std::cout << "problem " << p.name << ": max abs error " << fmt(worst) << '\n';
  return 0;
}

int cmd_eval(Settings& s) {
  const ProblemSpec p = resolve_problem(s);
  if (s.checkpoint.empty()) throw ConfigError("--checkpoint is required");
  const Mlp model = load_checkpoint(s.checkpoint);
  const Discretization disc = discretize(p, s.basis_n, s.quad_degree);
  if (model.output_dim() != disc.output_dim() || model.input_dim() != p.sampler.feature_dim()) {
    throw ConfigError("checkpoint shape does not match problem " + p.name + " with basis-n " +
                      std::to_string(s.basis_n));
  }
  const ErrorReport rep =
      test_error(p, s.basis_n, model, {.test_count = s.test_count, .seed = static_cast<std::uint64_t>(s.seed), .grid = s.grid});
  const fs::path dir = prepare_out(s);
  echo_config(dir, "eval", s);
  nlohmann::json j{{"problem", p.name},
                   {"l2_test", rep.l2_test},
                   {"linf_test", rep.linf_test},
                   {"per_sample_l2", rep.per_sample_l2},
                   {"per_sample_linf", rep.per_sample_linf},
                   {"test_count", s.test_count},
                   {"grid", s.grid},
                   {"seed", s.seed}};
  open_out(dir / "eval.json") << j.dump(2) << '\n';
  std::cout << "problem " << p.name << ": L2_Te " << fmt(rep.l2_test) << ", Linf_Te " << fmt(rep.linf_test) << '\n';
  return 0;
}

int cmd_sweep(Settings& s) {
  const ProblemSpec p = resolve_problem(s);
  SweepConfig cfg;
  cfg.n_values = parse_list<int>(s.n_values, "n");
  cfg.L_values = parse_list<int>(s.L_values, "L");
  for (auto v : parse_list<std::int64_t>(s.seeds, "seed")) cfg.seeds.push_back(static_cast<std::uint64_t>(v));
  cfg.basis_count = s.basis_n;
  cfg.quad_degree = s.quad_degree;
  cfg.hidden_layers = s.hidden_layers;
  cfg.activation = parse_activation(s.activation);
  Settings checked = s;
  checked.samples = 1;
  cfg.train = train_config(checked);
  cfg.test = {.test_count = s.test_count, .seed = 0, .grid = s.grid};
  const fs::path dir = prepare_out(s);
  echo_config(dir, "sweep", s);

  const auto rows = sweep(p, cfg, [](const SweepRow& r) {
    std::cout << "n=" << r.n << " L=" << r.L << " seed=" << r.seed << ": L2_Te " << fmt(r.l2_te) << " ("
              << r.status << ", " << r.seconds << " s)\n";
  });
  const fs::path file = dir / (p.name + "_" + s.sweep_name + ".csv");
  auto csv = open_out(file);
  write_sweep_csv(csv, rows);
  std::cout << "wrote " << file.string() << '\n';
  return 0;
}

int cmd_dump(Settings& s) {
  const ProblemSpec p = resolve_problem(s);
  const Discretization disc = discretize(p, s.basis_n, s.quad_degree);
  const fs::path dir = prepare_out(s);
  echo_config(dir, "dump-matrices", s);
  auto dump = [&](const std::string& name, const Matrix& m) {
    auto f = open_out(dir / (name + ".csv"));
    write_matrix_csv(f, m);
  };
  if (disc.sys1d) {
    dump("H", disc.sys1d->H);
    dump("M", disc.sys1d->M);
    dump("K", disc.sys1d->K);
    dump("Q", disc.sys1d->Q);
  } else {
    dump("H_t", *disc.sys2d->Ht);
    dump("Q_t", *disc.sys2d->Qt);
    dump("M_t", *disc.sys2d->Mt);
    dump("Q_s", *disc.sys2d->Qs);
    dump("K_s", *disc.sys2d->Ks);
    dump("M_s", *disc.sys2d->Ms);
  }
  std::cout << "wrote matrices to " << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral neural surrogates for parametric fractional differential equations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fracspec 1.0");
  bool show_kernels = false;
  app.add_flag("--kernels", show_kernels, "print the selected SIMD kernel set");

  struct Command {
    const char* name;
    const char* help;
    int (*run)(Settings&);
  };
  const Command commands[] = {
      {"train", "train a network and write checkpoint.json and loss.csv", cmd_train},
      {"direct", "solve the Galerkin system for one parameter vector", cmd_direct},
      {"sweep", "train over (n, L, seed) and write a CSV table", cmd_sweep},
      {"eval", "test error of a checkpoint", cmd_eval},
      {"dump-matrices", "write the assembled matrices as CSV", cmd_dump},
  };

  std::vector<std::unique_ptr<Settings>> settings;
  std::vector<std::unique_ptr<Flags>> flags;
  std::vector<std::string> configs(std::size(commands));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].name, commands[i].help);
    settings.push_back(std::make_unique<Settings>());
    flags.push_back(std::make_unique<Flags>(sub));
    sub->add_option("--config", configs[i], "TOML config; flags override its keys");
    register_flags(*flags.back(), *settings.back());
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (show_kernels) std::cerr << "kernels: " << kernels::isa_name(kernels::active().isa) << '\n';

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    Settings& s = *settings[i];
    try {
      if (!configs[i].empty()) load_config(configs[i], s);
      flags[i]->apply();
      return commands[i].run(s);
    } catch (const ConfigError& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return kConfigError;
    } catch (const InputError& e) {
      std::cerr << "input error: " << e.what() << '\n';
      return kConfigError;
    } catch (const TrainingError& e) {
      std::cerr << "numerical failure: " << e.what() << '\n';
      return kNumericError;
    } catch (const std::exception& e) {
      std::cerr << "numerical failure: " << e.what() << '\n';
      return kNumericError;
    }
  }
  return kConfigError;
}

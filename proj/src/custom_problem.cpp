#include <cmath>
#include <memory>

#include <toml.hpp>

#include "fracspec/expression.hpp"
#include "fracspec/problems.hpp"
#include "fracspec/quadrature.hpp"

namespace fracspec {

namespace {

template <class T>
T get_or(const toml::table& t, std::string_view key, T fallback, const std::string& where) {
  const auto* node = t.get(key);
  if (!node) return fallback;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = node->value<double>()) return *v;
  } else if constexpr (std::is_same_v<T, int>) {
    if (auto v = node->value<int64_t>()) return static_cast<int>(*v);
  } else {
    if (auto v = node->value<std::string>()) return *v;
  }
  throw ConfigError(where + ": key '" + std::string(key) + "' has the wrong type");
}

std::string require_string(const toml::table& t, std::string_view key, const std::string& where) {
  auto v = t[key].value<std::string>();
  if (!v) throw ConfigError(where + ": missing string key '" + std::string(key) + "'");
  return *v;
}

// Expression evaluated with slots [coords..., params...].
struct Bound {
  std::shared_ptr<const Expression> e;
  std::size_t coords;

  double operator()(std::initializer_list<double> c, const ParamVector& u) const {
    std::vector<double> s(c);
    s.insert(s.end(), u.begin(), u.end());
    return e->eval(std::span<const double>(s));
  }
  Jet jet(std::initializer_list<Jet> c, const ParamVector& u) const {
    std::vector<Jet> s(c);
    for (double v : u) s.emplace_back(v);
    return e->eval(std::span<const Jet>(s));
  }
};

Bound bind_expression(const std::string& text, std::vector<std::string> coords, const std::vector<std::string>& params) {
  const std::size_t n = coords.size();
  coords.insert(coords.end(), params.begin(), params.end());
  return {std::make_shared<const Expression>(Expression::parse(text, coords)), n};
}

}  // namespace

ProblemSpec load_custom_problem(const std::string& path) {
  toml::table doc;
  try {
    doc = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    throw ConfigError(path + ": " + std::string(e.description()));
  }
  const std::string where = path;

  ProblemSpec p;
  p.name = get_or<std::string>(doc, "name", "custom", where);
  p.dim = get_or<int>(doc, "dim", 1, where);
  if (p.dim != 1 && p.dim != 2) throw ConfigError(where + ": dim must be 1 or 2");
  const double zeta = get_or<double>(doc, "zeta", 1.0, where);
  if (!(zeta > 0.0)) throw ConfigError(where + ": zeta must be positive");
  if (p.dim == 2 && zeta > 1.0) throw ConfigError(where + ": 2-D problems need zeta <= 1");
  p.zeta = FractionalOrder(zeta);
  p.X = get_or<double>(doc, "X", 1.0, where);
  p.T = get_or<double>(doc, "T", 1.0, where);
  if (!(p.X > 0.0) || !(p.T > 0.0)) throw ConfigError(where + ": interval lengths must be positive");

  std::vector<std::string> names;
  std::vector<std::pair<double, double>> bounds;
  const auto* params = doc["params"].as_array();
  if (!params || params->empty()) throw ConfigError(where + ": needs at least one [[params]] entry");
  for (const auto& node : *params) {
    const auto* t = node.as_table();
    if (!t) throw ConfigError(where + ": [[params]] entries must be tables");
    names.push_back(require_string(*t, "name", where));
    const double lo = get_or<double>(*t, "low", NAN, where);
    const double hi = get_or<double>(*t, "high", NAN, where);
    bounds.emplace_back(lo, hi);
  }
  try {
    p.sampler = ParameterSampler::uniform(bounds);
  } catch (const InputError& e) {
    throw ConfigError(where + ": " + e.what());
  }

  const std::vector<std::string> coords =
      p.dim == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"t", "x"};
  const Bound exact = bind_expression(require_string(doc, "exact", where), coords, names);
  const Bound forcing = bind_expression(require_string(doc, "forcing", where), coords, names);

  if (p.dim == 1) {
    p.advection = get_or<double>(doc, "advection", 0.0, where);
    p.exact = [exact](const Jet& x, const Jet&, const ParamVector& u) { return exact.jet({x}, u); };
    p.forcing1d = [forcing](double x, const ParamVector& u) { return forcing({x}, u); };
    if (const auto text = doc["nonlinearity"].value<std::string>()) {
      auto e = std::make_shared<const Expression>(Expression::parse(*text, {"z"}));
      p.nonlinearity = Nonlinearity{
          [e](double z) { return e->eval(std::span<const double>(&z, 1)); },
          [e](double z) {
            const Jet j = Jet::variable(z);
            return e->eval(std::span<const Jet>(&j, 1)).d;
          }};
    }
  } else {
    p.diffusion = get_or<double>(doc, "diffusion", 0.0, where);
    p.exact = [exact](const Jet& t, const Jet& x, const ParamVector& u) { return exact.jet({t, x}, u); };
    p.forcing2d = [forcing](double t, double x, const ParamVector& u) { return forcing({t, x}, u); };
    if (const auto text = doc["drift"].value<std::string>()) {
      const Bound drift = bind_expression(*text, {"t"}, names);
      p.drift = [](const ParamVector&) { return 1.0; };
      p.drift_profile = [drift](double t, const ParamVector& u) { return drift({t}, u); };
    }
  }

  if (const auto* d = doc["defaults"].as_table()) {
    auto& df = p.defaults;
    df.basis_count = get_or<int>(*d, "basis_n", df.basis_count, where);
    df.quad_degree = get_or<int>(*d, "quad_degree", df.quad_degree, where);
    df.hidden = get_or<int>(*d, "hidden", df.hidden, where);
    df.samples = get_or<int>(*d, "samples", df.samples, where);
    df.epochs = get_or<int>(*d, "epochs", df.epochs, where);
    df.adam_epochs = get_or<int>(*d, "adam_epochs", df.adam_epochs, where);
  }
  return p;
}

}  // namespace fracspec

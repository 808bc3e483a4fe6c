#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "fracspec/metrics.hpp"

using namespace fracspec;

TEST_CASE("projection stub errors sit below the projection floor") {
  const auto p = registry_get("linear1d");
  const auto d = discretize(p, 10, 10);
  const auto rep = test_error(p, 10, [&](const ParamVector& u) { return direct_solve(p, d, u); }, {.test_count = 20});
  CHECK(rep.l2_test < 1e-4);
  CHECK(rep.linf_test < 1e-4);
}

TEST_CASE("constant offset gives |c| and |c| sqrt(measure)") {
  const double c = 0.25;
  for (const char* name : {"linear1d", "heat_long"}) {
    const auto p = registry_get(name);
    const auto g1 = uniform_grid(p.first_length(), 101), g2 = uniform_grid(p.X, 101);
    const SurrogateMap shifted = [&](const ParamVector& u) {
      std::vector<double> z;
      for (double a : g1) {
        if (p.dim == 1) z.push_back(exact_value(p, a, 0, u) + c);
        else
          for (double b : g2) z.push_back(exact_value(p, a, b, u) + c);
      }
      return z;
    };
    const auto rep = test_error(p, shifted, {.test_count = 5});
    const double measure = p.dim == 1 ? p.X : p.X * p.T;
    CHECK(rep.linf_test == doctest::Approx(c).epsilon(1e-9));
    CHECK(rep.l2_test == doctest::Approx(c * std::sqrt(measure)).epsilon(1e-9));
  }
}

TEST_CASE("zero surrogate error equals the mean solution norm") {
  const auto p = registry_get("linear1d");
  const TestOptions opt{.test_count = 30, .seed = 12};
  const auto rep = test_error(p, 10, Mlp({2, 3, 9}, Activation::tanh), opt);
  // int_0^1 m1^2 (1-x)^2 x^{2 m2} dx = 2 m1^2 / ((2m2+1)(2m2+2)(2m2+3))
  double mean = 0.0;
  for (const auto& d : sample(p.sampler, 30, test_seed(12))) {
    const double m1 = d.params[0], q = 2 * d.params[1];
    mean += 2 * m1 * m1 / ((q + 1) * (q + 2) * (q + 3));
  }
  CHECK(rep.l2_test == doctest::Approx(std::sqrt(mean / 30)).epsilon(1e-3));
  double worst = 0.0;
  for (double v : rep.per_sample_linf) worst = std::max(worst, v);
  CHECK(rep.linf_test == worst);
  CHECK(rep.per_sample_l2.size() == 30);
}

TEST_CASE("test error is deterministic") {
  const auto p = registry_get("heat");
  const auto model = Mlp::init({2, 4, 81}, Activation::tanh, 4);
  const TestOptions opt{.test_count = 4, .seed = 3, .grid = 21};
  const auto a = test_error(p, 10, model, opt), b = test_error(p, 10, model, opt);
  CHECK(a.l2_test == b.l2_test);
  CHECK(a.linf_test == b.linf_test);
}

TEST_CASE("cell seeds separate the axes") {
  CHECK(cell_seed(1, 4, 10) != cell_seed(1, 10, 4));
  CHECK(cell_seed(1, 4, 10) == cell_seed(1, 4, 10));
  CHECK(cell_seed(2, 4, 10) == cell_seed(1, 4, 10) + 1);
}

TEST_CASE("one-cell sweep writes one row") {
  const auto p = registry_get("linear1d");
  SweepConfig cfg;
  cfg.n_values = {4};
  cfg.L_values = {10};
  cfg.seeds = {0};
  cfg.train.epochs = 20;
  cfg.train.adam_epochs = 10;
  cfg.test.test_count = 5;
  const auto rows = sweep(p, cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "ok");
  CHECK(std::isfinite(rows[0].l2_te));
  std::ostringstream out;
  write_sweep_csv(out, rows);
  const std::string csv = out.str();
  CHECK(csv.rfind("n,L,seed,l2_te,linf_te,final_loss,seconds,status\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("failed cells are recorded and the sweep continues") {
  const auto p = registry_get("linear1d");
  SweepConfig cfg;
  cfg.n_values = {4};
  cfg.L_values = {0, 5};
  cfg.seeds = {1};
  cfg.train.epochs = 5;
  cfg.train.adam_epochs = 5;
  cfg.test.test_count = 3;
  const auto rows = sweep(p, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].status != "ok");
  CHECK(std::isnan(rows[0].l2_te));
  CHECK(rows[1].status == "ok");

  std::ostringstream out;
  write_sweep_csv(out, {SweepRow{.status = "error: a, \"b\""}});
  CHECK(out.str().find("\"error: a, \"\"b\"\"\"") != std::string::npos);
}

TEST_CASE("empty sweep axes are rejected") {
  SweepConfig cfg;
  cfg.seeds = {0};
  CHECK_THROWS_AS(sweep(registry_get("linear1d"), cfg), ConfigError);
}

TEST_CASE("checkpoint round trip gives the same test error bitwise") {
  const auto p = registry_get("linear1d");
  const auto d = discretize(p, 10, 10);
  const auto r = train(p, d, {.samples = 20, .epochs = 30, .adam_epochs = 20, .seed = 2},
                       Mlp::init(network_widths(p, d, 6), Activation::silu, 2));
  const auto path = (std::filesystem::temp_directory_path() / "fracspec_metrics_ckpt.json").string();
  save_checkpoint(r.model, path);
  const TestOptions opt{.test_count = 10, .seed = 2};
  const auto a = test_error(p, 10, r.model, opt);
  const auto b = test_error(p, 10, load_checkpoint(path), opt);
  CHECK(a.l2_test == b.l2_test);
  CHECK(a.linf_test == b.linf_test);
  CHECK(a.per_sample_l2 == b.per_sample_l2);
}

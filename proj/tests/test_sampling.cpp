#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracspec/legendre.hpp"
#include "fracspec/sampling.hpp"

using namespace fracspec;

TEST_CASE("uniform samples have the right mean") {
  const auto s = ParameterSampler::uniform({{3, 5}, {3, 5}});
  const auto draws = sample(s, 1000, 42);
  REQUIRE(draws.size() == 1000);
  for (int c = 0; c < 2; ++c) {
    double mean = 0.0;
    for (const auto& d : draws) {
      CHECK(d.params[c] >= 3.0);
      CHECK(d.params[c] <= 5.0);
      mean += d.params[c];
    }
    mean /= 1000.0;
    CHECK(std::abs(mean - 4.0) < 0.1);
  }
  CHECK(s.measure() == 4.0);
}

TEST_CASE("degenerate interval returns its end point") {
  const auto s = ParameterSampler::uniform({{4, 4}, {0, 1}});
  for (const auto& d : sample(s, 50, 1)) {
    CHECK(d.params[0] == 4.0);
    CHECK(d.features[0] == 0.0);
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto s = ParameterSampler::uniform({{0, 1}});
  const auto a = sample(s, 10, 7), b = sample(s, 10, 7), c = sample(s, 10, 8);
  for (int i = 0; i < 10; ++i) CHECK(a[i].params == b[i].params);
  CHECK(a[0].params != c[0].params);
}

TEST_CASE("uniform features lie in [-1, 1]") {
  const auto s = ParameterSampler::uniform({{3, 5}, {1, 1.5}});
  CHECK(features_of(s, {3, 1.5}) == std::vector<double>{-1.0, 1.0});
  CHECK(features_of(s, {4, 1.25}) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("bad sampler settings are rejected") {
  CHECK_THROWS_AS(ParameterSampler::uniform({}), InputError);
  CHECK_THROWS_AS(ParameterSampler::uniform({{2, 1}}), InputError);
  CHECK_THROWS_AS(ParameterSampler::uniform({{0, INFINITY}}), InputError);
  CHECK_THROWS_AS(ParameterSampler::grf(10, 0.0, 1.0, {0.5}), InputError);
  CHECK_THROWS_AS(ParameterSampler::grf(10, 1.0, 1.0, {}), InputError);
}

TEST_CASE("random-field coefficients have the requested spread") {
  const int N = 10;
  const double var = 1.0 / ((N + 1.0) * (N + 1.0));
  const auto s = ParameterSampler::grf(N, var, 1.0, {0.1, 0.5, 0.9});
  const auto draws = sample(s, 10000, 3);
  for (int k = 0; k <= N; ++k) {
    double m = 0.0, q = 0.0;
    for (const auto& d : draws) {
      m += d.params[k];
      q += d.params[k] * d.params[k];
    }
    m /= draws.size();
    const double sd = std::sqrt(q / draws.size() - m * m);
    CHECK(std::abs(sd - 1.0 / 11.0) < 0.2 / 11.0);
  }
  // standardized features have unit variance
  double q = 0.0;
  for (const auto& d : draws) q += d.features[1] * d.features[1];
  CHECK(std::abs(q / draws.size() - 1.0) < 0.05);
  CHECK(s.measure() == 1.0);
}

TEST_CASE("random-field value is the Legendre series") {
  const auto s = ParameterSampler::grf(3, 1.0, 2.0, {1.0});
  const ParamVector c{0.5, -1.0, 0.25, 2.0};
  const double t = 0.7;
  double want = 0.0;
  for (int k = 0; k < 4; ++k) want += c[k] * legendre::shifted_eval(k, t, 2.0);
  CHECK(grf_value(s, c, t) == doctest::Approx(want).epsilon(1e-14));
  CHECK_THROWS_AS(grf_value(s, {1.0}, t), InputError);
}

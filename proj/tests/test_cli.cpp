#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(FRACSPEC_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fracspec_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

const std::string kSmall = "--hidden 4 --samples 10 --epochs 12 --adam-epochs 8";

}  // namespace

TEST_CASE("train writes checkpoint, loss history and the config") {
  const auto out = fresh("train");
  REQUIRE(run("train --problem linear1d " + kSmall + " --out " + out.string()) == 0);
  const std::string loss = slurp(out / "loss.csv");
  CHECK(loss.rfind("epoch,loss\n", 0) == 0);
  CHECK(count_lines(loss) == 13);
  const auto ckpt = nlohmann::json::parse(slurp(out / "checkpoint.json"));
  CHECK(ckpt["widths"] == nlohmann::json::array({2, 4, 9}));
  CHECK(slurp(out / "config.toml").find("epochs = 12") != std::string::npos);
}

TEST_CASE("same config and seed give byte-identical outputs") {
  const auto a = fresh("det_a"), b = fresh("det_b");
  REQUIRE(run("train --problem heat " + kSmall + " --seed 4 --out " + a.string()) == 0);
  REQUIRE(run("train --problem heat " + kSmall + " --seed 4 --threads 1 --out " + b.string()) == 0);
  CHECK(slurp(a / "loss.csv") == slurp(b / "loss.csv"));
  CHECK(slurp(a / "checkpoint.json") == slurp(b / "checkpoint.json"));
  const auto c = fresh("det_c");
  REQUIRE(run("train --problem heat " + kSmall + " --seed 5 --out " + c.string()) == 0);
  CHECK(slurp(a / "loss.csv") != slurp(c / "loss.csv"));
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run("train --problem nope --out " + fresh("e1").string()) == 2);
  CHECK(run("train --epochs notanumber") == 2);
  CHECK(run("train --problem linear1d --basis-n 2 --out " + fresh("e2").string()) == 2);
  CHECK(run("train --problem linear1d --activation softsign --out " + fresh("e3").string()) == 2);
  CHECK(run("train --problem linear1d --epochs 5 --adam-epochs 9 --out " + fresh("e4").string()) == 2);
  CHECK(run("train --config /nonexistent.toml") == 2);
  CHECK(run("direct --problem linear1d --params 4 --out " + fresh("e5").string()) == 2);
  CHECK(run("eval --problem linear1d --checkpoint /nonexistent.json --out " + fresh("e6").string()) == 2);
  CHECK(run("") == 2);
}

TEST_CASE("numerical failures exit with 3") {
  // The squared residual overflows.
  const auto out = fresh("nan");
  fs::create_directories(out);
  const auto prob = out / "blowup.toml";
  std::ofstream(prob) << "exact = \"x * (1 - x)\"\nforcing = \"1e300 * a\"\n[[params]]\nname = \"a\"\nlow = 1\nhigh = 2\n";
  CHECK(run("train --problem-file " + prob.string() + " " + kSmall + " --out " + out.string()) == 3);
}

TEST_CASE("config file values are overridden by flags") {
  const auto out = fresh("cfg");
  fs::create_directories(out);
  const auto cfg = out / "run.toml";
  std::ofstream(cfg) << "problem = \"linear1d\"\nhidden = 3\nsamples = 7\nepochs = 9\nadam_epochs = 4\nseed = 8\n";
  REQUIRE(run("train --config " + cfg.string() + " --epochs 6 --out " + out.string()) == 0);
  CHECK(count_lines(slurp(out / "loss.csv")) == 7);
  const auto ckpt = nlohmann::json::parse(slurp(out / "checkpoint.json"));
  CHECK(ckpt["widths"][1] == 3);
  CHECK(ckpt["seed"] == 8);

  std::ofstream(out / "bad.toml") << "hiden = 3\n";
  CHECK(run("train --config " + (out / "bad.toml").string()) == 2);
}

TEST_CASE("direct writes the solution grid") {
  const auto out = fresh("direct");
  REQUIRE(run("direct --problem linear1d --params 4,4 --out " + out.string()) == 0);
  const std::string csv = slurp(out / "solution.csv");
  CHECK(csv.rfind("x,z_approx,z_exact,abs_err\n", 0) == 0);
  CHECK(count_lines(csv) == 102);

  const auto out2 = fresh("direct2");
  REQUIRE(run("direct --problem heat --params 6,6 --grid 5 --out " + out2.string()) == 0);
  CHECK(count_lines(slurp(out2 / "solution.csv")) == 26);
}

TEST_CASE("eval reads a checkpoint and writes a report") {
  const auto out = fresh("eval");
  REQUIRE(run("train --problem linear1d " + kSmall + " --out " + out.string()) == 0);
  const auto ev = fresh("eval_out");
  REQUIRE(run("eval --problem linear1d --test-count 5 --checkpoint " + (out / "checkpoint.json").string() +
              " --out " + ev.string()) == 0);
  const auto rep = nlohmann::json::parse(slurp(ev / "eval.json"));
  CHECK(rep["l2_test"].get<double>() >= 0.0);
  CHECK(rep["per_sample_l2"].size() == 5);
  CHECK(run("eval --problem heat --checkpoint " + (out / "checkpoint.json").string() + " --out " + ev.string()) == 2);
}

TEST_CASE("sweep writes one row per cell") {
  const auto out = fresh("sweep");
  REQUIRE(run("sweep --problem linear1d --n-values 4 --L-values 10 --seeds 0 --epochs 10 --adam-epochs 5 "
              "--test-count 5 --sweep-name tiny --out " +
              out.string()) == 0);
  const std::string csv = slurp(out / "linear1d_tiny.csv");
  CHECK(csv.rfind("n,L,seed,l2_te,linf_te,final_loss,seconds,status\n", 0) == 0);
  CHECK(count_lines(csv) == 2);
}

TEST_CASE("dump-matrices writes the 1-D matrices") {
  const auto out = fresh("dump");
  REQUIRE(run("dump-matrices --problem linear1d --basis-n 6 --out " + out.string()) == 0);
  for (const char* m : {"H", "M", "K", "Q"}) CHECK(count_lines(slurp(out / (std::string(m) + ".csv"))) == 5);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "symvmf/bench.hpp"
#include "symvmf/errors.hpp"

using namespace symvmf;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("estimator names") {
  CHECK(estimator_name(Estimator::Naive) == "naive");
  CHECK(estimator_name(Estimator::ModifiedMl) == "modified");
  CHECK(estimator_name(Estimator::Em) == "em");
}

TEST_CASE("run_sweep validates its configuration") {
  SweepConfig cfg;
  cfg.estimators.clear();
  CHECK_THROWS_AS(run_sweep(cfg), Error);

  SweepConfig bad;
  bad.kappa_min = -1.0;
  CHECK_THROWS_AS(run_sweep(bad), Error);

  SweepConfig swapped;
  swapped.kappa_min = 50.0;
  swapped.kappa_max = 10.0;
  CHECK_THROWS_AS(run_sweep(swapped), Error);
}

TEST_CASE("trivial group, high concentration: naive recovery is near perfect") {
  SweepConfig cfg;
  cfg.group = "trivial";
  cfg.kappa_min = cfg.kappa_max = 80.0;
  cfg.steps = 1;
  cfg.n = 500;
  cfg.trials = 5;
  cfg.estimators = {Estimator::Naive};
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].kappa_o == doctest::Approx(80.0));
  CHECK(rows[0].inner_sym >= 0.999);
  CHECK(rows[0].inner_raw >= 0.999);
  CHECK(rows[0].failed_trials == 0);
  CHECK(std::abs(rows[0].kappa_bias) < 10.0);
  CHECK(rows[0].se_kappa > 0.0);
}

TEST_CASE("sweep rows are deterministic for a fixed seed") {
  SweepConfig cfg;
  cfg.kappa_min = 5.0;
  cfg.kappa_max = 60.0;
  cfg.steps = 2;
  cfg.n = 200;
  cfg.trials = 3;
  cfg.seed = 17;
  const auto a = run_sweep(cfg);
  cfg.threads = 2;  // thread count must not affect results
  const auto b = run_sweep(cfg);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == 6);  // 2 grid points x 3 estimators
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].kappa_o == b[i].kappa_o);
    CHECK(a[i].inner_sym == b[i].inner_sym);
    CHECK(a[i].kappa_hat_mean == b[i].kappa_hat_mean);
    CHECK(a[i].se_inner == b[i].se_inner);
  }
}

TEST_CASE("emit_report writes csv and charts, byte-identical on rerun") {
  SweepConfig cfg;
  cfg.kappa_min = 10.0;
  cfg.kappa_max = 40.0;
  cfg.steps = 2;
  cfg.n = 100;
  cfg.trials = 2;
  cfg.seed = 3;
  const auto rows = run_sweep(cfg);

  const std::string dir = "/tmp/symvmf_bench_out";
  std::filesystem::remove_all(dir);
  emit_report(rows, dir);
  REQUIRE(std::filesystem::exists(dir + "/sweep.csv"));
  REQUIRE(std::filesystem::exists(dir + "/inner_product.svg"));
  REQUIRE(std::filesystem::exists(dir + "/kappa_bias.svg"));

  const std::string csv = slurp(dir + "/sweep.csv");
  CHECK(csv.rfind("kappa_o,estimator,inner_raw,inner_sym,kappa_hat_mean,"
                  "kappa_bias,se_inner,se_kappa\n", 0) == 0);
  // header + one line per row
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + rows.size());
  CHECK(csv.find(",naive,") != std::string::npos);
  CHECK(csv.find(",modified,") != std::string::npos);
  CHECK(csv.find(",em,") != std::string::npos);

  const std::string svg = slurp(dir + "/inner_product.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("naive") != std::string::npos);

  emit_report(rows, dir);
  CHECK(slurp(dir + "/sweep.csv") == csv);
  CHECK(slurp(dir + "/inner_product.svg") == svg);

  CHECK_THROWS_AS(emit_report({}, dir), Error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "symvmf/errors.hpp"
#include "symvmf/vmf.hpp"
#include "test_support.hpp"

using namespace symvmf;
using symvmf::testing::log_bessel_series_oracle;
using symvmf::testing::random_unit_quat;

TEST_CASE("log_bessel_i matches an independent series oracle") {
  for (const int nu : {0, 1, 2}) {
    for (const double x : {0.1, 0.5, 1.0, 5.0, 10.0, 39.0, 40.0, 41.0, 80.0,
                           150.0, 300.0}) {
      CHECK(log_bessel_i(nu, x) ==
            doctest::Approx(log_bessel_series_oracle(nu, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("log_norm_const limits and large-kappa stability") {
  // kappa -> 0: uniform density over S3 (surface area 2 pi^2)
  const double uniform = -std::log(2.0 * M_PI * M_PI);
  CHECK(log_norm_const(0.0) == doctest::Approx(uniform).epsilon(1e-14));
  CHECK(uniform == doctest::Approx(-2.9826).epsilon(1e-4));
  CHECK(log_norm_const(1e-13) == doctest::Approx(uniform).epsilon(1e-12));

  const double at10 = std::log(10.0) - std::log(4.0 * M_PI * M_PI) -
                      log_bessel_series_oracle(1, 10.0);
  CHECK(log_norm_const(10.0) == doctest::Approx(at10).epsilon(1e-12));

  CHECK(std::isfinite(log_norm_const(1000.0)));
  CHECK(std::isfinite(log_norm_const(kKappaMax)));
}

TEST_CASE("log_density") {
  std::mt19937_64 rng(2);
  const UnitQuaternion mu = random_unit_quat(rng);
  const UnitQuaternion x = random_unit_quat(rng);
  CHECK(log_density(x, {mu, 0.0, false}) ==
        doctest::Approx(-std::log(2.0 * M_PI * M_PI)).epsilon(1e-14));
  CHECK(log_density(mu, {mu, 5.0, false}) ==
        doctest::Approx(log_norm_const(5.0) + 5.0).epsilon(1e-12));
}

TEST_CASE("density integrates to one over S3 (Monte Carlo)") {
  std::mt19937_64 rng(1234);
  const UnitQuaternion mu = random_unit_quat(rng);
  const double area = 2.0 * M_PI * M_PI;
  for (const double kappa : {1.0, 10.0}) {
    double acc = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      acc += std::exp(log_density(random_unit_quat(rng), {mu, kappa, false}));
    }
    CHECK(acc / n * area == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("bessel_ratio_A range, asymptotics, monotonicity and ODE") {
  CHECK(bessel_ratio_A(0.0) == 0.0);
  CHECK(bessel_ratio_A(0.1) == doctest::Approx(0.025).epsilon(0.01));
  const double a100 = bessel_ratio_A(100.0);
  CHECK(a100 >= 0.98);
  CHECK(a100 < 1.0);

  double prev = -1.0;
  for (double lu = -3.0; lu <= 4.9; lu += 0.05) {
    const double u = std::pow(10.0, lu);
    const double a = bessel_ratio_A(u);
    CHECK(a > prev);
    prev = a;
    // d/du A = 1 - A^2 - 3 A / u
    const double h = std::max(1e-6, u * 1e-6);
    const double numeric = (bessel_ratio_A(u + h) - bessel_ratio_A(u - h)) / (2 * h);
    const double analytic = 1.0 - a * a - 3.0 * a / u;
    CHECK(std::abs(numeric - analytic) < 1e-6);
  }
}

TEST_CASE("bessel_ratio_A_inv round trips and saturates") {
  CHECK(bessel_ratio_A_inv(0.0).kappa == 0.0);
  CHECK(bessel_ratio_A_inv(bessel_ratio_A(10.0)).kappa ==
        doctest::Approx(10.0).epsilon(1e-8));
  for (double r = 0.01; r < 0.999; r += 0.017) {
    CHECK(std::abs(bessel_ratio_A(bessel_ratio_A_inv(r).kappa) - r) <= 1e-10);
  }
  const BesselRatioInv sat = bessel_ratio_A_inv(0.999999);
  CHECK(sat.kappa == kKappaMax);
  CHECK(sat.saturated);

  CHECK_THROWS_AS(bessel_ratio_A_inv(-0.1), ResultantOutOfRange);
  CHECK_THROWS_AS(bessel_ratio_A_inv(1.0), ResultantOutOfRange);
}

TEST_CASE("ml_estimate degenerate cases") {
  std::mt19937_64 rng(9);
  const UnitQuaternion x0 = random_unit_quat(rng);
  const std::vector<UnitQuaternion> same(10, x0);
  const VmfParams fit = ml_estimate(same);
  CHECK(fit.mu.dot(x0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fit.kappa == kKappaMax);
  CHECK(fit.kappa_saturated);

  const std::vector<UnitQuaternion> antipodal{x0, x0.negated()};
  CHECK_THROWS_AS(ml_estimate(antipodal), DegenerateResultant);
}

TEST_CASE("sampler-estimator consistency") {
  std::mt19937_64 rng(77);
  const UnitQuaternion mu = random_unit_quat(rng);
  const auto draws = sample({mu, 20.0, false}, 100000, 42);
  const VmfParams fit = ml_estimate(draws);
  CHECK(fit.kappa > 19.0);
  CHECK(fit.kappa < 21.0);
  CHECK(fit.mu.dot(mu) >= 0.999);
}

TEST_CASE("uniform sampling at kappa = 0") {
  std::mt19937_64 rng(88);
  const UnitQuaternion mu = random_unit_quat(rng);
  const std::size_t n = 10000;
  const auto draws = sample({mu, 0.0, false}, n, 5);
  double g1 = 0, g2 = 0, g3 = 0, g4 = 0;
  for (const auto& q : draws) {
    g1 += q.q1;
    g2 += q.q2;
    g3 += q.q3;
    g4 += q.q4;
  }
  const double resultant =
      std::sqrt(g1 * g1 + g2 * g2 + g3 * g3 + g4 * g4) / n;
  CHECK(resultant <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sampler determinism and estimator consistency at kappa = 50") {
  std::mt19937_64 rng(99);
  const UnitQuaternion mu = random_unit_quat(rng);
  const auto a = sample({mu, 50.0, false}, 1000, 7);
  const auto b = sample({mu, 50.0, false}, 1000, 7);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].q1 == b[i].q1);
    CHECK(a[i].q4 == b[i].q4);
  }
  const auto big = sample({mu, 50.0, false}, 10000, 8);
  const VmfParams fit = ml_estimate(big);
  CHECK(std::abs(fit.kappa - 50.0) / 50.0 < 0.05);
}

TEST_CASE("ml_estimate is equivariant under the orthogonal quaternion action") {
  std::mt19937_64 rng(111);
  const UnitQuaternion mu = random_unit_quat(rng);
  const UnitQuaternion rot = random_unit_quat(rng);
  const auto draws = sample({mu, 15.0, false}, 2000, 17);
  std::vector<UnitQuaternion> rotated;
  rotated.reserve(draws.size());
  for (const auto& q : draws) rotated.push_back(quat_compose(rot, q));
  const VmfParams base = ml_estimate(draws);
  const VmfParams moved = ml_estimate(rotated);
  CHECK(std::abs(moved.kappa - base.kappa) < 1e-10);
  CHECK(moved.mu.dot(quat_compose(rot, base.mu)) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("estimator error decreases with sample size") {
  std::mt19937_64 rng(121);
  const UnitQuaternion mu = random_unit_quat(rng);
  double errs[3];
  const std::size_t sizes[3] = {100, 1000, 10000};
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (int t = 0; t < 5; ++t) {
      const auto draws =
          sample({mu, 30.0, false}, sizes[i], 1000 + 17 * i + t);
      acc += std::abs(ml_estimate(draws).kappa - 30.0);
    }
    errs[i] = acc / 5;
  }
  CHECK(errs[2] < errs[0]);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "symvmf/orient.hpp"
#include "test_support.hpp"

using namespace symvmf;
using symvmf::testing::random_unit_quat;

namespace {

double quat_dist_up_to_sign(const UnitQuaternion& a, const UnitQuaternion& b) {
  const auto d = [&](double s) {
    return std::max({std::abs(a.q1 - s * b.q1), std::abs(a.q2 - s * b.q2),
                     std::abs(a.q3 - s * b.q3), std::abs(a.q4 - s * b.q4)});
  };
  return std::min(d(1.0), d(-1.0));
}

}  // namespace

TEST_CASE("euler_to_quat identity and hand-evaluated cases") {
  const UnitQuaternion id = euler_to_quat({0, 0, 0});
  CHECK(id.q1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.q2 == doctest::Approx(0.0).epsilon(1e-14));

  // alpha = pi alone is a z-rotation by pi
  const UnitQuaternion z = euler_to_quat({M_PI, 0, 0});
  CHECK(quat_dist_up_to_sign(z, UnitQuaternion(0, 0, 0, 1)) < 1e-12);
}

TEST_CASE("euler round trips away from the degeneracy") {
  const EulerAngles e{0.7, 1.1, 2.3};
  const EulerAngles back = quat_to_euler(euler_to_quat(e));
  CHECK(back.alpha == doctest::Approx(e.alpha).epsilon(1e-10));
  CHECK(back.beta == doctest::Approx(e.beta).epsilon(1e-10));
  CHECK(back.gamma == doctest::Approx(e.gamma).epsilon(1e-10));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.0, 2 * M_PI), ub(0.05, M_PI - 0.05);
  for (int i = 0; i < 200; ++i) {
    const EulerAngles r{ua(rng), ub(rng), ua(rng)};
    const EulerAngles rb = quat_to_euler(euler_to_quat(r));
    CHECK(std::abs(rb.alpha - r.alpha) < 1e-10);
    CHECK(std::abs(rb.beta - r.beta) < 1e-10);
    CHECK(std::abs(rb.gamma - r.gamma) < 1e-10);
  }
}

TEST_CASE("quat_to_euler identity, composition oracle, gimbal convention") {
  const EulerAngles e0 = quat_to_euler(UnitQuaternion(1, 0, 0, 0));
  CHECK(e0.alpha == 0.0);
  CHECK(e0.beta == 0.0);
  CHECK(e0.gamma == 0.0);

  // verify by composing back
  const UnitQuaternion q(0.5, 0.5, 0.5, 0.5);
  CHECK(quat_dist_up_to_sign(euler_to_quat(quat_to_euler(q)), q) < 1e-12);

  // beta = 0: (alpha, 0, gamma) collapses to (alpha + gamma, 0, 0)
  const EulerAngles g = quat_to_euler(euler_to_quat({0.4, 0, 0.9}));
  CHECK(g.alpha == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(g.beta == 0.0);
  CHECK(g.gamma == 0.0);
}

TEST_CASE("euler_to_quat rejects out-of-range input") {
  CHECK_THROWS_AS(euler_to_quat({-0.1, 0, 0}), Error);
  CHECK_THROWS_AS(euler_to_quat({0, 4.0, 0}), Error);
  CHECK_THROWS_AS(euler_to_quat({0, 0, 7.0}), Error);
}

TEST_CASE("rodrigues transform matches the quaternion formulas") {
  const UnitQuaternion id = rodrigues_to_quat({0, 0, 0});
  CHECK(quat_dist_up_to_sign(id, UnitQuaternion(1, 0, 0, 0)) < 1e-15);

  const UnitQuaternion a = rodrigues_to_quat({1, 0, 0});
  CHECK(a.q1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(a.q2 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  const UnitQuaternion b = rodrigues_to_quat({1, 1, 1});
  CHECK(b.q1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b.q2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b.q3 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b.q4 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quat_to_rodrigues inverts and rejects near-pi rotations") {
  const RodriguesVector z = quat_to_rodrigues(UnitQuaternion(1, 0, 0, 0));
  CHECK(z.norm() == 0.0);

  const RodriguesVector d = quat_to_rodrigues(UnitQuaternion(0.5, 0.5, 0.5, 0.5));
  CHECK(d.d1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.d2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.d3 == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(quat_to_rodrigues(UnitQuaternion(1e-12, 1, 0, 0)), NearPiRotation);
}

TEST_CASE("rodrigues round trip returns the positive-scalar representative") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const UnitQuaternion q = random_unit_quat(rng);
    if (std::abs(q.q1) <= 1e-6) continue;
    const UnitQuaternion back = rodrigues_to_quat(quat_to_rodrigues(q));
    CHECK(back.q1 > 0.0);
    CHECK(quat_dist_up_to_sign(back, q) < 1e-10);
  }
}

TEST_CASE("quat_compose basics") {
  std::mt19937_64 rng(3);
  const UnitQuaternion q = random_unit_quat(rng);
  CHECK(quat_dist_up_to_sign(quat_compose(q, UnitQuaternion::identity()), q) < 1e-15);

  const UnitQuaternion half_x(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0, 0);
  const UnitQuaternion x180 = quat_compose(half_x, half_x);
  CHECK(quat_dist_up_to_sign(x180, UnitQuaternion(0, 1, 0, 0)) < 1e-12);

  CHECK(quat_dist_up_to_sign(quat_compose(q, quat_inverse(q)),
                             UnitQuaternion::identity()) < 1e-12);
}

TEST_CASE("quat_compose is associative") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const UnitQuaternion a = random_unit_quat(rng);
    const UnitQuaternion b = random_unit_quat(rng);
    const UnitQuaternion c = random_unit_quat(rng);
    const UnitQuaternion lhs = quat_compose(quat_compose(a, b), c);
    const UnitQuaternion rhs = quat_compose(a, quat_compose(b, c));
    CHECK(quat_dist_up_to_sign(lhs, rhs) < 1e-12);
    // same sign, not just same rotation
    CHECK(std::abs(lhs.q1 - rhs.q1) < 1e-12);
  }
}

TEST_CASE("rotation_angle_between is a sign-insensitive metric") {
  std::mt19937_64 rng(13);
  const UnitQuaternion q = random_unit_quat(rng);
  CHECK(rotation_angle_between(q, q) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rotation_angle_between(q, q.negated()) == doctest::Approx(0.0).epsilon(1e-12));

  const UnitQuaternion half_x(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0, 0);
  CHECK(rotation_angle_between(UnitQuaternion::identity(), half_x) ==
        doctest::Approx(M_PI / 2).epsilon(1e-12));

  for (int i = 0; i < 300; ++i) {
    const UnitQuaternion a = random_unit_quat(rng);
    const UnitQuaternion b = random_unit_quat(rng);
    const UnitQuaternion c = random_unit_quat(rng);
    const double ab = rotation_angle_between(a, b);
    const double bc = rotation_angle_between(b, c);
    const double ac = rotation_angle_between(a, c);
    CHECK(ac <= ab + bc + 1e-10);
    CHECK(ab == doctest::Approx(rotation_angle_between(b, a)).epsilon(1e-14));
  }
}

#include "symvmf/orient.hpp"

#include <algorithm>
#include <cmath>

namespace symvmf {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_two_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

}  // namespace

UnitQuaternion::UnitQuaternion(double a, double b, double c, double d)
    : q1(a), q2(b), q3(c), q4(d) {
  const double n = std::sqrt(q1 * q1 + q2 * q2 + q3 * q3 + q4 * q4);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error("UnitQuaternion: cannot normalize zero or non-finite vector");
  }
  q1 /= n;
  q2 /= n;
  q3 /= n;
  q4 /= n;
}

UnitQuaternion UnitQuaternion::from_axis_angle(double ax, double ay, double az,
                                               double angle) {
  const double n = std::sqrt(ax * ax + ay * ay + az * az);
  if (!(n > 0.0)) throw Error("from_axis_angle: zero axis");
  const double s = std::sin(angle / 2.0) / n;
  return UnitQuaternion(std::cos(angle / 2.0), ax * s, ay * s, az * s);
}

UnitQuaternion euler_to_quat(const EulerAngles& e) {
  if (e.alpha < 0.0 || e.alpha > kTwoPi || e.beta < 0.0 || e.beta > M_PI ||
      e.gamma < 0.0 || e.gamma > kTwoPi) {
    throw Error("euler_to_quat: angles outside [0,2pi]x[0,pi]x[0,2pi]");
  }
  // Rz(alpha) * Rx(beta) * Rz(gamma)
  const double s = (e.alpha + e.gamma) / 2.0;
  const double d = (e.alpha - e.gamma) / 2.0;
  const double cb = std::cos(e.beta / 2.0);
  const double sb = std::sin(e.beta / 2.0);
  return UnitQuaternion(cb * std::cos(s), sb * std::cos(d), sb * std::sin(d),
                        cb * std::sin(s));
}

EulerAngles quat_to_euler(const UnitQuaternion& q) {
  const double cb = std::sqrt(q.q1 * q.q1 + q.q4 * q.q4);  // |cos(beta/2)|
  const double sb = std::sqrt(q.q2 * q.q2 + q.q3 * q.q3);  // |sin(beta/2)|
  EulerAngles e;
  e.beta = 2.0 * std::atan2(sb, cb);
  constexpr double kEps = 1e-12;
  if (sb <= kEps) {
    // beta = 0: only alpha + gamma is determined; take gamma = 0.
    e.beta = 0.0;
    e.gamma = 0.0;
    e.alpha = wrap_two_pi(2.0 * std::atan2(q.q4, q.q1));
  } else if (cb <= kEps) {
    // beta = pi: only alpha - gamma is determined; take gamma = 0.
    e.beta = M_PI;
    e.gamma = 0.0;
    e.alpha = wrap_two_pi(2.0 * std::atan2(q.q3, q.q2));
  } else {
    const double s = std::atan2(q.q4, q.q1);
    const double d = std::atan2(q.q3, q.q2);
    e.alpha = wrap_two_pi(s + d);
    e.gamma = wrap_two_pi(s - d);
  }
  return e;
}

UnitQuaternion rodrigues_to_quat(const RodriguesVector& d) {
  if (!std::isfinite(d.d1) || !std::isfinite(d.d2) || !std::isfinite(d.d3)) {
    throw Error("rodrigues_to_quat: non-finite components");
  }
  const double s = 1.0 / std::sqrt(1.0 + d.d1 * d.d1 + d.d2 * d.d2 + d.d3 * d.d3);
  return UnitQuaternion(s, d.d1 * s, d.d2 * s, d.d3 * s);
}

RodriguesVector quat_to_rodrigues(const UnitQuaternion& q) {
  const UnitQuaternion p = q.positive_scalar();
  if (p.q1 <= 1e-9) {
    throw NearPiRotation("quat_to_rodrigues: rotation angle too close to pi");
  }
  return RodriguesVector{p.q2 / p.q1, p.q3 / p.q1, p.q4 / p.q1};
}

UnitQuaternion quat_compose(const UnitQuaternion& a, const UnitQuaternion& b) {
  return UnitQuaternion(
      a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3 - a.q4 * b.q4,
      a.q1 * b.q2 + a.q2 * b.q1 + a.q3 * b.q4 - a.q4 * b.q3,
      a.q1 * b.q3 - a.q2 * b.q4 + a.q3 * b.q1 + a.q4 * b.q2,
      a.q1 * b.q4 + a.q2 * b.q3 - a.q3 * b.q2 + a.q4 * b.q1);
}

UnitQuaternion quat_inverse(const UnitQuaternion& q) { return q.conjugate(); }

double rotation_angle_between(const UnitQuaternion& a, const UnitQuaternion& b) {
  // atan2 on the relative rotation keeps full precision near 0 and pi,
  // where acos of the dot product loses half the significant digits
  const UnitQuaternion rel = quat_compose(quat_inverse(a), b);
  const double s = std::sqrt(rel.q2 * rel.q2 + rel.q3 * rel.q3 + rel.q4 * rel.q4);
  return 2.0 * std::atan2(s, std::abs(rel.q1));
}

}  // namespace symvmf

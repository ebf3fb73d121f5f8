#pragma once

#include <array>
#include <cmath>

#include "symvmf/errors.hpp"

namespace symvmf {

// Unit quaternion (q1, q2, q3, q4) on S3, q1 the scalar part.
// The sign is meaningful: q and -q are the same rotation but distinct
// points on S3, and the distributions in this library distinguish them.
struct UnitQuaternion {
  double q1 = 1.0, q2 = 0.0, q3 = 0.0, q4 = 0.0;

  UnitQuaternion() = default;
  UnitQuaternion(double a, double b, double c, double d);

  double dot(const UnitQuaternion& o) const {
    return q1 * o.q1 + q2 * o.q2 + q3 * o.q3 + q4 * o.q4;
  }
  UnitQuaternion conjugate() const { return UnitQuaternion(q1, -q2, -q3, -q4); }
  UnitQuaternion negated() const { return UnitQuaternion(-q1, -q2, -q3, -q4); }

  // Representative of {q, -q} with nonnegative scalar part.
  UnitQuaternion positive_scalar() const { return q1 < 0.0 ? negated() : *this; }

  std::array<double, 4> as_array() const { return {q1, q2, q3, q4}; }

  static UnitQuaternion identity() { return UnitQuaternion(); }
  static UnitQuaternion from_axis_angle(double ax, double ay, double az, double angle);
};

// ZXZ (Bunge) Euler angles, alpha/gamma in [0, 2pi], beta in [0, pi].
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// Rodrigues vector v * tan(w/2); valid for rotation angles w < pi.
struct RodriguesVector {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;

  double norm() const { return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3); }
};

UnitQuaternion euler_to_quat(const EulerAngles& e);
EulerAngles quat_to_euler(const UnitQuaternion& q);

UnitQuaternion rodrigues_to_quat(const RodriguesVector& d);
RodriguesVector quat_to_rodrigues(const UnitQuaternion& q);

// Hamilton product a * b (rotation a applied after b).
UnitQuaternion quat_compose(const UnitQuaternion& a, const UnitQuaternion& b);
UnitQuaternion quat_inverse(const UnitQuaternion& q);

// Rotation angle 2*acos(|<a,b>|) in [0, pi]; sign-insensitive.
double rotation_angle_between(const UnitQuaternion& a, const UnitQuaternion& b);

}  // namespace symvmf

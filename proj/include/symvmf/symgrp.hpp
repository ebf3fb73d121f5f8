#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "symvmf/orient.hpp"

namespace symvmf {

// Half-space constraint tan(w/4) >= |r . l| in Rodrigues space, one per
// non-identity group element (w, l its rotation angle and axis).
struct FzConstraint {
  double tan_quarter_angle;
  double lx, ly, lz;
};

// Finite group of rotations represented as unit quaternions acting by
// left multiplication. Element 0 is the identity. Group axioms are
// verified exhaustively at construction; instances are immutable.
class SymmetryGroup {
 public:
  SymmetryGroup(std::string name, std::vector<UnitQuaternion> elements,
                bool antipodal_extended);

  const std::string& name() const { return name_; }
  std::size_t order() const { return elements_.size(); }
  bool antipodal_extended() const { return antipodal_extended_; }
  // True when the element set is itself a group under quaternion
  // multiplication (closure holds with signs, not just as rotations).
  bool sign_closed() const { return sign_closed_; }
  const UnitQuaternion& element(std::size_t m) const { return elements_[m]; }
  const std::vector<UnitQuaternion>& elements() const { return elements_; }
  const std::vector<FzConstraint>& fz_constraints() const { return fz_constraints_; }

 private:
  std::string name_;
  std::vector<UnitQuaternion> elements_;
  bool antipodal_extended_;
  bool sign_closed_ = true;
  std::vector<FzConstraint> fz_constraints_;
};

// name in {trivial, cubic_m3m}; antipodal requests the {+g, -g} extension.
SymmetryGroup builtin_group(const std::string& name, bool antipodal = false);

// CSV of rows q1,q2,q3,q4 (optional header); axioms verified.
SymmetryGroup load_group(const std::string& path);

// The {+g, -g} extension; identity if grp is already extended.
SymmetryGroup antipodal_extension(const SymmetryGroup& grp);

// Smallest sign-closed superset: grp itself when its elements already form
// a group under quaternion multiplication, otherwise the {+g, -g} extension.
// Mixture densities need this; a set closed only up to sign is not a group
// of orthogonal matrices acting by left multiplication.
SymmetryGroup sign_closure(const SymmetryGroup& grp);

// Left multiplication by the group element: the orthogonal action Q x.
UnitQuaternion apply(const UnitQuaternion& g, const UnitQuaternion& x);

// The 13 inequalities of the cubic fundamental zone in quaternion form,
// evaluated on the sign representative with q1 > 0. Boundary is inside.
bool in_fundamental_zone_cubic(const UnitQuaternion& q);

// Rodrigues-space half-space intersection over the group's non-identity
// elements; agrees with the cubic inequality form on cubic_m3m.
bool in_fundamental_zone_general(const UnitQuaternion& q, const SymmetryGroup& grp);

struct FzMapping {
  UnitQuaternion q;        // in the fundamental zone, q1 > 0
  std::size_t element_index;  // lowest index whose translate is in the FZ
};

FzMapping map_to_fz(const UnitQuaternion& q, const SymmetryGroup& grp);

// Symmetry-aware angular distance: min over the group orbit.
double disorientation(const UnitQuaternion& a, const UnitQuaternion& b,
                      const SymmetryGroup& grp);

}  // namespace symvmf

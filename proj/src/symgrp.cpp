#include "symvmf/symgrp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "symvmf/errors.hpp"

namespace symvmf {

namespace {

constexpr double kAxiomTol = 1e-9;

bool same_up_to_sign(const UnitQuaternion& a, const UnitQuaternion& b, double tol) {
  const auto diff = [&](double sign) {
    return std::max({std::abs(a.q1 - sign * b.q1), std::abs(a.q2 - sign * b.q2),
                     std::abs(a.q3 - sign * b.q3), std::abs(a.q4 - sign * b.q4)});
  };
  return diff(1.0) <= tol || diff(-1.0) <= tol;
}

bool same_exact(const UnitQuaternion& a, const UnitQuaternion& b, double tol) {
  return std::max({std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2),
                   std::abs(a.q3 - b.q3), std::abs(a.q4 - b.q4)}) <= tol;
}

}  // namespace

SymmetryGroup::SymmetryGroup(std::string name, std::vector<UnitQuaternion> elements,
                             bool antipodal_extended)
    : name_(std::move(name)),
      elements_(std::move(elements)),
      antipodal_extended_(antipodal_extended) {
  if (elements_.empty()) {
    throw GroupAxiomViolation(name_ + ": empty element set");
  }
  if (!same_exact(elements_[0], UnitQuaternion::identity(), kAxiomTol)) {
    throw GroupAxiomViolation(name_ + ": element 0 is not the identity");
  }
  const std::size_t m = elements_.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (antipodal_extended_
              ? same_exact(elements_[i], elements_[j], 1e-6)
              : rotation_angle_between(elements_[i], elements_[j]) <= 1e-6) {
        throw GroupAxiomViolation(name_ + ": elements " + std::to_string(i) +
                                  " and " + std::to_string(j) + " coincide");
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    bool has_inverse = false;
    for (std::size_t j = 0; j < m; ++j) {
      const UnitQuaternion prod = quat_compose(elements_[i], elements_[j]);
      bool closed = false;
      bool exact = false;
      for (std::size_t k = 0; k < m; ++k) {
        if (same_exact(prod, elements_[k], kAxiomTol)) {
          exact = true;
          closed = true;
          break;
        }
      }
      if (!exact) {
        sign_closed_ = false;
        for (std::size_t k = 0; k < m; ++k) {
          if (same_up_to_sign(prod, elements_[k], kAxiomTol)) {
            closed = true;
            break;
          }
        }
      }
      if (!closed) {
        throw GroupAxiomViolation(name_ + ": product of elements " +
                                  std::to_string(i) + " and " + std::to_string(j) +
                                  " is not in the group");
      }
      if (same_up_to_sign(prod, UnitQuaternion::identity(), kAxiomTol)) {
        has_inverse = true;
      }
    }
    if (!has_inverse) {
      throw GroupAxiomViolation(name_ + ": element " + std::to_string(i) +
                                " has no inverse");
    }
  }

  // Rodrigues half-space constraints for the non-identity rotations.
  for (const UnitQuaternion& g : elements_) {
    const UnitQuaternion p = g.positive_scalar();
    const double c = std::min(1.0, p.q1);
    const double w = 2.0 * std::acos(c);
    if (w <= 1e-12) continue;
    const double s = std::sqrt(p.q2 * p.q2 + p.q3 * p.q3 + p.q4 * p.q4);
    fz_constraints_.push_back(
        {std::tan(w / 4.0), p.q2 / s, p.q3 / s, p.q4 / s});
  }
}

SymmetryGroup builtin_group(const std::string& name, bool antipodal) {
  std::vector<UnitQuaternion> els;
  els.push_back(UnitQuaternion::identity());
  if (name == "trivial") {
    // identity only
  } else if (name == "cubic_m3m") {
    // 24 proper rotations of the octahedral group.
    const double axes[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const auto& a : axes) {
      els.push_back(UnitQuaternion::from_axis_angle(a[0], a[1], a[2], M_PI / 2));
      els.push_back(UnitQuaternion::from_axis_angle(a[0], a[1], a[2], -M_PI / 2));
      els.push_back(UnitQuaternion::from_axis_angle(a[0], a[1], a[2], M_PI));
    }
    const double diag[4][3] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}};
    for (const auto& a : diag) {
      els.push_back(
          UnitQuaternion::from_axis_angle(a[0], a[1], a[2], 2 * M_PI / 3));
      els.push_back(
          UnitQuaternion::from_axis_angle(a[0], a[1], a[2], -2 * M_PI / 3));
    }
    const double edge[6][3] = {{1, 1, 0}, {1, -1, 0}, {1, 0, 1},
                               {1, 0, -1}, {0, 1, 1}, {0, 1, -1}};
    for (const auto& a : edge) {
      els.push_back(UnitQuaternion::from_axis_angle(a[0], a[1], a[2], M_PI));
    }
  } else {
    throw UnknownGroup("unknown group name: " + name);
  }
  if (antipodal) {
    const std::size_t m = els.size();
    els.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) els.push_back(els[i].negated());
  }
  return SymmetryGroup(name + (antipodal ? "+antipodal" : ""), std::move(els),
                       antipodal);
}

SymmetryGroup load_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open group file: " + path);
  std::vector<UnitQuaternion> els;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double v[4];
    char comma;
    if (!(ss >> v[0])) {
      if (lineno == 1) continue;  // header row
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected q1,q2,q3,q4");
    }
    for (int i = 1; i < 4; ++i) {
      if (!(ss >> comma >> v[i]) || comma != ',') {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected q1,q2,q3,q4");
      }
    }
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
    if (std::abs(n - 1.0) > 1e-6) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": row is not a unit quaternion");
    }
    els.emplace_back(v[0], v[1], v[2], v[3]);
  }
  if (els.empty()) throw ParseError(path + ": no quaternion rows");

  // Identity first.
  auto it = std::find_if(els.begin(), els.end(), [](const UnitQuaternion& q) {
    return same_exact(q, UnitQuaternion::identity(), kAxiomTol);
  });
  if (it == els.end()) {
    throw GroupAxiomViolation(path + ": identity element missing");
  }
  std::iter_swap(els.begin(), it);

  bool antipodal = false;
  for (std::size_t i = 0; i < els.size() && !antipodal; ++i) {
    for (std::size_t j = i + 1; j < els.size(); ++j) {
      if (same_exact(els[i], els[j].negated(), kAxiomTol)) {
        antipodal = true;
        break;
      }
    }
  }
  return SymmetryGroup(path, std::move(els), antipodal);
}

SymmetryGroup antipodal_extension(const SymmetryGroup& grp) {
  if (grp.antipodal_extended()) return grp;
  std::vector<UnitQuaternion> els = grp.elements();
  const std::size_t m = els.size();
  els.reserve(2 * m);
  for (std::size_t i = 0; i < m; ++i) els.push_back(els[i].negated());
  return SymmetryGroup(grp.name() + "+antipodal", std::move(els), true);
}

SymmetryGroup sign_closure(const SymmetryGroup& grp) {
  return grp.sign_closed() ? grp : antipodal_extension(grp);
}

UnitQuaternion apply(const UnitQuaternion& g, const UnitQuaternion& x) {
  return quat_compose(g, x);
}

bool in_fundamental_zone_cubic(const UnitQuaternion& q) {
  const UnitQuaternion p = q.positive_scalar();
  if (p.q1 <= 1e-9) {
    throw NearPiRotation("in_fundamental_zone_cubic: q1 too close to zero");
  }
  constexpr double kTol = 1e-12;
  const double a = p.q2 / p.q1, b = p.q3 / p.q1, c = p.q4 / p.q1;
  const double lim1 = std::sqrt(2.0) - 1.0 + kTol;
  if (std::abs(a) > lim1 || std::abs(b) > lim1 || std::abs(c) > lim1) return false;
  const double lim2 = std::sqrt(2.0) + kTol;
  if (std::abs(a - b) > lim2 || std::abs(a + b) > lim2 || std::abs(a - c) > lim2 ||
      std::abs(a + c) > lim2 || std::abs(b - c) > lim2 || std::abs(b + c) > lim2) {
    return false;
  }
  const double lim3 = 1.0 + kTol;
  return std::abs(a + b + c) <= lim3 && std::abs(a - b + c) <= lim3 &&
         std::abs(a + b - c) <= lim3 && std::abs(a - b - c) <= lim3;
}

bool in_fundamental_zone_general(const UnitQuaternion& q, const SymmetryGroup& grp) {
  const auto& cons = grp.fz_constraints();
  if (cons.empty()) return true;
  const UnitQuaternion p = q.positive_scalar();
  if (p.q1 <= 1e-9) {
    throw NearPiRotation("in_fundamental_zone_general: q1 too close to zero");
  }
  const double r1 = p.q2 / p.q1, r2 = p.q3 / p.q1, r3 = p.q4 / p.q1;
  for (const FzConstraint& c : cons) {
    const double proj = r1 * c.lx + r2 * c.ly + r3 * c.lz;
    if (std::abs(proj) > c.tan_quarter_angle + 1e-12) return false;
  }
  return true;
}

FzMapping map_to_fz(const UnitQuaternion& q, const SymmetryGroup& grp) {
  for (std::size_t m = 0; m < grp.order(); ++m) {
    const UnitQuaternion t = apply(grp.element(m), q).positive_scalar();
    try {
      if (in_fundamental_zone_general(t, grp)) return {t, m};
    } catch (const NearPiRotation&) {
      // this translate sits at the Rodrigues singularity; another one won't
    }
  }
  throw NoZoneFound("map_to_fz: no group translate lies in the fundamental zone");
}

double disorientation(const UnitQuaternion& a, const UnitQuaternion& b,
                      const SymmetryGroup& grp) {
  double best = M_PI;
  for (const UnitQuaternion& g : grp.elements()) {
    best = std::min(best, rotation_angle_between(apply(g, a), b));
  }
  return best;
}

}  // namespace symvmf

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "symvmf/orient.hpp"

namespace symvmf {

inline constexpr double kKappaMax = 1e5;

// Mean direction and concentration of a von Mises-Fisher density on S3.
// kappa_saturated marks estimates clipped at kKappaMax (resultant length
// indistinguishable from 1).
struct VmfParams {
  UnitQuaternion mu;
  double kappa = 0.0;
  bool kappa_saturated = false;
};

// log I_nu(x) for integer nu >= 0, finite for x up to well past kKappaMax.
double log_bessel_i(int nu, double x);

// log c_4(kappa) = log kappa - log(4 pi^2) - log I_1(kappa);
// kappa = 0 gives the uniform density log(1/(2 pi^2)).
double log_norm_const(double kappa);

double log_density(const UnitQuaternion& x, const VmfParams& params);

// A_4(u) = I_2(u)/I_1(u), the mean resultant length at concentration u.
double bessel_ratio_A(double u);

struct BesselRatioInv {
  double kappa;
  bool saturated;
};

// Inverse of A_4 by Newton iteration with bisection fallback; r beyond
// A_4(kKappaMax) saturates.
BesselRatioInv bessel_ratio_A_inv(double r);

VmfParams ml_estimate(const std::vector<UnitQuaternion>& samples);

std::vector<UnitQuaternion> sample(const VmfParams& params, std::size_t n,
                                   std::uint64_t seed);

// Single draw using caller-owned generator state.
UnitQuaternion sample_one(const VmfParams& params, std::mt19937_64& rng);

UnitQuaternion uniform_quaternion(std::mt19937_64& rng);

}  // namespace symvmf

#include "symvmf/vmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symvmf/errors.hpp"

namespace symvmf {

namespace {

double log_bessel_i_series(int nu, double x) {
  // sum_k (x/2)^(nu+2k) / (k! (nu+k)!)
  const double h = x / 2.0;
  double term = 1.0;
  for (int i = 1; i <= nu; ++i) term *= h / i;
  double sum = term;
  const double h2 = h * h;
  for (int k = 1; k < 500; ++k) {
    term *= h2 / (k * (nu + k));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return std::log(sum);
}

double log_bessel_i_asymptotic(int nu, double x) {
  // I_nu(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k, a_k the uniform
  // large-argument coefficients.
  const double mu4 = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu4 - odd * odd) / (8.0 * x * k);
    if (std::abs(term) >= prev) break;  // divergent tail reached
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < 1e-18) break;
  }
  return x - 0.5 * std::log(2.0 * M_PI * x) + std::log(sum);
}

}  // namespace

double log_bessel_i(int nu, double x) {
  if (x < 0.0 || nu < 0) throw Error("log_bessel_i: requires x >= 0, nu >= 0");
  if (x == 0.0) {
    return nu == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return x < 40.0 ? log_bessel_i_series(nu, x) : log_bessel_i_asymptotic(nu, x);
}

double log_norm_const(double kappa) {
  if (kappa < 0.0 || kappa > kKappaMax) {
    throw Error("log_norm_const: kappa outside [0, KAPPA_MAX]");
  }
  if (kappa < 1e-12) return -std::log(2.0 * M_PI * M_PI);
  return std::log(kappa) - std::log(4.0 * M_PI * M_PI) - log_bessel_i(1, kappa);
}

double log_density(const UnitQuaternion& x, const VmfParams& params) {
  return log_norm_const(params.kappa) + params.kappa * params.mu.dot(x);
}

double bessel_ratio_A(double u) {
  if (u < 0.0 || u > kKappaMax) throw Error("bessel_ratio_A: u outside range");
  if (u == 0.0) return 0.0;
  return std::exp(log_bessel_i(2, u) - log_bessel_i(1, u));
}

BesselRatioInv bessel_ratio_A_inv(double r) {
  if (r < 0.0 || r >= 1.0) {
    throw ResultantOutOfRange("bessel_ratio_A_inv: r must lie in [0, 1)");
  }
  if (r == 0.0) return {0.0, false};
  if (r >= bessel_ratio_A(kKappaMax)) return {kKappaMax, true};

  double lo = 0.0, hi = kKappaMax;
  // Banerjee-style seed for the S3 case (p = 4).
  double u = std::clamp(r * (4.0 - r * r) / (1.0 - r * r), 1e-12, kKappaMax);
  for (int iter = 0; iter < 100; ++iter) {
    const double a = bessel_ratio_A(u);
    const double f = a - r;
    if (std::abs(f) <= 1e-10) return {u, false};
    if (f > 0.0) hi = u; else lo = u;
    const double deriv = 1.0 - a * a - 3.0 * a / u;
    double next = deriv > 0.0 ? u - f / deriv : -1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    u = next;
  }
  return {u, false};  // bisection has converged well past 1e-10 by here
}

VmfParams ml_estimate(const std::vector<UnitQuaternion>& samples) {
  if (samples.size() < 2) throw Error("ml_estimate: need at least 2 samples");
  double g1 = 0, g2 = 0, g3 = 0, g4 = 0;
  for (const auto& q : samples) {
    g1 += q.q1;
    g2 += q.q2;
    g3 += q.q3;
    g4 += q.q4;
  }
  const double norm = std::sqrt(g1 * g1 + g2 * g2 + g3 * g3 + g4 * g4);
  if (norm <= 1e-12) {
    throw DegenerateResultant("ml_estimate: resultant vector vanishes");
  }
  const double rbar = norm / static_cast<double>(samples.size());
  VmfParams p;
  p.mu = UnitQuaternion(g1, g2, g3, g4);
  if (rbar >= 1.0) {
    p.kappa = kKappaMax;
    p.kappa_saturated = true;
  } else {
    const BesselRatioInv inv = bessel_ratio_A_inv(rbar);
    p.kappa = inv.kappa;
    p.kappa_saturated = inv.saturated;
  }
  return p;
}

UnitQuaternion uniform_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const double a = normal(rng), b = normal(rng), c = normal(rng), d = normal(rng);
    const double n2 = a * a + b * b + c * c + d * d;
    if (n2 > 1e-12) return UnitQuaternion(a, b, c, d);
  }
}

UnitQuaternion sample_one(const VmfParams& params, std::mt19937_64& rng) {
  if (params.kappa < 1e-12) return uniform_quaternion(rng);

  // Wood's rejection sampler for the component along mu (p = 4).
  const double kappa = params.kappa;
  const double b = (-2.0 * kappa + std::sqrt(4.0 * kappa * kappa + 9.0)) / 3.0;
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + 3.0 * std::log(1.0 - x0 * x0);
  std::gamma_distribution<double> gamma(1.5, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double w = 0.0;
  for (;;) {
    const double g1 = gamma(rng), g2 = gamma(rng);
    const double z = g1 / (g1 + g2);  // Beta(3/2, 3/2)
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = unif(rng);
    if (kappa * w + 3.0 * std::log(1.0 - x0 * w) - c >= std::log(u)) break;
  }

  // Uniform direction in the tangent space at mu.
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& mu = params.mu;
  double v1, v2, v3, v4;
  for (;;) {
    v1 = normal(rng);
    v2 = normal(rng);
    v3 = normal(rng);
    v4 = normal(rng);
    const double proj = v1 * mu.q1 + v2 * mu.q2 + v3 * mu.q3 + v4 * mu.q4;
    v1 -= proj * mu.q1;
    v2 -= proj * mu.q2;
    v3 -= proj * mu.q3;
    v4 -= proj * mu.q4;
    const double n2 = v1 * v1 + v2 * v2 + v3 * v3 + v4 * v4;
    if (n2 > 1e-12) {
      const double inv = 1.0 / std::sqrt(n2);
      v1 *= inv;
      v2 *= inv;
      v3 *= inv;
      v4 *= inv;
      break;
    }
  }
  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  return UnitQuaternion(w * mu.q1 + s * v1, w * mu.q2 + s * v2,
                        w * mu.q3 + s * v3, w * mu.q4 + s * v4);
}

std::vector<UnitQuaternion> sample(const VmfParams& params, std::size_t n,
                                   std::uint64_t seed) {
  if (n < 1) throw Error("sample: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<UnitQuaternion> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(params, rng));
  return out;
}

}  // namespace symvmf

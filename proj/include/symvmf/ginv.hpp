#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symvmf/symgrp.hpp"
#include "symvmf/vmf.hpp"

namespace symvmf {

// Equal-weight mixture of VMF densities over the group orbit of mu; the
// density is invariant under every element of the group.
struct GInvariantVmf {
  SymmetryGroup group;
  VmfParams params;
};

// Posterior component weights r[i][m]; each row sums to 1.
class Responsibilities {
 public:
  Responsibilities() = default;
  Responsibilities(std::size_t n, std::size_t m)
      : n_(n), m_(m), data_(n * m, 0.0) {}

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return m_; }
  double& at(std::size_t i, std::size_t m) { return data_[i * m_ + m]; }
  double at(std::size_t i, std::size_t m) const { return data_[i * m_ + m]; }

 private:
  std::size_t n_ = 0, m_ = 0;
  std::vector<double> data_;
};

enum class EmInit { FzMl, RandomRestarts };

struct EmConfig {
  double tolerance = 1e-8;  // relative log-likelihood change
  int max_iterations = 200;
  EmInit init = EmInit::FzMl;
  int restarts = 1;          // used by RandomRestarts
  std::uint64_t seed = 0;    // used by RandomRestarts
  std::optional<VmfParams> initial;  // overrides the init strategy when set
};

struct EmResult {
  VmfParams params;      // mu canonicalized into the fundamental zone
  VmfParams params_raw;  // orbit representative the iteration converged to
  std::vector<double> log_likelihood_trace;
  int iterations = 0;
  bool converged = false;
  Responsibilities responsibilities;
};

double log_density_ginv(const UnitQuaternion& x, const GInvariantVmf& model);

std::vector<UnitQuaternion> sample_ginv(const GInvariantVmf& model, std::size_t n,
                                        std::uint64_t seed);

EmResult em_fit(const std::vector<UnitQuaternion>& samples,
                const SymmetryGroup& group, const EmConfig& config = {});

// Starting point for the EM iteration; restart_index selects the draw
// under RandomRestarts.
VmfParams em_init(const std::vector<UnitQuaternion>& samples,
                  const SymmetryGroup& group, const EmConfig& config,
                  int restart_index = 0);

// Baseline: map every sample to the fundamental zone, then closed-form ML.
VmfParams modified_ml_fit(const std::vector<UnitQuaternion>& samples,
                          const SymmetryGroup& group);

// Group-invariant kernel density estimate at x with a VMF kernel.
double kde_ginv(const std::vector<UnitQuaternion>& samples,
                const SymmetryGroup& group, double smoothing_kappa,
                const UnitQuaternion& x);

}  // namespace symvmf

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace symvmf {

enum class Estimator { Naive, ModifiedMl, Em };

std::string estimator_name(Estimator e);

struct SweepConfig {
  double kappa_min = 1.0;
  double kappa_max = 100.0;
  std::size_t steps = 25;
  std::size_t n = 1000;
  std::size_t trials = 100;
  std::string group = "cubic_m3m";
  std::uint64_t seed = 0;
  std::vector<Estimator> estimators = {Estimator::Naive, Estimator::ModifiedMl,
                                       Estimator::Em};
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct SweepRow {
  double kappa_o = 0.0;
  Estimator estimator = Estimator::Naive;
  double inner_raw = 0.0;   // mean <mu_hat, mu_o> after FZ canonicalization
  double inner_sym = 0.0;   // mean max over the orbit of <Q_m mu_hat, mu_o>
  double kappa_hat_mean = 0.0;
  double kappa_bias = 0.0;
  double se_inner = 0.0;
  double se_kappa = 0.0;
  std::size_t failed_trials = 0;
};

std::vector<SweepRow> run_sweep(const SweepConfig& config);

// Writes sweep.csv plus inner_product.svg and kappa_bias.svg under out_dir.
void emit_report(const std::vector<SweepRow>& rows, const std::string& out_dir);

}  // namespace symvmf

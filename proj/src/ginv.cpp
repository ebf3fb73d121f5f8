#include "symvmf/ginv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symvmf/errors.hpp"

namespace symvmf {

namespace {

double log_sum_exp(const std::vector<double>& v) {
  const double hi = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

// Mixture components: the group elements, sign-extended when the set is
// closed only up to sign. A 24-element rotation set is not a group of
// orthogonal matrices under left multiplication, so invariance needs the
// {+g, -g} closure; a sign-closed set (e.g. the trivial group) is kept.
std::vector<UnitQuaternion> mixture_ops(const SymmetryGroup& grp) {
  std::vector<UnitQuaternion> ops = grp.elements();
  if (!grp.sign_closed()) {
    const std::size_t m = ops.size();
    ops.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) ops.push_back(ops[i].negated());
  }
  return ops;
}

// Q_m^T x for every mixture component; constant across EM iterations.
std::vector<UnitQuaternion> pulled_back(const UnitQuaternion& x,
                                        const std::vector<UnitQuaternion>& ops) {
  std::vector<UnitQuaternion> out;
  out.reserve(ops.size());
  for (const UnitQuaternion& g : ops) {
    out.push_back(quat_compose(g.conjugate(), x));
  }
  return out;
}

struct EmRun {
  VmfParams params;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
  Responsibilities resp;
};

EmRun run_em_chain(const std::vector<std::vector<UnitQuaternion>>& xback,
                   std::size_t n, std::size_t m, VmfParams params,
                   const EmConfig& config) {
  EmRun run;
  run.resp = Responsibilities(n, m);
  const double log_m = std::log(static_cast<double>(m));
  std::vector<double> comp(m);
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter <= config.max_iterations; ++iter) {
    const double logc = log_norm_const(params.kappa);
    double ll = 0.0;
    double g1 = 0, g2 = 0, g3 = 0, g4 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        comp[j] = logc + params.kappa * params.mu.dot(xback[i][j]);
      }
      const double lse = log_sum_exp(comp);
      ll += lse - log_m;
      for (std::size_t j = 0; j < m; ++j) {
        const double r = std::exp(comp[j] - lse);
        run.resp.at(i, j) = r;
        g1 += r * xback[i][j].q1;
        g2 += r * xback[i][j].q2;
        g3 += r * xback[i][j].q3;
        g4 += r * xback[i][j].q4;
      }
    }
    if (!std::isfinite(ll)) {
      throw NonFiniteLikelihood("em_fit: non-finite mixture log-likelihood");
    }
    run.trace.push_back(ll);
    if (iter > 0 &&
        std::abs(ll - prev_ll) <= config.tolerance * std::max(1.0, std::abs(prev_ll))) {
      run.converged = true;
      break;
    }
    prev_ll = ll;
    if (iter == config.max_iterations) break;

    // M-step: gamma = sum_i sum_m r_im Q_m^T x_i
    const double norm = std::sqrt(g1 * g1 + g2 * g2 + g3 * g3 + g4 * g4);
    if (norm <= 1e-12) {
      throw DegenerateResultant("em_fit: resultant vector vanishes in M-step");
    }
    params.mu = UnitQuaternion(g1, g2, g3, g4);
    const double rbar = norm / static_cast<double>(n);
    if (rbar >= 1.0) {
      params.kappa = kKappaMax;
      params.kappa_saturated = true;
    } else {
      const BesselRatioInv inv = bessel_ratio_A_inv(rbar);
      params.kappa = inv.kappa;
      params.kappa_saturated = inv.saturated;
    }
    ++run.iterations;
  }
  run.params = params;
  return run;
}

}  // namespace

double log_density_ginv(const UnitQuaternion& x, const GInvariantVmf& model) {
  const std::vector<UnitQuaternion> ops = mixture_ops(model.group);
  const double logc = log_norm_const(model.params.kappa);
  std::vector<double> comp(ops.size());
  for (std::size_t j = 0; j < ops.size(); ++j) {
    comp[j] = logc + model.params.kappa * apply(ops[j], model.params.mu).dot(x);
  }
  return log_sum_exp(comp) - std::log(static_cast<double>(ops.size()));
}

std::vector<UnitQuaternion> sample_ginv(const GInvariantVmf& model, std::size_t n,
                                        std::uint64_t seed) {
  if (n < 1) throw Error("sample_ginv: n must be >= 1");
  const std::vector<UnitQuaternion> ops = mixture_ops(model.group);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, ops.size() - 1);
  std::vector<UnitQuaternion> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const UnitQuaternion base = sample_one(model.params, rng);
    // Component label m means x was drawn with mean Q_m mu, i.e. Q_m^T
    // applied to a base draw.
    out.push_back(quat_compose(ops[pick(rng)].conjugate(), base));
  }
  return out;
}

VmfParams em_init(const std::vector<UnitQuaternion>& samples,
                  const SymmetryGroup& group, const EmConfig& config,
                  int restart_index) {
  if (config.initial) return *config.initial;
  if (config.init == EmInit::FzMl) {
    return modified_ml_fit(samples, group);
  }
  std::mt19937_64 rng(config.seed + 0x9e3779b97f4a7c15ULL *
                                        static_cast<std::uint64_t>(restart_index + 1));
  VmfParams p;
  p.mu = uniform_quaternion(rng);
  // near-flat starts sit on a saddle of the sign-symmetric mixture (the
  // +g/-g component pulls cancel and EM crawls); 10 breaks the symmetry
  p.kappa = 10.0;
  return p;
}

EmResult em_fit(const std::vector<UnitQuaternion>& samples,
                const SymmetryGroup& group, const EmConfig& config) {
  if (samples.size() < 2) throw Error("em_fit: need at least 2 samples");
  const std::size_t n = samples.size();
  const std::vector<UnitQuaternion> ops = mixture_ops(group);
  const std::size_t m = ops.size();
  std::vector<std::vector<UnitQuaternion>> xback;
  xback.reserve(n);
  for (const auto& x : samples) xback.push_back(pulled_back(x, ops));

  const int chains = config.init == EmInit::RandomRestarts
                         ? std::max(1, config.restarts)
                         : 1;
  EmRun best;
  bool have_best = false;
  for (int c = 0; c < chains; ++c) {
    EmRun run = run_em_chain(xback, n, m, em_init(samples, group, config, c), config);
    if (!have_best || run.trace.back() > best.trace.back()) {
      best = std::move(run);
      have_best = true;
    }
  }

  EmResult result;
  result.params_raw = best.params;
  result.params = best.params;
  result.params.mu = map_to_fz(best.params.mu, group).q;
  result.log_likelihood_trace = std::move(best.trace);
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.responsibilities = std::move(best.resp);
  return result;
}

VmfParams modified_ml_fit(const std::vector<UnitQuaternion>& samples,
                          const SymmetryGroup& group) {
  if (samples.size() < 2) throw Error("modified_ml_fit: need at least 2 samples");
  std::vector<UnitQuaternion> mapped;
  mapped.reserve(samples.size());
  for (const auto& q : samples) mapped.push_back(map_to_fz(q, group).q);
  return ml_estimate(mapped);
}

double kde_ginv(const std::vector<UnitQuaternion>& samples,
                const SymmetryGroup& group, double smoothing_kappa,
                const UnitQuaternion& x) {
  if (samples.empty()) throw Error("kde_ginv: need at least 1 sample");
  if (!(smoothing_kappa > 0.0)) throw Error("kde_ginv: smoothing_kappa must be > 0");
  const std::vector<UnitQuaternion> ops = mixture_ops(group);
  const double logc = log_norm_const(smoothing_kappa);
  std::vector<double> terms;
  terms.reserve(samples.size() * ops.size());
  for (const auto& xi : samples) {
    for (const UnitQuaternion& g : ops) {
      terms.push_back(logc + smoothing_kappa * xi.dot(apply(g, x)));
    }
  }
  const double log_nm = std::log(static_cast<double>(samples.size())) +
                        std::log(static_cast<double>(ops.size()));
  return std::exp(log_sum_exp(terms) - log_nm);
}

}  // namespace symvmf

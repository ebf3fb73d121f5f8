#include "symvmf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <thread>

#include "symvmf/errors.hpp"
#include "symvmf/ginv.hpp"

namespace symvmf {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  a += 0x9e3779b97f4a7c15ULL + b;
  a = (a ^ (a >> 30)) * 0xbf58476d1ce4e5b9ULL;
  a = (a ^ (a >> 27)) * 0x94d049bb133111ebULL;
  return a ^ (a >> 31);
}

struct TrialMetrics {
  bool ok = false;
  double inner_raw = 0.0;
  double inner_sym = 0.0;
  double kappa_hat = 0.0;
};

// Normalized rotation-matrix inner product tr(R(g mu_hat)^T R(mu_o)) / 3,
// maximized over the symmetry orbit. For unit quaternions a, b the trace is
// 4 <a,b>^2 - 1, so the measure is insensitive to the arbitrary sign of
// mu_hat (the mixture likelihood is even in mu) and continuous across
// fundamental-zone facets. It is 1 exactly when mu_hat lies on the orbit of
// mu_o and averages about 0.83 for an uninformative estimate.
double orbit_inner(const UnitQuaternion& mu_hat, const UnitQuaternion& mu_o,
                   const SymmetryGroup& grp) {
  double best = 0.0;
  for (const UnitQuaternion& g : grp.elements()) {
    best = std::max(best, std::abs(apply(g, mu_hat).dot(mu_o)));
  }
  return (4.0 * best * best - 1.0) / 3.0;
}

TrialMetrics evaluate(const VmfParams& fit, const UnitQuaternion& mu_o,
                      const SymmetryGroup& grp) {
  TrialMetrics m;
  m.ok = true;
  m.kappa_hat = fit.kappa;
  m.inner_sym = orbit_inner(fit.mu, mu_o, grp);
  try {
    m.inner_raw = map_to_fz(fit.mu, grp).q.dot(map_to_fz(mu_o, grp).q);
  } catch (const Error&) {
    m.inner_raw = fit.mu.dot(mu_o);
  }
  return m;
}

TrialMetrics run_trial(Estimator est, double kappa_o, std::uint64_t trial_seed,
                       const SweepConfig& cfg, const SymmetryGroup& grp) {
  std::mt19937_64 rng(trial_seed);
  const UnitQuaternion mu_o = uniform_quaternion(rng);
  const GInvariantVmf truth{grp, {mu_o, kappa_o, false}};
  const auto samples = sample_ginv(truth, cfg.n, rng());
  try {
    switch (est) {
      case Estimator::Naive:
        return evaluate(ml_estimate(samples), mu_o, grp);
      case Estimator::ModifiedMl:
        return evaluate(modified_ml_fit(samples, grp), mu_o, grp);
      case Estimator::Em: {
        EmConfig em_cfg;
        return evaluate(em_fit(samples, grp, em_cfg).params_raw, mu_o, grp);
      }
    }
  } catch (const Error&) {
    // a failed trial is recorded, not fatal
  }
  return {};
}

}  // namespace

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::Naive: return "naive";
    case Estimator::ModifiedMl: return "modified";
    case Estimator::Em: return "em";
  }
  return "?";
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  if (cfg.kappa_min > cfg.kappa_max || cfg.kappa_min <= 0.0 || cfg.steps < 1 ||
      cfg.n < 2 || cfg.trials < 1) {
    throw Error("run_sweep: invalid sweep configuration");
  }
  if (cfg.estimators.empty()) throw Error("run_sweep: empty estimator set");
  const SymmetryGroup grp = builtin_group(cfg.group);

  std::vector<double> grid(cfg.steps);
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    grid[i] = cfg.steps == 1
                  ? cfg.kappa_min
                  : std::exp(std::log(cfg.kappa_min) +
                             static_cast<double>(i) / (cfg.steps - 1) *
                                 (std::log(cfg.kappa_max) - std::log(cfg.kappa_min)));
  }

  struct Job {
    std::size_t k_idx, trial;
    Estimator est;
  };
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < cfg.steps; ++k) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      for (Estimator e : cfg.estimators) jobs.push_back({k, t, e});
    }
  }
  std::vector<TrialMetrics> results(jobs.size());

  const unsigned threads =
      cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      // one seed per (grid point, trial); estimators see identical data
      const std::uint64_t seed = mix(mix(cfg.seed, job.k_idx), job.trial);
      results[j] = run_trial(job.est, grid[job.k_idx], seed, cfg, grp);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // deterministic fold in (grid point, estimator, trial) order
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < cfg.steps; ++k) {
    for (Estimator e : cfg.estimators) {
      SweepRow row;
      row.kappa_o = grid[k];
      row.estimator = e;
      std::vector<double> inners, kappas;
      double sum_raw = 0.0;
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].k_idx != k || jobs[j].est != e) continue;
        if (!results[j].ok) {
          ++row.failed_trials;
          continue;
        }
        inners.push_back(results[j].inner_sym);
        kappas.push_back(results[j].kappa_hat);
        sum_raw += results[j].inner_raw;
      }
      const double cnt = static_cast<double>(inners.size());
      if (cnt > 0) {
        row.inner_raw = sum_raw / cnt;
        double mi = 0, mk = 0;
        for (double v : inners) mi += v;
        for (double v : kappas) mk += v;
        mi /= cnt;
        mk /= cnt;
        row.inner_sym = mi;
        row.kappa_hat_mean = mk;
        row.kappa_bias = mk - grid[k];
        if (cnt > 1) {
          double vi = 0, vk = 0;
          for (double v : inners) vi += (v - mi) * (v - mi);
          for (double v : kappas) vk += (v - mk) * (v - mk);
          row.se_inner = std::sqrt(vi / (cnt - 1) / cnt);
          row.se_kappa = std::sqrt(vk / (cnt - 1) / cnt);
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

std::string format_num(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

// Minimal standalone SVG line chart.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& ylabel,
                     const std::map<std::string, std::vector<std::pair<double, double>>>& series) {
  const double w = 720, h = 480, ml = 70, mr = 160, mt = 50, mb = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [name, pts] : series) {
    for (const auto& [x, y] : pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (ymax == ymin) { ymax += 1; ymin -= 1; }
  if (xmax == xmin) { xmax += 1; xmin -= 1; }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"25\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + i * (xmax - xmin) / 5;
    const double yv = ymin + i * (ymax - ymin) / 5;
    out << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << std::round(xv * 100) / 100 << "</text>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << std::round(yv * 1000) / 1000 << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << py(yv) << "\" x2=\"" << w - mr
        << "\" y2=\"" << py(yv) << "\" stroke=\"#dddddd\"/>\n";
  }
  out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
         "kappa_o</text>\n";
  out << "<text x=\"18\" y=\"" << (mt + h - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " << (mt + h - mb) / 2 << ")\">" << ylabel
      << "</text>\n";

  const char* colors[] = {"#1f77b4", "#2ca02c", "#000000", "#d62728", "#9467bd"};
  int idx = 0;
  for (const auto& [name, pts] : series) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[idx % 5]
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
    const double ly = mt + 20 + 22 * idx;
    out << "<line x1=\"" << w - mr + 12 << "\" y1=\"" << ly << "\" x2=\""
        << w - mr + 40 << "\" y2=\"" << ly << "\" stroke=\"" << colors[idx % 5]
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << w - mr + 46 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << name << "</text>\n";
    ++idx;
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void emit_report(const std::vector<SweepRow>& rows, const std::string& out_dir) {
  if (rows.empty()) throw Error("emit_report: no rows");
  std::filesystem::create_directories(out_dir);
  const std::string csv_path = out_dir + "/sweep.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot open file for writing: " + csv_path);
  csv << "kappa_o,estimator,inner_raw,inner_sym,kappa_hat_mean,kappa_bias,"
         "se_inner,se_kappa\n";
  for (const SweepRow& r : rows) {
    csv << format_num(r.kappa_o) << ',' << estimator_name(r.estimator) << ','
        << format_num(r.inner_raw) << ',' << format_num(r.inner_sym) << ','
        << format_num(r.kappa_hat_mean) << ',' << format_num(r.kappa_bias) << ','
        << format_num(r.se_inner) << ',' << format_num(r.se_kappa) << '\n';
  }
  if (!csv) throw IoError("write failed: " + csv_path);

  std::map<std::string, std::vector<std::pair<double, double>>> inner, bias;
  for (const SweepRow& r : rows) {
    inner[estimator_name(r.estimator)].emplace_back(r.kappa_o, r.inner_sym);
    bias[estimator_name(r.estimator)].emplace_back(r.kappa_o, r.kappa_bias);
  }
  write_svg_chart(out_dir + "/inner_product.svg",
                  "Mean orientation recovery vs concentration",
                  "symmetry-aware inner product", inner);
  write_svg_chart(out_dir + "/kappa_bias.svg",
                  "Concentration estimator bias vs concentration", "kappa bias",
                  bias);
}

}  // namespace symvmf

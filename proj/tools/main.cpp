#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symvmf/bench.hpp"
#include "symvmf/ebsdmap.hpp"
#include "symvmf/errors.hpp"
#include "symvmf/ginv.hpp"
#include "symvmf/io.hpp"

namespace {

using namespace symvmf;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

SymmetryGroup resolve_group(const std::string& spec, bool antipodal) {
  if (std::filesystem::exists(spec)) return load_group(spec);
  return builtin_group(spec, antipodal);
}

void print_fit_report(std::ostream& os, const std::string& method,
                      const SymmetryGroup& grp, std::size_t n,
                      const VmfParams& fit, const EmResult* em) {
  const UnitQuaternion mu_fz = map_to_fz(fit.mu, grp).q;
  os.precision(15);
  os << "method: " << method << "\n"
     << "group: " << grp.name() << "\n"
     << "group_order: " << grp.order() << "\n"
     << "n: " << n << "\n"
     << "mu_fz_q1: " << mu_fz.q1 << "\n"
     << "mu_fz_q2: " << mu_fz.q2 << "\n"
     << "mu_fz_q3: " << mu_fz.q3 << "\n"
     << "mu_fz_q4: " << mu_fz.q4 << "\n"
     << "mu_raw_q1: " << fit.mu.q1 << "\n"
     << "mu_raw_q2: " << fit.mu.q2 << "\n"
     << "mu_raw_q3: " << fit.mu.q3 << "\n"
     << "mu_raw_q4: " << fit.mu.q4 << "\n"
     << "kappa: " << fit.kappa << "\n"
     << "kappa_saturated: " << (fit.kappa_saturated ? 1 : 0) << "\n";
  if (em) {
    os << "iterations: " << em->iterations << "\n"
       << "converged: " << (em->converged ? 1 : 0) << "\n"
       << "log_likelihood: " << em->log_likelihood_trace.back() << "\n";
  }
}

struct SimulateArgs {
  SweepConfig cfg;
  std::string out;
  std::string estimators = "naive,modified,em";
};

struct EstimateArgs {
  std::string input;
  std::string method = "em";
  std::string group = "cubic_m3m";
  std::string out;
  int restarts = 0;  // 0 = deterministic fz_ml init
  std::uint64_t seed = 0;
};

struct FzMapArgs {
  std::string input;
  std::string output;
  std::string group = "cubic_m3m";
};

struct IndexArgs {
  std::string input;
  std::string group = "cubic_m3m";
  double threshold_deg = 5.0;
  std::size_t min_size = 5;
  std::string out;
  unsigned threads = 0;
};

struct SynthArgs {
  std::size_t grains = 10;
  std::string size = "64x64";
  double kappa = 200.0;
  std::uint64_t seed = 0;
  std::string group = "cubic_m3m";
  std::string out;
};

std::vector<Estimator> parse_estimators(const std::string& s) {
  std::vector<Estimator> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string tok = s.substr(pos, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - pos);
    if (tok == "naive") out.push_back(Estimator::Naive);
    else if (tok == "modified" || tok == "fz") out.push_back(Estimator::ModifiedMl);
    else if (tok == "em") out.push_back(Estimator::Em);
    else if (!tok.empty()) throw Error("unknown estimator: " + tok);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw Error("empty estimator set");
  return out;
}

int run_simulate(const SimulateArgs& a) {
  SweepConfig cfg = a.cfg;
  cfg.estimators = parse_estimators(a.estimators);
  const auto rows = run_sweep(cfg);
  emit_report(rows, a.out);
  std::cout << "wrote " << a.out << "/sweep.csv and charts ("
            << rows.size() << " rows)\n";
  return kExitOk;
}

int run_estimate(const EstimateArgs& a) {
  const SymmetryGroup grp = resolve_group(a.group, false);
  const auto samples = load_quaternion_csv(a.input);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw IoError("cannot open file for writing: " + a.out);
    os = &file;
  }
  if (a.method == "naive") {
    print_fit_report(*os, a.method, grp, samples.size(), ml_estimate(samples),
                     nullptr);
  } else if (a.method == "fz") {
    print_fit_report(*os, a.method, grp, samples.size(),
                     modified_ml_fit(samples, grp), nullptr);
  } else if (a.method == "em") {
    EmConfig cfg;
    if (a.restarts > 0) {
      cfg.init = EmInit::RandomRestarts;
      cfg.restarts = a.restarts;
      cfg.seed = a.seed;
    }
    const EmResult res = em_fit(samples, grp, cfg);
    print_fit_report(*os, a.method, grp, samples.size(), res.params, &res);
  } else {
    throw Error("unknown method: " + a.method);
  }
  return kExitOk;
}

int run_fz_map(const FzMapArgs& a) {
  const SymmetryGroup grp = resolve_group(a.group, false);
  const auto quats = load_quaternion_csv(a.input);
  std::vector<UnitQuaternion> mapped;
  mapped.reserve(quats.size());
  for (const auto& q : quats) mapped.push_back(map_to_fz(q, grp).q);
  save_quaternion_csv(a.output, mapped);
  std::cout << "wrote " << a.output << " (" << mapped.size() << " rows)\n";
  return kExitOk;
}

int run_group_check(const std::string& spec) {
  // construction performs the exhaustive axiom verification
  const SymmetryGroup grp = resolve_group(spec, false);
  std::cout << "group: " << grp.name() << "\n"
            << "M=" << grp.order() << "\n"
            << "axioms: ok (closure, identity, inverses)\n";
  return kExitOk;
}

int run_ebsd_index(const IndexArgs& a) {
  const SymmetryGroup grp = resolve_group(a.group, false);
  OrientationMap map = load_map(a.input);
  segment_grains(map, grp, a.threshold_deg * M_PI / 180.0, a.min_size);
  const auto records = index_grains(map, grp, {}, a.threads);
  emit_outputs(records, map, a.out);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.fit_failed ? 1 : 0;
  std::cout << "indexed " << records.size() - failed << " grains";
  if (failed) std::cout << " (" << failed << " failed fits)";
  std::cout << "; wrote " << a.out << "/grains.csv and pixels.csv\n";
  return kExitOk;
}

int run_ebsd_synth(const SynthArgs& a) {
  const std::size_t x_pos = a.size.find('x');
  if (x_pos == std::string::npos) throw Error("--size must look like 128x128");
  const std::size_t w = std::stoul(a.size.substr(0, x_pos));
  const std::size_t h = std::stoul(a.size.substr(x_pos + 1));
  const SymmetryGroup grp = resolve_group(a.group, false);
  const SynthMap synth = synth_map(a.grains, w, h, a.kappa, grp, a.seed);
  save_map(synth.map, a.out);

  // ground truth alongside, for checking recovered means
  const std::string truth_path = a.out + ".truth.csv";
  std::ofstream truth(truth_path);
  if (!truth) throw IoError("cannot open file for writing: " + truth_path);
  truth << "grain_id,q1,q2,q3,q4\n";
  truth.precision(17);
  for (std::size_t k = 0; k < synth.true_means.size(); ++k) {
    const auto& q = synth.true_means[k];
    truth << k + 1 << ',' << q.q1 << ',' << q.q2 << ',' << q.q3 << ',' << q.q4
          << '\n';
  }
  std::cout << "wrote " << a.out << " and " << truth_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"G-invariant von Mises-Fisher orientation estimation on S3"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Estimator comparison sweep over the true concentration");
  simulate->add_option("--group", sim.cfg.group, "Symmetry group name or CSV path")
      ->capture_default_str();
  simulate->add_option("--n", sim.cfg.n, "Samples per trial")->capture_default_str();
  simulate->add_option("--kappa-min", sim.cfg.kappa_min, "Lowest concentration")
      ->capture_default_str();
  simulate->add_option("--kappa-max", sim.cfg.kappa_max, "Highest concentration")
      ->capture_default_str();
  simulate->add_option("--steps", sim.cfg.steps, "Grid points (log-spaced)")
      ->capture_default_str();
  simulate->add_option("--trials", sim.cfg.trials, "Trials per grid point")
      ->capture_default_str();
  simulate->add_option("--seed", sim.cfg.seed, "Master seed")->capture_default_str();
  simulate
      ->add_option("--estimators", sim.estimators,
                   "Comma list from {naive,modified,em}")
      ->capture_default_str();
  simulate->add_option("--threads", sim.cfg.threads,
                       "Worker threads (0 = all cores)")
      ->capture_default_str();
  simulate->add_option("--out", sim.out, "Output directory for sweep.csv and charts")
      ->required();

  EstimateArgs est;
  auto* estimate =
      app.add_subcommand("estimate", "Fit (mu, kappa) to a quaternion sample CSV");
  estimate->add_option("--input", est.input, "CSV of rows q1,q2,q3,q4")->required();
  estimate->add_option("--method", est.method, "Estimator: em, naive or fz")
      ->capture_default_str();
  estimate->add_option("--group", est.group, "Symmetry group name or CSV path")
      ->capture_default_str();
  estimate->add_option("--restarts", est.restarts,
                       "Random EM restarts (0 = deterministic FZ-ML init)")
      ->capture_default_str();
  estimate->add_option("--seed", est.seed, "Seed for random restarts")
      ->capture_default_str();
  estimate->add_option("--out", est.out,
                       "Write the fit report here instead of stdout");

  auto* fz = app.add_subcommand("fz", "Fundamental-zone utilities");
  fz->require_subcommand(1);
  FzMapArgs fzm;
  auto* fz_map_cmd =
      fz->add_subcommand("map", "Canonicalize a quaternion CSV into the FZ");
  fz_map_cmd->add_option("--input", fzm.input, "CSV of rows q1,q2,q3,q4")->required();
  fz_map_cmd->add_option("--output", fzm.output, "Output CSV path")->required();
  fz_map_cmd->add_option("--group", fzm.group, "Symmetry group name or CSV path")
      ->capture_default_str();

  auto* group = app.add_subcommand("group", "Symmetry group utilities");
  group->require_subcommand(1);
  std::string group_spec;
  auto* group_check = group->add_subcommand(
      "check", "Verify group axioms (closure, identity, inverses)");
  group_check->add_option("name", group_spec, "Builtin name or CSV path")->required();

  auto* ebsd = app.add_subcommand("ebsd", "Orientation-map pipeline");
  ebsd->require_subcommand(1);
  IndexArgs idx;
  auto* ebsd_index =
      ebsd->add_subcommand("index", "Segment grains and fit (mu, kappa) per grain");
  ebsd_index->add_option("--input", idx.input, "Map CSV (x,y,phi1,Phi,phi2 radians)")
      ->required();
  ebsd_index->add_option("--group", idx.group, "Symmetry group name or CSV path")
      ->capture_default_str();
  ebsd_index
      ->add_option("--threshold-deg", idx.threshold_deg,
                   "Grain boundary disorientation threshold, degrees")
      ->capture_default_str();
  ebsd_index->add_option("--min-size", idx.min_size, "Minimum grain size, pixels")
      ->capture_default_str();
  ebsd_index->add_option("--threads", idx.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  ebsd_index->add_option("--out", idx.out, "Output directory")->required();

  SynthArgs syn;
  auto* ebsd_synth =
      ebsd->add_subcommand("synth", "Generate a synthetic ground-truth map");
  ebsd_synth->add_option("--grains", syn.grains, "Number of grains")
      ->capture_default_str();
  ebsd_synth->add_option("--size", syn.size, "Grid size WxH")->capture_default_str();
  ebsd_synth->add_option("--kappa", syn.kappa, "Per-grain concentration")
      ->capture_default_str();
  ebsd_synth->add_option("--seed", syn.seed, "Seed")->capture_default_str();
  ebsd_synth->add_option("--group", syn.group, "Symmetry group name or CSV path")
      ->capture_default_str();
  ebsd_synth->add_option("--out", syn.out, "Output map CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*estimate) return run_estimate(est);
    if (*fz_map_cmd) return run_fz_map(fzm);
    if (*group_check) return run_group_check(group_spec);
    if (*ebsd_index) return run_ebsd_index(idx);
    if (*ebsd_synth) return run_ebsd_synth(syn);
  } catch (const NearPiRotation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DegenerateResultant& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const ResultantOutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const NonFiniteLikelihood& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const NoZoneFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

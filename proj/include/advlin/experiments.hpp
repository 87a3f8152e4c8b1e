#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "advlin/dynamics.hpp"
#include "advlin/losses.hpp"

namespace advlin {

/// Options shared by every experiment runner / CLI subcommand.
struct CommonOptions {
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool manifest = false;
};

struct ExperimentResult {
  bool ok = true;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> notes;
};

struct BayesOptions {
  double mu = 1.0;
  double sigma = 1.0;
  int d_max = 100;
};

/// bayes.csv: d,bayes_accuracy for d = 1..d_max, plus the 1-d error value
/// as a note.
ExperimentResult run_bayes(const BayesOptions& opt, const CommonOptions& common);

struct DynamicsOptions {
  Rational eta = Rational(1, 2);
  Rational mu = Rational(1);
  Rational epsilon = Rational(3, 2);
  Rational theta0 = Rational(1, 1000000);
  std::int64_t horizon = 100000;
  bool grid = false;  // run the verdict grid instead of a single trajectory
};

/// Single mode: trajectory.csv + dynamics_report.json (cycle + verdicts).
/// Grid mode: dynamics_grid.csv with one verdict row per parameter set; the
/// result is ok only if every applicable verdict passes.
ExperimentResult run_dynamics(const DynamicsOptions& opt,
                              const CommonOptions& common);

struct SignCountOptions {
  LossKind loss = LossKind::linear();
  double eps_start = 0.0;
  double eps_stop = 20.0;
  double eps_step = 0.5;
  std::int64_t iterations = 100000;
  double eta = 1e-3;
  double mu = 1.0;
  double sigma = 1.0;
  std::int64_t n_test = 100000;
};

/// sign_counts.csv: epsilon,pos_count,neg_count,final_test_accuracy, one
/// streaming 1-d run per epsilon; plus sign_counts_<loss>.svg.
ExperimentResult run_sign_counts(const SignCountOptions& opt,
                                 const CommonOptions& common);

struct Train100dOptions {
  std::vector<LossKind> losses;    // default: linear, xent, hinge1
  std::vector<double> epsilons;    // default: 1.5, 2, 4, 10
  std::size_t d = 100;
  double mu = 1.0;
  double sigma = 1.0;
  double eta = 1e-3;
  std::int64_t n_train = 100000;
  std::int64_t n_test = 100000;
  std::int64_t epochs = 200;
};

/// Per (loss, epsilon): train100d_<loss>_eps_<eps>.csv. Per loss: two SVGs
/// (coordinate-mean theta vs epoch, test accuracy vs epoch).
ExperimentResult run_train_100d(const Train100dOptions& opt,
                                const CommonOptions& common);

struct InterceptOptions {
  double mu1 = 2.0;
  double mu2 = 1.0;
  double sigma = 0.25;
  double eta = 0.01;
  std::int64_t steps = 10000;
  std::int64_t n_train = 2000;
  std::int64_t n_test = 2000;
};

/// Runs linear and hinge0 on identical data; intercept_<loss>.csv per run
/// plus intercept_summary.json with the accuracy comparison.
ExperimentResult run_intercept(const InterceptOptions& opt,
                               const CommonOptions& common);

/// Run body(0..count-1) on up to `jobs` worker threads. Tasks must only touch
/// their own slot of pre-sized output storage; iteration order is unspecified
/// but slot-addressed results make the aggregate deterministic.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body);

std::string sha256_hex(const std::string& bytes);

/// manifest.json: resolved parameters plus a content hash per emitted file.
void write_manifest(const CommonOptions& common, const std::string& subcommand,
                    const std::vector<std::pair<std::string, std::string>>& params,
                    const std::vector<std::filesystem::path>& files);

}  // namespace advlin

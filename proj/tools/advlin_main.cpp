// advlin: experiment runner for adversarially trained linear classifiers on
// the symmetric Gaussian data model. Subcommands write seeded, byte-stable
// CSV/SVG artifacts; see README.md for the formats.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "advlin/experiments.hpp"

namespace {

using advlin::CommonOptions;
using advlin::ExperimentResult;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ADVLIN_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

void add_common_options(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--out", common.out_dir, "output directory")
      ->capture_default_str();
  cmd->add_option("--seed", common.seed,
                  "base seed (falls back to ADVLIN_SEED, then 0)");
  cmd->add_option("--jobs", common.jobs, "max concurrent sweep points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--manifest", common.manifest,
                "write manifest.json with content hashes of all outputs");
}

int report(const ExperimentResult& result) {
  for (const auto& note : result.notes) std::cout << note << "\n";
  for (const auto& file : result.files) {
    std::cout << "wrote " << file.string() << "\n";
  }
  return result.ok ? 0 : 1;
}

// CLI11 stores into strings for rational-valued flags; parse at run time so
// exact values like 1/1000000 survive.
struct RationalOption {
  std::string text;
  advlin::Rational parse() const { return advlin::parse_rational(text); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversarially trained linear classifiers on Gaussian data"};
  app.require_subcommand(1);

  CommonOptions common;
  common.seed = default_seed();

  // bayes
  advlin::BayesOptions bayes_opt;
  CLI::App* bayes = app.add_subcommand(
      "bayes", "Bayes accuracy vs dimension for the symmetric model");
  bayes->add_option("--mu", bayes_opt.mu, "mean component")
      ->capture_default_str();
  bayes->add_option("--sigma", bayes_opt.sigma, "noise level")
      ->capture_default_str();
  bayes->add_option("--d-max", bayes_opt.d_max, "emit rows for d = 1..d-max")
      ->capture_default_str();

  // dynamics
  RationalOption dyn_eta{"1/2"}, dyn_mu{"1"}, dyn_eps{"3/2"},
      dyn_theta0{"1/1000000"};
  advlin::DynamicsOptions dyn_opt;
  CLI::App* dynamics = app.add_subcommand(
      "dynamics", "exact expected-update recurrence: trajectory, cycle, "
                  "proposition verdicts");
  dynamics->add_option("--eta", dyn_eta.text, "learning rate (rational)")
      ->capture_default_str();
  dynamics->add_option("--mu", dyn_mu.text, "mean (rational)")
      ->capture_default_str();
  dynamics->add_option("--epsilon", dyn_eps.text, "attack budget (rational)")
      ->capture_default_str();
  dynamics->add_option("--theta0", dyn_theta0.text, "initial value (rational)")
      ->capture_default_str();
  dynamics->add_option("--horizon", dyn_opt.horizon, "steps to simulate")
      ->capture_default_str();
  dynamics->add_flag("--grid", dyn_opt.grid,
                     "run the verdict grid instead of a single trajectory");

  // sign-counts
  advlin::SignCountOptions sc_opt;
  std::string sc_loss = "linear";
  std::string sc_grid;
  CLI::App* sign_counts = app.add_subcommand(
      "sign-counts", "1-d streaming runs: sign tallies across an eps grid");
  sign_counts->add_option("--loss", sc_loss, "linear or xent")
      ->capture_default_str();
  sign_counts->add_option("--eps-grid", sc_grid,
                          "a:b:step grid within [0, 20] (default 0:20:0.5)");
  double sc_single_eps = -1.0;
  sign_counts->add_option("--epsilon", sc_single_eps,
                          "run a single epsilon instead of a grid");
  sign_counts->add_option("--iters", sc_opt.iterations, "streaming updates")
      ->capture_default_str();
  sign_counts->add_option("--eta", sc_opt.eta, "learning rate")
      ->capture_default_str();
  sign_counts->add_option("--mu", sc_opt.mu, "mean")->capture_default_str();
  sign_counts->add_option("--sigma", sc_opt.sigma, "noise level")
      ->capture_default_str();
  sign_counts->add_option("--n-test", sc_opt.n_test, "fresh test samples")
      ->capture_default_str();

  // train-100d
  advlin::Train100dOptions t100_opt;
  std::vector<std::string> t100_losses;
  CLI::App* train100d = app.add_subcommand(
      "train-100d", "epoch training sweeps on the d-dimensional model");
  train100d
      ->add_option("--loss", t100_losses,
                   "losses to run (linear, xent, hinge1; repeatable)")
      ->expected(-1);
  train100d
      ->add_option("--epsilon", t100_opt.epsilons,
                   "attack budgets to run (repeatable)")
      ->expected(-1);
  train100d->add_option("--d", t100_opt.d, "dimension")->capture_default_str();
  train100d->add_option("--mu", t100_opt.mu, "mean component")
      ->capture_default_str();
  train100d->add_option("--sigma", t100_opt.sigma, "noise level")
      ->capture_default_str();
  train100d->add_option("--eta", t100_opt.eta, "learning rate")
      ->capture_default_str();
  train100d->add_option("--n-train", t100_opt.n_train, "training samples")
      ->capture_default_str();
  train100d->add_option("--n-test", t100_opt.n_test, "test samples")
      ->capture_default_str();
  train100d->add_option("--epochs", t100_opt.epochs, "epochs")
      ->capture_default_str();

  // intercept
  advlin::InterceptOptions int_opt;
  CLI::App* intercept = app.add_subcommand(
      "intercept",
      "shifted-mean experiment: linear vs hinge0 bias learning on shared data");
  intercept->add_option("--mu1", int_opt.mu1, "positive-class mean")
      ->capture_default_str();
  intercept->add_option("--mu2", int_opt.mu2, "negative-class mean")
      ->capture_default_str();
  intercept->add_option("--sigma", int_opt.sigma, "noise level")
      ->capture_default_str();
  intercept->add_option("--eta", int_opt.eta, "learning rate")
      ->capture_default_str();
  intercept->add_option("--iters", int_opt.steps, "full-batch steps")
      ->capture_default_str();
  intercept->add_option("--n-train", int_opt.n_train, "training samples (even)")
      ->capture_default_str();
  intercept->add_option("--n-test", int_opt.n_test, "test samples (even)")
      ->capture_default_str();

  for (CLI::App* cmd : {bayes, dynamics, sign_counts, train100d, intercept}) {
    add_common_options(cmd, common);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bayes) {
      return report(advlin::run_bayes(bayes_opt, common));
    }
    if (*dynamics) {
      dyn_opt.eta = dyn_eta.parse();
      dyn_opt.mu = dyn_mu.parse();
      dyn_opt.epsilon = dyn_eps.parse();
      dyn_opt.theta0 = dyn_theta0.parse();
      return report(advlin::run_dynamics(dyn_opt, common));
    }
    if (*sign_counts) {
      sc_opt.loss = advlin::parse_loss(sc_loss);
      if (sc_single_eps >= 0.0) {
        sc_opt.eps_start = sc_opt.eps_stop = sc_single_eps;
        sc_opt.eps_step = 1.0;
      } else if (!sc_grid.empty()) {
        double a = 0, b = 0, step = 0;
        if (std::sscanf(sc_grid.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3) {
          throw std::invalid_argument("--eps-grid expects a:b:step");
        }
        sc_opt.eps_start = a;
        sc_opt.eps_stop = b;
        sc_opt.eps_step = step;
      }
      return report(advlin::run_sign_counts(sc_opt, common));
    }
    if (*train100d) {
      for (const std::string& name : t100_losses) {
        t100_opt.losses.push_back(advlin::parse_loss(name));
      }
      return report(advlin::run_train_100d(t100_opt, common));
    }
    if (*intercept) {
      return report(advlin::run_intercept(int_opt, common));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

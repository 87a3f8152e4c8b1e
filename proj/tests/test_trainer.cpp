#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "advlin/csv.hpp"
#include "advlin/trainer.hpp"
#include "test_util.hpp"

using namespace advlin;

namespace {

TrainConfig streaming_config(double eta, double eps, std::int64_t iterations,
                             std::uint64_t seed) {
  TrainConfig cfg;
  cfg.eta = eta;
  cfg.epsilon = eps;
  cfg.mode = TrainMode::kStreaming;
  cfg.iterations = iterations;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("init_hypothesis is deterministic and respects learn_bias") {
  TrainConfig cfg;
  cfg.seed = 9;
  const LinearHypothesis a = init_hypothesis(5, cfg);
  const LinearHypothesis b = init_hypothesis(5, cfg);
  CHECK(a.theta == b.theta);
  CHECK(a.bias == 0.0);

  cfg.learn_bias = true;
  const LinearHypothesis c = init_hypothesis(5, cfg);
  CHECK(c.theta == a.theta);  // bias draw comes after the theta draws
  CHECK(c.bias != 0.0);

  TrainConfig wide;
  wide.seed = 4;
  const LinearHypothesis big = init_hypothesis(100000, wide);
  double mean = 0.0;
  for (double t : big.theta) mean += t;
  mean /= big.theta.size();
  CHECK(std::abs(mean) < 0.02);
}

TEST_CASE("streaming runs are bit-reproducible") {
  const GaussianModel model(1, 1.0, 1.0);
  const TrainConfig cfg = streaming_config(1e-3, 1.5, 2000, 123);
  const RunStats a = train_streaming(model, cfg);
  const RunStats b = train_streaming(model, cfg);
  CHECK(a.theta_history == b.theta_history);
  CHECK(a.final_theta == b.final_theta);
  CHECK(a.sign_counts[0].positive == b.sign_counts[0].positive);
  CHECK(a.sign_counts[0].negative == b.sign_counts[0].negative);

  // Census covers the initial hypothesis plus one entry per update.
  CHECK(a.sign_counts[0].total() == cfg.iterations + 1);
  CHECK(static_cast<std::int64_t>(a.theta_history.size()) ==
        cfg.iterations + 1);
}

TEST_CASE("clean streaming training drifts up at rate eta*mu") {
  const GaussianModel model(1, 1.0, 1.0);
  const RunStats stats =
      train_streaming(model, streaming_config(1e-3, 0.0, 100000, 21));
  CHECK(stats.final_theta[0] > 0.0);
  CHECK(stats.sign_counts[0].positive >=
        static_cast<std::int64_t>(0.99 * (100000 + 1)));

  const double increment =
      (stats.theta_history.back() - stats.theta_history.front()) / 100000.0;
  CHECK(increment > 0.0009);
  CHECK(increment < 0.0011);
}

TEST_CASE("strong adversary still leaves a positive sign majority") {
  const GaussianModel model(1, 1.0, 1.0);
  const RunStats stats =
      train_streaming(model, streaming_config(1e-3, 5.0, 100000, 21));
  CHECK(stats.sign_counts[0].positive > stats.sign_counts[0].negative);
}

TEST_CASE("the linear update identity holds bit-exactly") {
  const GaussianModel model(3, 1.0, 1.0);
  TrainConfig cfg = streaming_config(1e-3, 2.0, 5000, 77);
  cfg.check_linear_update = true;  // throws on the first violation
  CHECK_NOTHROW(train_streaming(model, cfg));

  TrainConfig epoch_cfg;
  epoch_cfg.mode = TrainMode::kEpochs;
  epoch_cfg.eta = 1e-3;
  epoch_cfg.epsilon = 1.5;
  epoch_cfg.n_train = 500;
  epoch_cfg.n_test = 100;
  epoch_cfg.epochs = 3;
  epoch_cfg.seed = 5;
  epoch_cfg.check_linear_update = true;
  CHECK_NOTHROW(train_epochs(model, epoch_cfg));
}

TEST_CASE("streaming mean over many runs tracks the exact recurrence") {
  const GaussianModel model(1, 1.0, 1.0);
  const int n_runs = 200;
  const int horizon = 200;
  const std::vector<std::pair<double, Rational>> budgets = {
      {0.0, Rational(0)}, {0.5, Rational(1, 2)}, {1.5, Rational(3, 2)}};

  for (const auto& [eps, eps_exact] : budgets) {
    const RecurrenceParams params(Rational(1, 1000), Rational(1), eps_exact);
    // diff[k][i] = stochastic theta^k of run i minus the exact trajectory
    // started from that run's own initial value. The expected update equals
    // the recurrence only while sign(theta) is deterministic, so keep runs
    // whose start is well clear of the flip region: worst-case drift over the
    // horizon is eta*(mu+eps)*k <= 0.05 and step noise is eta*sqrt(k) ~ 0.014.
    std::vector<std::vector<double>> diff(
        horizon + 1, std::vector<double>(n_runs));
    int kept = 0;
    for (std::uint64_t seed = 5000; kept < n_runs; ++seed) {
      const RunStats stats = train_streaming(
          model, streaming_config(1e-3, eps, horizon, seed));
      if (std::abs(stats.theta_history[0]) < 0.5) continue;
      const int i = kept++;
      const Trajectory exact = simulate(
          rational_from_double(stats.theta_history[0]), params, horizon);
      for (int k = 0; k <= horizon; ++k) {
        diff[k][i] =
            stats.theta_history[k] - rational_to_double(exact.values[k]);
      }
    }
    for (int k = 0; k <= horizon; ++k) {
      double mean = 0.0;
      for (double d : diff[k]) mean += d;
      mean /= n_runs;
      double var = 0.0;
      for (double d : diff[k]) var += (d - mean) * (d - mean);
      var /= (n_runs - 1);
      const double se = std::sqrt(var / n_runs);
      CHECK(std::abs(mean) <= 3.0 * se + 1e-12);
    }
  }
}

TEST_CASE("epoch training fills exactly one record per epoch") {
  const GaussianModel model(100, 1.0, 1.0);
  TrainConfig cfg;
  cfg.mode = TrainMode::kEpochs;
  cfg.eta = 1e-3;
  cfg.epsilon = 0.0;
  cfg.n_train = 2000;
  cfg.n_test = 2000;
  cfg.epochs = 5;
  cfg.seed = 13;
  const RunStats stats = train_epochs(model, cfg);
  CHECK(stats.mean_theta.size() == 5);
  CHECK(stats.test_accuracy.size() == 5);
  for (double acc : stats.test_accuracy) {
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
  }
  // Standard training reaches the easy regime quickly and the mean grows.
  CHECK(stats.test_accuracy.back() == 1.0);
  CHECK(stats.mean_theta.back() > stats.mean_theta.front());

  const RunStats again = train_epochs(model, cfg);
  CHECK(again.mean_theta == stats.mean_theta);
  CHECK(again.test_accuracy == stats.test_accuracy);
  CHECK(again.final_theta == stats.final_theta);
}

TEST_CASE("evaluate_accuracy sign conventions") {
  const GaussianModel model(100, 1.0, 1.0);
  const Dataset test = sample(model, 31, 100000);

  LinearHypothesis aligned{std::vector<double>(100, 1.0), 0.0};
  CHECK(evaluate_accuracy(aligned, test).value() >= 0.999);

  LinearHypothesis reversed{std::vector<double>(100, -1.0), 0.0};
  CHECK(evaluate_accuracy(reversed, test).value() <= 0.001);

  LinearHypothesis zero{std::vector<double>(100, 0.0), 0.0};
  std::size_t pos = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (test[i].y == 1) ++pos;
  }
  CHECK(evaluate_accuracy(zero, test).value() ==
        static_cast<double>(pos) / test.size());

  const Dataset empty_err(/*d=*/100, /*seed=*/0);
  CHECK_THROWS_AS(evaluate_accuracy(aligned, empty_err), std::domain_error);

  // Robust accuracy can only be lower.
  CHECK(evaluate_robust_accuracy(aligned, test, AttackBudget(0.5)).value() <=
        evaluate_accuracy(aligned, test).value());
}

TEST_CASE("balanced shifted sampling alternates labels exactly") {
  const ShiftedModel model(2.0, 1.0, 0.25);
  const Dataset data = balanced_shifted_sample(model, 17, 1000);
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(data[i].y == (i % 2 == 0 ? 1 : -1));
    sum += data[i].y;
  }
  CHECK(sum == 0);
  CHECK_THROWS_AS(balanced_shifted_sample(model, 17, 999), std::domain_error);
}

TEST_CASE("intercept training: linear bias frozen, hinge0 finds the midpoint") {
  const ShiftedModel model(2.0, 1.0, 0.25);
  TrainConfig cfg;
  cfg.eta = 0.01;
  cfg.iterations = 2000;
  cfg.n_train = 1000;
  cfg.n_test = 1000;
  cfg.seed = 2;
  cfg.learn_bias = true;

  cfg.loss = LossKind::linear();
  const RunStats linear = train_intercept(model, cfg);
  REQUIRE(linear.bias_history.size() == 2001);
  for (double b : linear.bias_history) {
    CHECK(std::abs(b - linear.bias_history.front()) <= 1e-12);
  }

  cfg.loss = LossKind::hinge(0.0);
  const RunStats hinge = train_intercept(model, cfg);
  const double boundary = -hinge.final_bias / hinge.final_theta[0];
  CHECK(hinge.test_accuracy.back() >= 0.95);
  CHECK(boundary > 1.3);
  CHECK(boundary < 1.7);
  CHECK(hinge.test_accuracy.back() - linear.test_accuracy.back() >= 0.05);

  // The hinge run should sit near the optimum of the shifted pair, whose
  // accuracy is Phi(separation / (2 sigma)) = Phi(2).
  CHECK(std::abs(hinge.test_accuracy.back() - phi(2.0).value()) < 0.03);
}

TEST_CASE("intercept training rejects unsupported configurations") {
  const ShiftedModel model(2.0, 1.0, 0.25);
  TrainConfig cfg;
  cfg.iterations = 10;
  cfg.n_train = 100;
  cfg.n_test = 100;
  cfg.learn_bias = false;
  cfg.loss = LossKind::linear();
  CHECK_THROWS_AS(train_intercept(model, cfg), std::invalid_argument);
  cfg.learn_bias = true;
  cfg.loss = LossKind::hinge(1.0);
  CHECK_THROWS_AS(train_intercept(model, cfg), std::invalid_argument);
  cfg.loss = LossKind::cross_entropy();
  CHECK_THROWS_AS(train_intercept(model, cfg), std::invalid_argument);
  cfg.loss = LossKind::linear();
  cfg.n_train = 101;
  CHECK_THROWS_AS(train_intercept(model, cfg), std::invalid_argument);
}

TEST_CASE("run stats CSV exports") {
  const GaussianModel model(1, 1.0, 1.0);
  const RunStats stats =
      train_streaming(model, streaming_config(1e-3, 1.0, 50, 8));
  testutil::TempDir dir("trainer_csv");

  const auto stream_path = dir.path() / "stream.csv";
  write_streaming_csv(stats, stream_path);
  const CsvTable stream = read_csv(stream_path);
  CHECK(stream.header == std::vector<std::string>{"step", "theta", "sign"});
  CHECK(stream.rows.size() == 51);
  CHECK(stream.comments.size() == 1);
  CHECK(std::stod(stream.rows[0][1]) == stats.theta_history[0]);

  TrainConfig cfg;
  cfg.mode = TrainMode::kEpochs;
  cfg.eta = 1e-3;
  cfg.n_train = 100;
  cfg.n_test = 100;
  cfg.epochs = 4;
  cfg.seed = 3;
  const RunStats epochs = train_epochs(GaussianModel(5, 1.0, 1.0), cfg);
  const auto epoch_path = dir.path() / "epochs.csv";
  write_epoch_csv(epochs, /*with_bias=*/false, epoch_path);
  const CsvTable table = read_csv(epoch_path);
  CHECK(table.header ==
        std::vector<std::string>{"epoch", "mean_theta", "test_accuracy"});
  CHECK(table.rows.size() == 4);
  CHECK(table.rows[0][0] == "1");

  cfg.learn_bias = true;
  const RunStats biased = train_epochs(GaussianModel(5, 1.0, 1.0), cfg);
  CHECK(biased.bias_history.size() == 4);
  const auto bias_path = dir.path() / "epochs_bias.csv";
  write_epoch_csv(biased, /*with_bias=*/true, bias_path);
  const CsvTable bias_table = read_csv(bias_path);
  CHECK(bias_table.header ==
        std::vector<std::string>{"epoch", "mean_theta", "test_accuracy",
                                 "bias"});
  CHECK(std::stod(bias_table.rows[3][3]) == biased.bias_history[3]);
}

TEST_CASE("trainer configuration validation") {
  const GaussianModel model(1, 1.0, 1.0);
  TrainConfig cfg;
  cfg.mode = TrainMode::kEpochs;
  CHECK_THROWS_AS(train_streaming(model, cfg), std::invalid_argument);
  cfg.mode = TrainMode::kStreaming;
  cfg.iterations = 0;
  CHECK_THROWS_AS(train_streaming(model, cfg), std::invalid_argument);
  cfg.iterations = 10;
  cfg.eta = 0.0;
  CHECK_THROWS_AS(train_streaming(model, cfg), std::invalid_argument);
  cfg.eta = 1e-3;
  cfg.epsilon = -1.0;
  CHECK_THROWS_AS(train_streaming(model, cfg), std::domain_error);
}

#include "advlin/trainer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "advlin/csv.hpp"
#include "advlin/rng.hpp"

namespace advlin {
namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double sign_of(double v) {
  if (v > 0.0) return 1.0;
  if (v < 0.0) return -1.0;
  return 0.0;
}

void tally_signs(std::vector<SignCensus>& census,
                 const std::vector<double>& theta) {
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (theta[j] > 0.0) {
      ++census[j].positive;
    } else if (theta[j] < 0.0) {
      ++census[j].negative;
    } else {
      ++census[j].zero;
    }
  }
}

double coordinate_mean(const std::vector<double>& theta) {
  double sum = 0.0;
  for (double v : theta) sum += v;
  return sum / static_cast<double>(theta.size());
}

void check_linear_update_identity(const LinearHypothesis& before,
                                  const LinearHypothesis& after,
                                  const LabeledSample& s, double eta,
                                  double eps) {
  for (std::size_t j = 0; j < before.theta.size(); ++j) {
    const double expected =
        before.theta[j] +
        eta * (s.y * s.x[j] - eps * sign_of(before.theta[j]));
    if (after.theta[j] != expected) {
      throw std::logic_error("linear update identity violated");
    }
  }
}

}  // namespace

LinearHypothesis init_hypothesis(std::size_t d, const TrainConfig& cfg) {
  require(d >= 1, "init_hypothesis: d must be >= 1");
  require(cfg.init_sigma > 0.0, "init_hypothesis: init_sigma must be > 0");
  Rng rng(derive_seed(cfg.seed, kInitSeedStream));
  LinearHypothesis h;
  h.theta.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    h.theta[j] = cfg.init_sigma * rng.gaussian();
  }
  h.bias = cfg.learn_bias ? rng.gaussian() : 0.0;
  return h;
}

RunStats train_streaming(const GaussianModel& model, const TrainConfig& cfg) {
  require(cfg.mode == TrainMode::kStreaming, "train_streaming: wrong mode");
  require(cfg.iterations >= 1, "train_streaming: iterations must be >= 1");
  require(cfg.eta > 0.0, "train_streaming: eta must be > 0");
  const AttackBudget eps(cfg.epsilon);

  LinearHypothesis h = init_hypothesis(model.d, cfg);
  Rng data_rng(derive_seed(cfg.seed, kTrainSeedStream));

  RunStats stats;
  stats.sign_counts.assign(model.d, SignCensus{});
  tally_signs(stats.sign_counts, h.theta);
  const bool track_history = model.d == 1;
  if (track_history) {
    stats.theta_history.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
    stats.theta_history.push_back(h.theta[0]);
  }

  std::vector<double> x(model.d);
  std::vector<double> grad(model.d);
  LinearHypothesis before;
  for (std::int64_t it = 0; it < cfg.iterations; ++it) {
    const int y = data_rng.sign_label();
    for (std::size_t j = 0; j < model.d; ++j) {
      x[j] = y * model.mu[j] + model.sigma * data_rng.gaussian();
    }
    const LabeledSample s{x, y};
    if (cfg.check_linear_update && cfg.loss.type() == LossType::kLinear) {
      before = h;
    }
    double grad_bias = 0.0;
    adversarial_gradient(cfg.loss, h, s, eps, grad, grad_bias);
    for (std::size_t j = 0; j < model.d; ++j) {
      h.theta[j] -= cfg.eta * grad[j];
    }
    if (cfg.learn_bias) h.bias -= cfg.eta * grad_bias;
    if (cfg.check_linear_update && cfg.loss.type() == LossType::kLinear) {
      check_linear_update_identity(before, h, s, cfg.eta, cfg.epsilon);
    }
    tally_signs(stats.sign_counts, h.theta);
    if (track_history) stats.theta_history.push_back(h.theta[0]);
  }

  stats.final_theta = h.theta;
  stats.final_bias = h.bias;
  return stats;
}

RunStats train_epochs(const GaussianModel& model, const TrainConfig& cfg) {
  require(cfg.mode == TrainMode::kEpochs, "train_epochs: wrong mode");
  require(cfg.epochs >= 1, "train_epochs: epochs must be >= 1");
  require(cfg.n_train >= 1 && cfg.n_test >= 1,
          "train_epochs: n_train and n_test must be >= 1");
  require(cfg.eta > 0.0, "train_epochs: eta must be > 0");
  const AttackBudget eps(cfg.epsilon);

  const Dataset train = sample(model, derive_seed(cfg.seed, kTrainSeedStream),
                               static_cast<std::size_t>(cfg.n_train));
  const Dataset test = sample(model, derive_seed(cfg.seed, kTestSeedStream),
                              static_cast<std::size_t>(cfg.n_test));
  LinearHypothesis h = init_hypothesis(model.d, cfg);
  Rng shuffle_rng(derive_seed(cfg.seed, kShuffleSeedStream));

  std::vector<std::uint32_t> order(train.size());
  std::iota(order.begin(), order.end(), 0u);

  RunStats stats;
  stats.mean_theta.reserve(cfg.epochs);
  stats.test_accuracy.reserve(cfg.epochs);

  std::vector<double> grad(model.d);
  LinearHypothesis before;
  for (std::int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) shuffle_rng.shuffle(std::span<std::uint32_t>(order));
    for (const std::uint32_t idx : order) {
      const LabeledSample s = train[idx];
      if (cfg.check_linear_update && cfg.loss.type() == LossType::kLinear) {
        before = h;
      }
      double grad_bias = 0.0;
      adversarial_gradient(cfg.loss, h, s, eps, grad, grad_bias);
      for (std::size_t j = 0; j < model.d; ++j) {
        h.theta[j] -= cfg.eta * grad[j];
      }
      if (cfg.learn_bias) h.bias -= cfg.eta * grad_bias;
      if (cfg.check_linear_update && cfg.loss.type() == LossType::kLinear) {
        check_linear_update_identity(before, h, s, cfg.eta, cfg.epsilon);
      }
    }
    stats.mean_theta.push_back(coordinate_mean(h.theta));
    stats.test_accuracy.push_back(evaluate_accuracy(h, test).value());
    if (cfg.learn_bias) stats.bias_history.push_back(h.bias);
  }

  stats.final_theta = h.theta;
  stats.final_bias = h.bias;
  return stats;
}

Probability evaluate_accuracy(const LinearHypothesis& h, const Dataset& data) {
  if (data.size() == 0) {
    throw std::domain_error("evaluate_accuracy: empty dataset");
  }
  if (h.theta.size() != data.dim()) {
    throw std::domain_error("evaluate_accuracy: dimension mismatch");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LabeledSample s = data[i];
    double f = h.bias;
    for (std::size_t j = 0; j < s.x.size(); ++j) f += h.theta[j] * s.x[j];
    const int prediction = f < 0.0 ? -1 : 1;
    if (prediction == s.y) ++correct;
  }
  return Probability(static_cast<double>(correct) /
                     static_cast<double>(data.size()));
}

Probability evaluate_robust_accuracy(const LinearHypothesis& h,
                                     const Dataset& data, AttackBudget eps) {
  if (data.size() == 0) {
    throw std::domain_error("evaluate_robust_accuracy: empty dataset");
  }
  if (h.theta.size() != data.dim()) {
    throw std::domain_error("evaluate_robust_accuracy: dimension mismatch");
  }
  double l1 = 0.0;
  for (double t : h.theta) l1 += std::abs(t);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LabeledSample s = data[i];
    double f = h.bias;
    for (std::size_t j = 0; j < s.x.size(); ++j) f += h.theta[j] * s.x[j];
    const double worst = s.y * f - eps.epsilon * l1;
    if (worst > 0.0 || (worst == 0.0 && s.y == 1)) ++correct;
  }
  return Probability(static_cast<double>(correct) /
                     static_cast<double>(data.size()));
}

Dataset balanced_shifted_sample(const ShiftedModel& model, std::uint64_t seed,
                                std::size_t n) {
  if (n == 0 || n % 2 != 0) {
    throw std::domain_error("balanced_shifted_sample: n must be even and > 0");
  }
  Rng rng(seed);
  Dataset data(model.d, seed);
  data.reserve(n);
  std::vector<double> x(model.d);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = (i % 2 == 0) ? 1 : -1;
    const std::vector<double>& mean = (y == 1) ? model.mu1 : model.mu2;
    for (std::size_t j = 0; j < model.d; ++j) {
      x[j] = mean[j] + model.sigma * rng.gaussian();
    }
    data.append(x, y);
  }
  return data;
}

RunStats train_intercept(const ShiftedModel& model, const TrainConfig& cfg) {
  require(cfg.learn_bias, "train_intercept: learn_bias must be set");
  const bool loss_ok =
      cfg.loss.type() == LossType::kLinear ||
      (cfg.loss.type() == LossType::kHinge && cfg.loss.margin() == 0.0);
  require(loss_ok, "train_intercept: loss must be linear or hinge0");
  require(cfg.iterations >= 1, "train_intercept: iterations must be >= 1");
  require(cfg.n_train >= 2 && cfg.n_train % 2 == 0,
          "train_intercept: n_train must be even and >= 2");
  require(cfg.n_test >= 2 && cfg.n_test % 2 == 0,
          "train_intercept: n_test must be even and >= 2");
  require(cfg.eta > 0.0, "train_intercept: eta must be > 0");
  const AttackBudget eps(cfg.epsilon);

  const Dataset train =
      balanced_shifted_sample(model, derive_seed(cfg.seed, kTrainSeedStream),
                              static_cast<std::size_t>(cfg.n_train));
  const Dataset test =
      balanced_shifted_sample(model, derive_seed(cfg.seed, kTestSeedStream),
                              static_cast<std::size_t>(cfg.n_test));
  LinearHypothesis h = init_hypothesis(model.d, cfg);

  RunStats stats;
  stats.bias_history.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  stats.test_accuracy.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  stats.bias_history.push_back(h.bias);
  stats.test_accuracy.push_back(evaluate_accuracy(h, test).value());

  const double n = static_cast<double>(train.size());
  std::vector<double> grad(model.d);
  std::vector<double> grad_sum(model.d);
  for (std::int64_t step = 0; step < cfg.iterations; ++step) {
    std::fill(grad_sum.begin(), grad_sum.end(), 0.0);
    double grad_bias_sum = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      double grad_bias = 0.0;
      adversarial_gradient(cfg.loss, h, train[i], eps, grad, grad_bias);
      for (std::size_t j = 0; j < model.d; ++j) grad_sum[j] += grad[j];
      grad_bias_sum += grad_bias;
    }
    for (std::size_t j = 0; j < model.d; ++j) {
      h.theta[j] -= cfg.eta * (grad_sum[j] / n);
    }
    h.bias -= cfg.eta * (grad_bias_sum / n);
    stats.bias_history.push_back(h.bias);
    stats.test_accuracy.push_back(evaluate_accuracy(h, test).value());
  }

  stats.final_theta = h.theta;
  stats.final_bias = h.bias;
  return stats;
}

void write_streaming_csv(const RunStats& stats,
                         const std::filesystem::path& path) {
  if (stats.theta_history.empty()) {
    throw std::invalid_argument(
        "write_streaming_csv: run has no scalar theta history (d != 1?)");
  }
  std::ostringstream out;
  out << "# step 0 is the initial theta, before the first update\n";
  out << "step,theta,sign\n";
  for (std::size_t i = 0; i < stats.theta_history.size(); ++i) {
    const double v = stats.theta_history[i];
    out << i << ',' << format_real(v) << ','
        << (v > 0.0 ? 1 : (v < 0.0 ? -1 : 0)) << "\n";
  }
  atomic_write_text(path, out.str());
}

void write_epoch_csv(const RunStats& stats, bool with_bias,
                     const std::filesystem::path& path) {
  std::ostringstream out;
  out << "epoch,mean_theta,test_accuracy";
  if (with_bias) out << ",bias";
  out << "\n";
  for (std::size_t e = 0; e < stats.mean_theta.size(); ++e) {
    out << (e + 1) << ',' << format_real(stats.mean_theta[e]) << ','
        << format_real(stats.test_accuracy[e]);
    if (with_bias) out << ',' << format_real(stats.bias_history[e]);
    out << "\n";
  }
  atomic_write_text(path, out.str());
}

void write_intercept_csv(const RunStats& stats,
                         const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# step 0 is the initial hypothesis, before the first update\n";
  out << "step,bias,test_accuracy\n";
  for (std::size_t i = 0; i < stats.bias_history.size(); ++i) {
    out << i << ',' << format_real(stats.bias_history[i]) << ','
        << format_real(stats.test_accuracy[i]) << "\n";
  }
  atomic_write_text(path, out.str());
}

}  // namespace advlin

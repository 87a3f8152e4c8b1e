#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "advlin/dynamics.hpp"
#include "advlin/losses.hpp"
#include "advlin/model.hpp"

namespace advlin {

enum class TrainMode { kStreaming, kEpochs };

// Per-purpose seed streams derived from TrainConfig::seed via derive_seed().
inline constexpr std::uint64_t kInitSeedStream = 0;
inline constexpr std::uint64_t kTrainSeedStream = 1;
inline constexpr std::uint64_t kTestSeedStream = 2;
inline constexpr std::uint64_t kShuffleSeedStream = 3;

/// All knobs of one training run. A config + model pair fully determines the
/// run: seeds for the initial hypothesis, training data, test data and epoch
/// shuffling are derived from `seed` with fixed stream ids (derive_seed).
struct TrainConfig {
  double eta = 1e-3;
  double epsilon = 0.0;
  LossKind loss = LossKind::linear();
  TrainMode mode = TrainMode::kStreaming;

  std::int64_t iterations = 0;  // streaming mode; also intercept batch steps
  std::int64_t n_train = 0;     // epoch mode + intercept
  std::int64_t n_test = 0;
  std::int64_t epochs = 0;

  std::uint64_t seed = 0;
  double init_sigma = 1.0;
  bool learn_bias = false;
  bool shuffle = true;

  // Debug: assert the linear-loss update theta_j += eta*(y x_j - eps sign)
  // holds bit-exactly on every step.
  bool check_linear_update = false;
};

struct RunStats {
  // Streaming mode: sign tallies per coordinate over the whole run, including
  // the initial hypothesis (so totals are iterations + 1).
  std::vector<SignCensus> sign_counts;
  // Streaming mode with d == 1: theta after each update; [0] is the initial.
  std::vector<double> theta_history;

  // Epoch mode: one entry per epoch. Intercept runs: one entry per batch step
  // plus the initial state.
  std::vector<double> mean_theta;
  std::vector<double> test_accuracy;
  std::vector<double> bias_history;

  std::vector<double> final_theta;
  double final_bias = 0.0;
};

/// theta_j iid N(0, init_sigma^2); bias N(0, 1) when learn_bias, else 0.
LinearHypothesis init_hypothesis(std::size_t d, const TrainConfig& cfg);

/// One fresh sample per iteration, single-sample updates, sign tallies after
/// every update.
RunStats train_streaming(const GaussianModel& model, const TrainConfig& cfg);

/// Fixed train/test sets, seeded shuffled order each epoch, single-sample
/// updates; records coordinate-mean of theta and clean test accuracy at the
/// end of each epoch.
RunStats train_epochs(const GaussianModel& model, const TrainConfig& cfg);

/// Fraction of samples with sign(theta.x + b) == y; an exact zero counts as +1.
Probability evaluate_accuracy(const LinearHypothesis& h, const Dataset& data);

/// Accuracy under the worst-case perturbation at budget eps.
Probability evaluate_robust_accuracy(const LinearHypothesis& h,
                                     const Dataset& data, AttackBudget eps);

/// Shifted-model data with labels forced to alternate +1/-1, so every prefix
/// of even length is exactly balanced. n must be even.
Dataset balanced_shifted_sample(const ShiftedModel& model, std::uint64_t seed,
                                std::size_t n);

/// Full-batch training on balanced shifted-model data with a learned bias.
/// Requires learn_bias and a linear or margin-0 hinge loss; cfg.iterations
/// counts batch steps. Records the bias and test accuracy after every step.
RunStats train_intercept(const ShiftedModel& model, const TrainConfig& cfg);

/// CSV "step,theta,sign"; step 0 is the initial hypothesis.
void write_streaming_csv(const RunStats& stats,
                         const std::filesystem::path& path);

/// CSV "epoch,mean_theta,test_accuracy[,bias]" (1-based epochs).
void write_epoch_csv(const RunStats& stats, bool with_bias,
                     const std::filesystem::path& path);

/// CSV "step,bias,test_accuracy"; step 0 is the initial hypothesis.
void write_intercept_csv(const RunStats& stats,
                         const std::filesystem::path& path);

}  // namespace advlin

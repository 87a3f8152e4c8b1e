#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "advlin/specfun.hpp"

namespace advlin {

/// Symmetric two-class Gaussian data model: y uniform on {-1, +1},
/// x | y ~ N(y * mu, sigma^2 I). All mean components must be positive.
struct GaussianModel {
  GaussianModel(std::size_t d, std::vector<double> mu, double sigma);
  GaussianModel(std::size_t d, double mu, double sigma);  // equal means

  std::size_t d;
  std::vector<double> mu;
  double sigma;

  bool equal_means() const;
};

/// Shifted-mean variant: x | y=+1 ~ N(mu1, sigma^2 I),
/// x | y=-1 ~ N(mu2, sigma^2 I), with 0 < mu2 < mu1 componentwise.
struct ShiftedModel {
  ShiftedModel(std::size_t d, std::vector<double> mu1, std::vector<double> mu2,
               double sigma);
  ShiftedModel(double mu1, double mu2, double sigma);  // d = 1

  std::size_t d;
  std::vector<double> mu1;
  std::vector<double> mu2;
  double sigma;
};

/// Non-owning view of one dataset row.
struct LabeledSample {
  std::span<const double> x;
  int y;
};

/// A reproducibly seeded sample collection. Rows are stored contiguously;
/// regenerating with the same (model, seed, n) gives bit-identical content.
class Dataset {
 public:
  Dataset(std::size_t d, std::uint64_t seed) : d_(d), seed_(seed) {}

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return d_; }
  std::uint64_t seed() const { return seed_; }

  LabeledSample operator[](std::size_t i) const {
    return {std::span<const double>(&features_[i * d_], d_), labels_[i]};
  }

  void append(std::span<const double> x, int y);
  void reserve(std::size_t n);

 private:
  std::size_t d_;
  std::uint64_t seed_;
  std::vector<std::int8_t> labels_;
  std::vector<double> features_;
};

/// Draw n labeled samples from the symmetric model. Per sample: one label
/// draw, then d Gaussian draws.
Dataset sample(const GaussianModel& model, std::uint64_t seed, std::size_t n);

/// Draw n labeled samples from the shifted-mean model.
Dataset sample_shifted(const ShiftedModel& model, std::uint64_t seed,
                       std::size_t n);

/// Minimum achievable error in one dimension: (1 - erf(mu / (sqrt(2) sigma))) / 2.
Probability bayes_error_1d(double mu, double sigma);

/// Accuracy of any all-positive linear classifier in d dimensions with equal
/// means: Phi(sqrt(d) * mu / sigma). Rejects models with unequal means.
Probability bayes_accuracy_d(const GaussianModel& model);

/// Optimal decision sign(mu . x); an exact zero resolves to +1.
int bayes_decision(std::span<const double> x, std::span<const double> mu,
                   double sigma);

/// CSV round trip, header "y,x_0,...,x_{d-1}", reals at 17 significant digits.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace advlin

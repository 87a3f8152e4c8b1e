#include "advlin/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "advlin/csv.hpp"
#include "advlin/rng.hpp"

namespace advlin {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

GaussianModel::GaussianModel(std::size_t d_, std::vector<double> mu_,
                             double sigma_)
    : d(d_), mu(std::move(mu_)), sigma(sigma_) {
  if (d < 1) throw std::domain_error("GaussianModel: d must be >= 1");
  if (mu.size() != d) throw std::domain_error("GaussianModel: len(mu) != d");
  for (double m : mu) require_positive(m, "GaussianModel: mu_j");
  require_positive(sigma, "GaussianModel: sigma");
}

GaussianModel::GaussianModel(std::size_t d_, double mu_, double sigma_)
    : GaussianModel(d_, std::vector<double>(d_, mu_), sigma_) {}

bool GaussianModel::equal_means() const {
  for (double m : mu) {
    if (m != mu[0]) return false;
  }
  return true;
}

ShiftedModel::ShiftedModel(std::size_t d_, std::vector<double> mu1_,
                           std::vector<double> mu2_, double sigma_)
    : d(d_), mu1(std::move(mu1_)), mu2(std::move(mu2_)), sigma(sigma_) {
  if (d < 1) throw std::domain_error("ShiftedModel: d must be >= 1");
  if (mu1.size() != d || mu2.size() != d) {
    throw std::domain_error("ShiftedModel: mean dimensions != d");
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (!(0.0 < mu2[j] && mu2[j] < mu1[j])) {
      throw std::domain_error("ShiftedModel: requires 0 < mu2 < mu1 componentwise");
    }
  }
  require_positive(sigma, "ShiftedModel: sigma");
}

ShiftedModel::ShiftedModel(double mu1_, double mu2_, double sigma_)
    : ShiftedModel(1, {mu1_}, {mu2_}, sigma_) {}

void Dataset::append(std::span<const double> x, int y) {
  if (x.size() != d_) throw std::domain_error("Dataset::append: wrong dimension");
  if (y != 1 && y != -1) throw std::domain_error("Dataset::append: label must be +-1");
  features_.insert(features_.end(), x.begin(), x.end());
  labels_.push_back(static_cast<std::int8_t>(y));
}

void Dataset::reserve(std::size_t n) {
  labels_.reserve(n);
  features_.reserve(n * d_);
}

Dataset sample(const GaussianModel& model, std::uint64_t seed, std::size_t n) {
  if (n == 0) throw std::domain_error("sample: n must be >= 1");
  Rng rng(seed);
  Dataset data(model.d, seed);
  data.reserve(n);
  std::vector<double> x(model.d);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = rng.sign_label();
    for (std::size_t j = 0; j < model.d; ++j) {
      x[j] = y * model.mu[j] + model.sigma * rng.gaussian();
    }
    data.append(x, y);
  }
  return data;
}

Dataset sample_shifted(const ShiftedModel& model, std::uint64_t seed,
                       std::size_t n) {
  if (n == 0) throw std::domain_error("sample_shifted: n must be >= 1");
  Rng rng(seed);
  Dataset data(model.d, seed);
  data.reserve(n);
  std::vector<double> x(model.d);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = rng.sign_label();
    const std::vector<double>& mean = (y == 1) ? model.mu1 : model.mu2;
    for (std::size_t j = 0; j < model.d; ++j) {
      x[j] = mean[j] + model.sigma * rng.gaussian();
    }
    data.append(x, y);
  }
  return data;
}

Probability bayes_error_1d(double mu, double sigma) {
  require_positive(mu, "bayes_error_1d: mu");
  require_positive(sigma, "bayes_error_1d: sigma");
  return Probability(0.5 * (1.0 - erf(mu / (std::numbers::sqrt2 * sigma))));
}

Probability bayes_accuracy_d(const GaussianModel& model) {
  if (!model.equal_means()) {
    throw std::invalid_argument(
        "bayes_accuracy_d: only equal-mean models are supported");
  }
  const double arg =
      std::sqrt(static_cast<double>(model.d)) * model.mu[0] / model.sigma;
  return phi(arg);
}

int bayes_decision(std::span<const double> x, std::span<const double> mu,
                   double sigma) {
  if (x.size() != mu.size()) {
    throw std::domain_error("bayes_decision: dimension mismatch");
  }
  require_positive(sigma, "bayes_decision: sigma");
  double dot = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) dot += mu[j] * x[j];
  return dot < 0.0 ? -1 : 1;
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "y";
  for (std::size_t j = 0; j < data.dim(); ++j) out << ",x_" << j;
  out << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LabeledSample s = data[i];
    out << s.y;
    for (double v : s.x) out << ',' << format_real(v);
    out << "\n";
  }
  atomic_write_text(path, out.str());
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.header.empty() || table.header[0] != "y") {
    throw std::runtime_error("dataset CSV: bad header in " + path.string());
  }
  const std::size_t d = table.header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (table.header[j + 1] != "x_" + std::to_string(j)) {
      throw std::runtime_error("dataset CSV: bad header in " + path.string());
    }
  }
  Dataset data(d, 0);
  data.reserve(table.rows.size());
  std::vector<double> x(d);
  for (const auto& row : table.rows) {
    if (row.size() != d + 1) {
      throw std::runtime_error("dataset CSV: ragged row in " + path.string());
    }
    const int y = std::stoi(row[0]);
    for (std::size_t j = 0; j < d; ++j) x[j] = std::stod(row[j + 1]);
    data.append(x, y);
  }
  return data;
}

}  // namespace advlin

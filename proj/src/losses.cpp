#include "advlin/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace advlin {
namespace {

double sign_of(double v) {
  if (v > 0.0) return 1.0;
  if (v < 0.0) return -1.0;
  return 0.0;
}

// log(1 + exp(z)) without overflow; |z| in the hundreds is routine here.
double softplus(double z) {
  if (z >= 30.0) return z;
  if (z <= -30.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

double logistic(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void require_dims(const LinearHypothesis& h, const LabeledSample& s) {
  if (h.theta.size() != s.x.size()) {
    throw std::domain_error("hypothesis/sample dimension mismatch");
  }
}

// Margin y * f at the worst-case point x + delta*: y (theta.x + b) - eps ||theta||_1.
double attacked_margin(const LinearHypothesis& h, const LabeledSample& s,
                       double eps) {
  double dot = 0.0;
  double l1 = 0.0;
  for (std::size_t j = 0; j < h.theta.size(); ++j) {
    dot += h.theta[j] * s.x[j];
    l1 += std::abs(h.theta[j]);
  }
  return s.y * (dot + h.bias) - eps * l1;
}

double loss_of_margin(const LossKind& kind, double m) {
  switch (kind.type()) {
    case LossType::kLinear:
      return -m;
    case LossType::kCrossEntropy:
      return softplus(-m);
    case LossType::kHinge:
      return std::max(0.0, kind.margin() - m);
  }
  return 0.0;  // unreachable
}

}  // namespace

LossKind LossKind::hinge(double margin) {
  if (margin != 0.0 && margin != 1.0) {
    throw std::domain_error("hinge margin must be 0 or 1");
  }
  return LossKind(LossType::kHinge, margin);
}

std::string LossKind::name() const {
  switch (type_) {
    case LossType::kLinear:
      return "linear";
    case LossType::kCrossEntropy:
      return "xent";
    case LossType::kHinge:
      return margin_ == 0.0 ? "hinge0" : "hinge1";
  }
  return "?";
}

LossKind parse_loss(std::string_view name) {
  if (name == "linear") return LossKind::linear();
  if (name == "xent" || name == "cross-entropy") return LossKind::cross_entropy();
  if (name == "hinge0") return LossKind::hinge(0.0);
  if (name == "hinge1" || name == "hinge") return LossKind::hinge(1.0);
  throw std::invalid_argument("unknown loss: " + std::string(name));
}

AttackBudget::AttackBudget(double eps) : epsilon(eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw std::domain_error("attack budget must be finite and >= 0");
  }
}

double loss_value(const LossKind& kind, const LinearHypothesis& h,
                  const LabeledSample& s) {
  require_dims(h, s);
  return loss_of_margin(kind, attacked_margin(h, s, 0.0));
}

std::vector<double> worst_case_perturbation(const LossKind& kind,
                                            const LinearHypothesis& h,
                                            const LabeledSample& s,
                                            AttackBudget eps) {
  (void)kind;  // the maximizer is the same for every supported loss
  require_dims(h, s);
  std::vector<double> delta(h.theta.size());
  for (std::size_t j = 0; j < h.theta.size(); ++j) {
    delta[j] = -eps.epsilon * s.y * sign_of(h.theta[j]);
  }
  return delta;
}

double adversarial_loss(const LossKind& kind, const LinearHypothesis& h,
                        const LabeledSample& s, AttackBudget eps) {
  require_dims(h, s);
  return loss_of_margin(kind, attacked_margin(h, s, eps.epsilon));
}

void adversarial_gradient(const LossKind& kind, const LinearHypothesis& h,
                          const LabeledSample& s, AttackBudget eps,
                          std::span<double> grad_theta, double& grad_bias) {
  require_dims(h, s);
  if (grad_theta.size() != h.theta.size()) {
    throw std::domain_error("gradient buffer dimension mismatch");
  }
  const double y = s.y;
  switch (kind.type()) {
    case LossType::kLinear: {
      for (std::size_t j = 0; j < h.theta.size(); ++j) {
        grad_theta[j] = -y * s.x[j] + eps.epsilon * sign_of(h.theta[j]);
      }
      grad_bias = -y;
      return;
    }
    case LossType::kCrossEntropy: {
      const double g = logistic(-attacked_margin(h, s, eps.epsilon));
      for (std::size_t j = 0; j < h.theta.size(); ++j) {
        grad_theta[j] = g * (-y * s.x[j] + eps.epsilon * sign_of(h.theta[j]));
      }
      grad_bias = g * -y;
      return;
    }
    case LossType::kHinge: {
      const bool active = attacked_margin(h, s, eps.epsilon) < kind.margin();
      if (!active) {
        for (auto& g : grad_theta) g = 0.0;
        grad_bias = 0.0;
        return;
      }
      for (std::size_t j = 0; j < h.theta.size(); ++j) {
        grad_theta[j] = -y * s.x[j] + eps.epsilon * sign_of(h.theta[j]);
      }
      grad_bias = -y;
      return;
    }
  }
}

std::pair<std::vector<double>, double> adversarial_gradient(
    const LossKind& kind, const LinearHypothesis& h, const LabeledSample& s,
    AttackBudget eps) {
  std::vector<double> grad(h.theta.size());
  double grad_bias = 0.0;
  adversarial_gradient(kind, h, s, eps, grad, grad_bias);
  return {std::move(grad), grad_bias};
}

}  // namespace advlin

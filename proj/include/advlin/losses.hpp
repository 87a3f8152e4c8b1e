#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advlin/model.hpp"

namespace advlin {

enum class LossType { kLinear, kCrossEntropy, kHinge };

/// Loss selector. Cross-entropy is the binary logistic loss
/// log(1 + exp(-y f)); hinge carries a margin restricted to 0 or 1.
class LossKind {
 public:
  static LossKind linear() { return LossKind(LossType::kLinear, 0.0); }
  static LossKind cross_entropy() { return LossKind(LossType::kCrossEntropy, 0.0); }
  static LossKind hinge(double margin);

  LossType type() const { return type_; }
  double margin() const { return margin_; }
  std::string name() const;

 private:
  LossKind(LossType type, double margin) : type_(type), margin_(margin) {}
  LossType type_;
  double margin_;
};

/// Accepts "linear", "xent" (or "cross-entropy"), "hinge0", "hinge1".
LossKind parse_loss(std::string_view name);

/// f(x) = theta . x + bias; the classifier is sign(f(x)).
struct LinearHypothesis {
  std::vector<double> theta;
  double bias = 0.0;
};

/// l-infinity perturbation radius.
struct AttackBudget {
  explicit AttackBudget(double eps);
  double epsilon;
};

double loss_value(const LossKind& kind, const LinearHypothesis& h,
                  const LabeledSample& s);

/// Exact inner maximizer for linear hypotheses: delta_j = -eps * y * sign(theta_j),
/// with sign(0) = 0. Optimal for every supported loss (all are monotone
/// nonincreasing in y * f).
std::vector<double> worst_case_perturbation(const LossKind& kind,
                                            const LinearHypothesis& h,
                                            const LabeledSample& s,
                                            AttackBudget eps);

/// max over ||delta||_inf <= eps of the loss; for the linear loss this equals
/// -y (theta . x + b) + eps * ||theta||_1.
double adversarial_loss(const LossKind& kind, const LinearHypothesis& h,
                        const LabeledSample& s, AttackBudget eps);

/// Gradient of the adversarial loss at the attacked point (chain rule through
/// the fixed maximizer). Linear: grad_theta_j = -y x_j + eps sign(theta_j),
/// grad_bias = -y. Hinge subgradient is 0 at the kink; sign(0) = 0 throughout.
void adversarial_gradient(const LossKind& kind, const LinearHypothesis& h,
                          const LabeledSample& s, AttackBudget eps,
                          std::span<double> grad_theta, double& grad_bias);

std::pair<std::vector<double>, double> adversarial_gradient(
    const LossKind& kind, const LinearHypothesis& h, const LabeledSample& s,
    AttackBudget eps);

}  // namespace advlin

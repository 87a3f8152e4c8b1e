#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "advlin/losses.hpp"
#include "advlin/rng.hpp"

using namespace advlin;

namespace {

LabeledSample view(const std::vector<double>& x, int y) {
  return LabeledSample{std::span<const double>(x), y};
}

// Brute-force inner maximization: the loss is monotone in y*f and f is linear
// in delta, so the maximum over the box lies on a corner; enumerate all 2^d
// corners plus delta = 0.
double corner_max_loss(const LossKind& kind, const LinearHypothesis& h,
                       const std::vector<double>& x, int y, double eps) {
  const std::size_t d = x.size();
  std::vector<double> shifted(d);
  double best = loss_value(kind, h, view(x, y));
  for (std::size_t mask = 0; mask < (1u << d); ++mask) {
    for (std::size_t j = 0; j < d; ++j) {
      shifted[j] = x[j] + ((mask >> j) & 1 ? eps : -eps);
    }
    best = std::max(best, loss_value(kind, h, view(shifted, y)));
  }
  return best;
}

struct Instance {
  LinearHypothesis h;
  std::vector<double> x;
  int y;
  double eps;
};

Instance random_instance(Rng& rng, std::size_t d) {
  Instance inst;
  inst.h.theta.resize(d);
  inst.x.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    inst.h.theta[j] = 2.0 * rng.uniform01() - 1.0;
    inst.x[j] = 4.0 * rng.uniform01() - 2.0;
  }
  inst.h.bias = rng.uniform01() - 0.5;
  inst.y = rng.sign_label();
  inst.eps = rng.uniform01();
  return inst;
}

const std::vector<LossKind> kAllKinds = {LossKind::linear(),
                                         LossKind::cross_entropy(),
                                         LossKind::hinge(0.0),
                                         LossKind::hinge(1.0)};

}  // namespace

TEST_CASE("loss_value closed forms") {
  LinearHypothesis h{{2.0}, 0.0};
  CHECK(loss_value(LossKind::linear(), h, view({3.0}, 1)) == -6.0);

  LinearHypothesis zero{{1.0}, 0.0};
  CHECK(std::abs(loss_value(LossKind::cross_entropy(), zero, view({0.0}, 1)) -
                 std::log(2.0)) < 1e-15);
  CHECK(std::abs(loss_value(LossKind::cross_entropy(), zero, view({0.0}, -1)) -
                 std::log(2.0)) < 1e-15);

  LinearHypothesis biased{{1.0}, 0.5};
  CHECK(loss_value(LossKind::hinge(0.0), biased, view({-1.0}, 1)) == 0.5);
  CHECK(loss_value(LossKind::hinge(1.0), zero, view({2.0}, 1)) == 0.0);
}

TEST_CASE("cross-entropy stays finite at extreme margins") {
  LinearHypothesis h{{1.0}, 0.0};
  const double big = loss_value(LossKind::cross_entropy(), h, view({500.0}, -1));
  CHECK(big == 500.0);
  const double small = loss_value(LossKind::cross_entropy(), h, view({500.0}, 1));
  CHECK(small >= 0.0);
  CHECK(small < 1e-100);
}

TEST_CASE("worst_case_perturbation follows -eps*y*sign(theta)") {
  LinearHypothesis h{{0.3, -0.2}, 0.0};
  const auto delta = worst_case_perturbation(LossKind::linear(), h,
                                             view({0.0, 0.0}, 1),
                                             AttackBudget(0.1));
  CHECK(delta == std::vector<double>{-0.1, 0.1});

  const auto none = worst_case_perturbation(LossKind::linear(), h,
                                            view({1.0, 2.0}, -1),
                                            AttackBudget(0.0));
  CHECK(none == std::vector<double>{0.0, 0.0});

  LinearHypothesis with_zero{{0.0, 1.0}, 0.0};
  const auto partial = worst_case_perturbation(
      LossKind::linear(), with_zero, view({5.0, 5.0}, 1), AttackBudget(2.0));
  CHECK(partial[0] == 0.0);  // sign(0) = 0: no perturbation on dead coordinates
  CHECK(partial[1] == -2.0);
}

TEST_CASE("adversarial_loss closed form for the linear loss") {
  LinearHypothesis h1{{1.0, -1.0}, 0.0};
  CHECK(adversarial_loss(LossKind::linear(), h1, view({0.0, 0.0}, 1),
                         AttackBudget(0.5)) == 1.0);
  LinearHypothesis h2{{1.0, -2.0}, 0.0};
  CHECK(adversarial_loss(LossKind::linear(), h2, view({1.0, 1.0}, 1),
                         AttackBudget(0.5)) == 2.5);
}

TEST_CASE("attack optimality against corner enumeration") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.below(4));
    const Instance inst = random_instance(rng, d);
    for (const LossKind& kind : kAllKinds) {
      const double closed =
          adversarial_loss(kind, inst.h, view(inst.x, inst.y),
                           AttackBudget(inst.eps));
      const double brute = corner_max_loss(kind, inst.h, inst.x, inst.y,
                                           inst.eps);
      CHECK(std::abs(closed - brute) <= 1e-12);

      // And evaluating the loss at x + delta* gives the same number.
      const auto delta = worst_case_perturbation(kind, inst.h,
                                                 view(inst.x, inst.y),
                                                 AttackBudget(inst.eps));
      std::vector<double> attacked(d);
      double linf = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        attacked[j] = inst.x[j] + delta[j];
        linf = std::max(linf, std::abs(delta[j]));
      }
      CHECK(linf <= inst.eps);
      CHECK(std::abs(loss_value(kind, inst.h, view(attacked, inst.y)) -
                     closed) <= 1e-12);
    }
  }
}

TEST_CASE("adversarial loss dominates the clean loss") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_instance(rng, 1 + rng.below(4));
    for (const LossKind& kind : kAllKinds) {
      CHECK(adversarial_loss(kind, inst.h, view(inst.x, inst.y),
                             AttackBudget(inst.eps)) >=
            loss_value(kind, inst.h, view(inst.x, inst.y)));
      CHECK(adversarial_loss(kind, inst.h, view(inst.x, inst.y),
                             AttackBudget(0.0)) ==
            loss_value(kind, inst.h, view(inst.x, inst.y)));
    }
  }
}

TEST_CASE("adversarial_gradient closed form for the linear loss") {
  LinearHypothesis h{{0.5}, 0.0};
  auto [grad, grad_b] = adversarial_gradient(LossKind::linear(), h,
                                             view({2.0}, 1), AttackBudget(1.5));
  CHECK(grad[0] == -0.5);  // -2 + 1.5
  CHECK(grad_b == -1.0);

  LinearHypothesis at_zero{{0.0}, 0.0};
  auto [grad0, grad0_b] = adversarial_gradient(
      LossKind::linear(), at_zero, view({2.0}, 1), AttackBudget(1.5));
  CHECK(grad0[0] == -2.0);  // sign(0) = 0 removes the eps term
  CHECK(grad0_b == -1.0);
}

TEST_CASE("hinge gradient vanishes once the attacked margin clears") {
  LinearHypothesis h{{1.0}, 0.0};
  auto [grad, grad_b] = adversarial_gradient(LossKind::hinge(1.0), h,
                                             view({5.0}, 1), AttackBudget(0.5));
  CHECK(grad[0] == 0.0);
  CHECK(grad_b == 0.0);
}

TEST_CASE("gradients match central finite differences") {
  Rng rng(31415);
  int tested = 0;
  while (tested < 120) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.below(4));
    Instance inst = random_instance(rng, d);
    bool near_sign_boundary = false;
    for (double t : inst.h.theta) {
      if (std::abs(t) < 1e-5) near_sign_boundary = true;
    }
    if (near_sign_boundary) continue;

    for (const LossKind& kind : kAllKinds) {
      const LabeledSample s = view(inst.x, inst.y);
      const AttackBudget eps(inst.eps);
      if (kind.type() == LossType::kHinge) {
        // The attacked margin is -1 * the adversarial linear loss; skip
        // instances close to the hinge kink.
        const double attacked_margin =
            -adversarial_loss(LossKind::linear(), inst.h, s, eps);
        if (std::abs(attacked_margin - kind.margin()) < 1e-3) continue;
      }
      auto [grad, grad_b] = adversarial_gradient(kind, inst.h, s, eps);
      const double h_step = 1e-6;
      for (std::size_t j = 0; j < d; ++j) {
        LinearHypothesis up = inst.h;
        LinearHypothesis down = inst.h;
        up.theta[j] += h_step;
        down.theta[j] -= h_step;
        const double fd = (adversarial_loss(kind, up, s, eps) -
                           adversarial_loss(kind, down, s, eps)) /
                          (2.0 * h_step);
        const double scale = std::max(1.0, std::abs(grad[j]));
        CHECK(std::abs(fd - grad[j]) / scale <= 1e-5);
      }
      LinearHypothesis up = inst.h;
      LinearHypothesis down = inst.h;
      up.bias += h_step;
      down.bias -= h_step;
      const double fd_b = (adversarial_loss(kind, up, s, eps) -
                           adversarial_loss(kind, down, s, eps)) /
                          (2.0 * h_step);
      const double scale_b = std::max(1.0, std::abs(grad_b));
      CHECK(std::abs(fd_b - grad_b) / scale_b <= 1e-5);
    }
    ++tested;
  }
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(LossKind::hinge(0.5), std::domain_error);
  CHECK_THROWS_AS(AttackBudget(-0.1), std::domain_error);
  CHECK(parse_loss("linear").name() == "linear");
  CHECK(parse_loss("xent").name() == "xent");
  CHECK(parse_loss("cross-entropy").name() == "xent");
  CHECK(parse_loss("hinge0").margin() == 0.0);
  CHECK(parse_loss("hinge1").margin() == 1.0);
  CHECK_THROWS_AS(parse_loss("l2"), std::invalid_argument);

  LinearHypothesis h{{1.0, 2.0}, 0.0};
  CHECK_THROWS_AS(loss_value(LossKind::linear(), h, view({1.0}, 1)),
                  std::domain_error);
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "advlin/rational.hpp"

namespace advlin {

/// Parameters of the expected-update recurrence
///   theta' = theta + eta * (mu + eps)  if theta < 0
///   theta' = theta + eta * mu          if theta = 0
///   theta' = theta + eta * (mu - eps)  if theta > 0
/// Everything is exact: the proposition checks compare signs strictly, where
/// floating-point rounding would give spurious verdicts.
struct RecurrenceParams {
  RecurrenceParams(Rational eta_, Rational mu_, Rational epsilon_);

  Rational eta;
  Rational mu;
  Rational epsilon;
};

struct Trajectory {
  std::vector<Rational> values;  // theta^0 .. theta^k
};

struct SignCensus {
  std::int64_t positive = 0;
  std::int64_t negative = 0;
  std::int64_t zero = 0;

  std::int64_t total() const { return positive + negative + zero; }
};

enum class Verdict { kPass, kFail, kNotApplicable };

struct CheckResult {
  Verdict verdict = Verdict::kNotApplicable;
  std::int64_t index = -1;  // first-negative / violating index
};

Rational expected_step(const Rational& theta, const RecurrenceParams& p);

/// Iterate the recurrence `steps` times; result holds steps + 1 values.
Trajectory simulate(const Rational& theta0, const RecurrenceParams& p,
                    std::int64_t steps);

SignCensus sign_census(const Trajectory& t);

/// For eps > mu, zero attracts: some index n0 >= 1 has theta^{n0} < 0.
/// Returns that first index, kFail if the horizon runs out (a counterexample),
/// or kNotApplicable when eps <= mu.
CheckResult check_attraction(const RecurrenceParams& p, const Rational& theta0,
                             std::int64_t horizon);

/// After the first negative value that follows a positive one, every negative
/// theta^{n+k} must be followed by theta^{n+k+1} > 2 * eta * mu (strictly).
CheckResult check_next_is_pos(const Trajectory& t, const RecurrenceParams& p);

/// With mu < eps < t_bound * mu, every negative value after the first
/// positive-then-negative pattern is followed by two consecutive positive
/// values within s_choice(t_bound) + 1 steps.
CheckResult check_consecutive_pos(const RecurrenceParams& p,
                                  const Rational& t_bound,
                                  const Trajectory& t);

/// ceil(t) if even, else ceil(t) + 1; always even and >= 2. Requires t > 1.
std::int64_t s_choice(const Rational& t);

struct CycleInfo {
  std::int64_t period = 0;
  std::int64_t preperiod = 0;
};

/// Brent cycle detection over exact states; nullopt when no repeat shows up
/// within max_steps (e.g. eps < mu, where the iterates diverge upward).
std::optional<CycleInfo> detect_cycle(const Rational& theta0,
                                      const RecurrenceParams& p,
                                      std::int64_t max_steps = 1000000);

/// CSV columns: step,theta_num,theta_den,theta_float.
void write_trajectory_csv(const Trajectory& t,
                          const std::filesystem::path& path);

}  // namespace advlin

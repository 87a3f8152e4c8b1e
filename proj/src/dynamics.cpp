#include "advlin/dynamics.hpp"

#include <sstream>
#include <stdexcept>

#include "advlin/csv.hpp"

namespace advlin {
namespace {

// The three per-step increments, precomputed once per run.
struct StepIncrements {
  Rational below;  // eta * (mu + eps)
  Rational at;     // eta * mu
  Rational above;  // eta * (mu - eps)

  explicit StepIncrements(const RecurrenceParams& p)
      : below(p.eta * (p.mu + p.epsilon)),
        at(p.eta * p.mu),
        above(p.eta * (p.mu - p.epsilon)) {}

  Rational next(const Rational& theta) const {
    const int s = theta.sign();
    if (s < 0) return theta + below;
    if (s > 0) return theta + above;
    return theta + at;
  }
};

}  // namespace

RecurrenceParams::RecurrenceParams(Rational eta_, Rational mu_,
                                   Rational epsilon_)
    : eta(std::move(eta_)), mu(std::move(mu_)), epsilon(std::move(epsilon_)) {
  if (eta.sign() <= 0) throw std::domain_error("RecurrenceParams: eta must be > 0");
  if (mu.sign() <= 0) throw std::domain_error("RecurrenceParams: mu must be > 0");
  if (epsilon.sign() < 0) {
    throw std::domain_error("RecurrenceParams: epsilon must be >= 0");
  }
}

Rational expected_step(const Rational& theta, const RecurrenceParams& p) {
  return StepIncrements(p).next(theta);
}

Trajectory simulate(const Rational& theta0, const RecurrenceParams& p,
                    std::int64_t steps) {
  if (steps < 1) throw std::domain_error("simulate: steps must be >= 1");
  const StepIncrements inc(p);
  Trajectory t;
  t.values.reserve(static_cast<std::size_t>(steps) + 1);
  t.values.push_back(theta0);
  for (std::int64_t k = 0; k < steps; ++k) {
    t.values.push_back(inc.next(t.values.back()));
  }
  return t;
}

SignCensus sign_census(const Trajectory& t) {
  SignCensus census;
  for (const Rational& v : t.values) {
    const int s = v.sign();
    if (s > 0) {
      ++census.positive;
    } else if (s < 0) {
      ++census.negative;
    } else {
      ++census.zero;
    }
  }
  return census;
}

CheckResult check_attraction(const RecurrenceParams& p, const Rational& theta0,
                             std::int64_t horizon) {
  if (!(p.epsilon > p.mu)) return {Verdict::kNotApplicable, -1};
  const StepIncrements inc(p);
  Rational theta = theta0;
  for (std::int64_t k = 1; k <= horizon; ++k) {
    theta = inc.next(theta);
    if (theta.sign() < 0) return {Verdict::kPass, k};
  }
  return {Verdict::kFail, -1};
}

namespace {

// First index > n0 of a negative value, where n0 is the first positive index.
// Returns -1 when the pattern never occurs.
std::int64_t first_negative_after_positive(const Trajectory& t) {
  std::int64_t n0 = -1;
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    const int s = t.values[i].sign();
    if (n0 < 0) {
      if (s > 0) n0 = static_cast<std::int64_t>(i);
    } else if (s < 0) {
      return static_cast<std::int64_t>(i);
    }
  }
  return -1;
}

}  // namespace

CheckResult check_next_is_pos(const Trajectory& t, const RecurrenceParams& p) {
  const std::int64_t n = first_negative_after_positive(t);
  if (n < 0) return {Verdict::kNotApplicable, -1};
  const Rational bound = 2 * p.eta * p.mu;
  const std::size_t len = t.values.size();
  for (std::size_t i = static_cast<std::size_t>(n); i + 1 < len; ++i) {
    if (t.values[i].sign() < 0 && !(t.values[i + 1] > bound)) {
      return {Verdict::kFail, static_cast<std::int64_t>(i + 1)};
    }
  }
  return {Verdict::kPass, n};
}

CheckResult check_consecutive_pos(const RecurrenceParams& p,
                                  const Rational& t_bound,
                                  const Trajectory& t) {
  if (!(t_bound > 1) || !(p.mu < p.epsilon) || !(p.epsilon < t_bound * p.mu)) {
    return {Verdict::kNotApplicable, -1};
  }
  const std::int64_t n = first_negative_after_positive(t);
  if (n < 0) return {Verdict::kNotApplicable, -1};
  const std::int64_t s = s_choice(t_bound);
  const std::int64_t len = static_cast<std::int64_t>(t.values.size());
  for (std::int64_t i = n; i < len; ++i) {
    if (t.values[i].sign() >= 0) continue;
    if (i + s + 2 >= len) break;  // not enough trajectory left to certify
    bool found = false;
    for (std::int64_t k = i + 1; k <= i + s + 1; ++k) {
      if (t.values[k].sign() > 0 && t.values[k + 1].sign() > 0) {
        found = true;
        break;
      }
    }
    if (!found) return {Verdict::kFail, i};
  }
  return {Verdict::kPass, n};
}

std::int64_t s_choice(const Rational& t) {
  if (!(t > 1)) throw std::domain_error("s_choice: t must be > 1");
  BigInt c = rational_ceil(t);
  if (c % 2 != 0) ++c;
  return c.convert_to<std::int64_t>();
}

std::optional<CycleInfo> detect_cycle(const Rational& theta0,
                                      const RecurrenceParams& p,
                                      std::int64_t max_steps) {
  if (max_steps < 1) throw std::domain_error("detect_cycle: max_steps must be >= 1");
  const StepIncrements inc(p);

  // Brent: find the cycle length with power-of-two restarts of the tortoise.
  std::int64_t power = 1;
  std::int64_t lambda = 1;
  Rational tortoise = theta0;
  Rational hare = inc.next(theta0);
  std::int64_t steps = 1;
  while (tortoise != hare) {
    if (power == lambda) {
      tortoise = hare;
      power *= 2;
      lambda = 0;
    }
    hare = inc.next(hare);
    ++lambda;
    if (++steps > max_steps) return std::nullopt;
  }

  // Preperiod: advance one pointer lambda steps, then walk both together.
  tortoise = theta0;
  hare = theta0;
  for (std::int64_t i = 0; i < lambda; ++i) hare = inc.next(hare);
  std::int64_t preperiod = 0;
  while (tortoise != hare) {
    tortoise = inc.next(tortoise);
    hare = inc.next(hare);
    ++preperiod;
  }
  return CycleInfo{lambda, preperiod};
}

void write_trajectory_csv(const Trajectory& t,
                          const std::filesystem::path& path) {
  std::ostringstream out;
  out << "step,theta_num,theta_den,theta_float\n";
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    const Rational& v = t.values[i];
    out << i << ',' << boost::multiprecision::numerator(v).str() << ','
        << boost::multiprecision::denominator(v).str() << ','
        << format_real(rational_to_double(v)) << "\n";
  }
  atomic_write_text(path, out.str());
}

}  // namespace advlin

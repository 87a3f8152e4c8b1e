#pragma once

#include <stdexcept>

namespace advlin {

/// A real value constrained to [0, 1]. Accuracy and error-rate results are
/// returned as Probability so out-of-range values fail loudly at the source.
class Probability {
 public:
  Probability() = default;
  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw std::domain_error("Probability outside [0, 1]");
    }
  }

  double value() const { return value_; }
  double complement() const { return 1.0 - value_; }

 private:
  double value_ = 0.0;
};

/// Error function, absolute error <= 1e-10 over |x| <= 8.
/// Odd by construction; saturates to +-1 for |x| >= 8 (the true value is
/// within 1e-28 of +-1 there). Throws std::domain_error on non-finite input.
double erf(double x);

/// Standard normal CDF, Phi(x) = (1 + erf(x / sqrt(2))) / 2.
Probability phi(double x);

/// Reference erf via adaptive Simpson quadrature of (2/sqrt(pi)) * integral
/// of exp(-t^2) from 0 to x, to absolute tolerance `tol`. Slow; exists as an
/// independent cross-check for erf() and is only called from tests.
double erf_oracle(double x, double tol);

}  // namespace advlin

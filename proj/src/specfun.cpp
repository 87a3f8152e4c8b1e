#include "advlin/specfun.hpp"

#include <cmath>
#include <numbers>

namespace advlin {
namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;  // 1/sqrt(pi)

// Power series erf(x) = (2/sqrt(pi)) e^{-x^2} sum_k x^{2k+1} 2^k / (1*3*...*(2k+1)).
// All terms positive, ratio 2x^2/(2k+3); used for |x| <= 3.
double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int k = 1; k < 200; ++k) {
    term *= 2.0 * x2 / (2.0 * k + 1.0);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return 2.0 * kInvSqrtPi * std::exp(-x2) * sum;
}

// Complementary error function via the classical continued fraction
//   sqrt(pi) e^{x^2} erfc(x) = 1 / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz scheme; used for x > 3.
double erfc_cf(double x) {
  constexpr double kTiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 300; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (d == 0.0) d = kTiny;
    c = x + a / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return kInvSqrtPi * std::exp(-x * x) / f;
}

}  // namespace

double erf(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("erf: non-finite input");
  }
  const double ax = std::abs(x);
  double r;
  if (ax >= 8.0) {
    r = 1.0;
  } else if (ax <= 3.0) {
    r = erf_series(ax);
  } else {
    r = 1.0 - erfc_cf(ax);
  }
  return x < 0.0 ? -r : r;
}

Probability phi(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("phi: non-finite input");
  }
  return Probability(0.5 * (1.0 + erf(x / std::numbers::sqrt2)));
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double (*f)(double), double a, double b, double fa,
                        double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double gauss_kernel(double t) { return std::exp(-t * t); }

}  // namespace

double erf_oracle(double x, double tol) {
  if (!std::isfinite(x)) {
    throw std::domain_error("erf_oracle: non-finite input");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::domain_error("erf_oracle: tolerance must be positive");
  }
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  const double scale = 2.0 * kInvSqrtPi;
  const double quad_tol = tol / scale;
  const double fa = gauss_kernel(0.0);
  const double fb = gauss_kernel(ax);
  const double fm = gauss_kernel(0.5 * ax);
  const double whole = simpson(fa, fm, fb, ax);
  const double integral =
      adaptive_simpson(&gauss_kernel, 0.0, ax, fa, fm, fb, whole, quad_tol, 48);
  const double r = scale * integral;
  return x < 0.0 ? -r : r;
}

}  // namespace advlin

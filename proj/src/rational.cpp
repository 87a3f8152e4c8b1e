#include "advlin/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace advlin {
namespace {

BigInt parse_bigint(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  return BigInt(std::string(text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const std::size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    const BigInt num = parse_bigint(text.substr(0, slash));
    const BigInt den = parse_bigint(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rational(num, den);
  }
  const std::size_t dot = text.find('.');
  if (dot == std::string_view::npos) {
    return Rational(parse_bigint(text));
  }
  // Decimal literal: a.b == (a * 10^k + b) / 10^k with the sign of a.
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.empty()) return Rational(parse_bigint(whole));
  bool negative = false;
  if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
    negative = whole[0] == '-';
    whole.remove_prefix(1);
  }
  BigInt scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  BigInt num = (whole.empty() ? BigInt(0) : parse_bigint(whole)) * scale +
               parse_bigint(frac);
  if (negative) num = -num;
  return Rational(num, scale);
}

std::string rational_to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double rational_to_double(const Rational& r) {
  return r.convert_to<double>();
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) {
    throw std::domain_error("rational_from_double: non-finite input");
  }
  return Rational(v);
}

BigInt rational_ceil(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;  // truncates toward zero
  if (num > 0 && q * den != num) ++q;
  return q;
}

}  // namespace advlin

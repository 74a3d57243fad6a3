#include "pmconv/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace pmconv {

Rat parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    long long num = std::stoll(s.substr(0, slash));
    long long den = std::stoll(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return Rat(num, den);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    long long num = std::stoll(digits);
    long long den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rat(num, den);
  }
  return Rat(std::stoll(s));
}

std::string format_rational(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rat rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("rational_from_double: not finite");
  if (v == 0.0) return Rat(0);
  int exp = 0;
  double m = std::frexp(v, &exp);  // v = m * 2^exp, 0.5 <= |m| < 1
  // 53 mantissa bits make m * 2^53 integral.
  long long num = static_cast<long long>(std::ldexp(m, 53));
  exp -= 53;
  while (num != 0 && (num & 1) == 0 && exp < 0) {
    num >>= 1;
    ++exp;
  }
  if (exp >= 0) {
    if (exp > 10) throw std::overflow_error("rational_from_double: value too large");
    return Rat(num << exp);
  }
  if (exp < -62) throw std::overflow_error("rational_from_double: denominator too large");
  return Rat(num, 1LL << (-exp));
}

}  // namespace pmconv

#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pmconv {

using Rat = boost::rational<long long>;

/// Parses "3", "-3/4", "1.25" or "inf"/"-inf" callers handle separately.
Rat parse_rational(const std::string& s);

/// Canonical text form: "3", "-3/4". Integers drop the denominator.
std::string format_rational(const Rat& r);

/// Exact conversion; every finite double is a dyadic rational.
Rat rational_from_double(double v);

inline long long rat_floor(const Rat& r) {
  long long q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

inline long long rat_ceil(const Rat& r) { return -rat_floor(-r); }

inline Rat rat_abs(const Rat& r) { return r < Rat(0) ? -r : r; }

}  // namespace pmconv

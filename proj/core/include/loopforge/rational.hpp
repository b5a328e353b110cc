#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace loopforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, int exp) {
  if (exp < 0) return 1 / rational_pow(base, -exp);
  Rational out = 1;
  Rational b = base;
  int e = exp;
  while (e > 0) {
    if (e & 1) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

inline BigInt factorial_big(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace loopforge

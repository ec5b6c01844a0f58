#pragma once

#include <numeric>
#include <string>

#include "int128.hpp"

namespace modcount {

/// Exact rational with 128-bit parts, kept in lowest terms with a positive denominator.
struct Rational {
  i128 num = 0;
  i128 den = 1;

  Rational() = default;
  Rational(i128 n, i128 d) : num(n), den(d) {
    if (den == 0) fail(ErrorCode::invalid_argument, "zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const i128 g = gcd128(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den)); }
  std::string str() const { return den == 1 ? to_string(num) : to_string(num) + "/" + to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      const i128 r = a % b;
      a = b;
      b = r;
    }
    return a;
  }
};

}  // namespace modcount

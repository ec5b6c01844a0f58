#pragma once

#include <cstdint>
#include <string>

#include "error.hpp"

namespace modcount {

using i128 = __int128;
using u128 = unsigned __int128;

inline std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  u128 mag = negative ? u128(0) - u128(v) : u128(v);
  std::string digits;
  while (mag != 0) {
    digits.insert(digits.begin(), char('0' + int(mag % 10)));
    mag /= 10;
  }
  if (negative) digits.insert(digits.begin(), '-');
  return digits;
}

inline i128 checked_mul(i128 a, i128 b) {
  i128 out;
  if (__builtin_mul_overflow(a, b, &out)) fail(ErrorCode::overflow, "exact value exceeds 128 bits");
  return out;
}

inline i128 checked_add(i128 a, i128 b) {
  i128 out;
  if (__builtin_add_overflow(a, b, &out)) fail(ErrorCode::overflow, "exact value exceeds 128 bits");
  return out;
}

inline i128 checked_pow(i128 base, unsigned exp) {
  i128 out = 1;
  for (unsigned i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

}  // namespace modcount

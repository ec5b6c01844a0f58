#include "modarith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"
#include "int128.hpp"

namespace modcount {

namespace {

constexpr std::uint64_t kTrialLimit = 1'000'000;

std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  // Deterministic sequence of increments; the first that yields a proper factor wins.
  for (std::uint64_t increment = 1;; ++increment) {
    auto step = [&](std::uint64_t x) { return (mul_mod(x, x, n) + increment) % n; };
    std::uint64_t y = 2, x = 2, g = 1, product = 1, saved = 2;
    std::uint64_t block = 1;
    constexpr std::uint64_t kBatch = 128;
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < block; ++i) y = step(y);
      for (std::uint64_t done = 0; done < block && g == 1; done += kBatch) {
        saved = y;
        const std::uint64_t limit = std::min(kBatch, block - done);
        for (std::uint64_t i = 0; i < limit; ++i) {
          y = step(y);
          product = mul_mod(product, x > y ? x - y : y - x, n);
        }
        g = gcd(product, n);
      }
      block *= 2;
    }
    if (g == n) {
      do {
        saved = step(saved);
        g = gcd(x > saved ? x - saved : saved - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(std::uint64_t n, std::vector<std::uint64_t>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  const std::uint64_t f = pollard_brent(n);
  split(f, primes);
  split(n / f, primes);
}

}  // namespace

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(u128(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1u) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all 64-bit n.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Modulus::Modulus(std::uint64_t q) : q_(q) {
  if (q == 0) fail(ErrorCode::invalid_argument, "modulus must be positive");
  if (q > (std::uint64_t(1) << 63) - 1) fail(ErrorCode::invalid_argument, "modulus must fit in 63 bits");

  std::vector<std::uint64_t> primes;
  std::uint64_t rest = q;
  for (std::uint64_t p = 2; p <= kTrialLimit && p * p <= rest; p += (p == 2 ? 1 : 2)) {
    while (rest % p == 0) {
      primes.push_back(p);
      rest /= p;
    }
  }
  if (rest > 1) split(rest, primes);
  std::sort(primes.begin(), primes.end());

  for (std::uint64_t p : primes) {
    if (!factors_.empty() && factors_.back().prime == p) {
      ++factors_.back().exponent;
    } else {
      factors_.push_back({p, 1});
    }
  }
  for (const auto& [p, e] : factors_) {
    std::uint64_t pk = 1;
    for (unsigned i = 1; i < e; ++i) pk *= p;
    phi_ *= pk * (p - 1);
    d_ *= e + 1;
  }
}

double Modulus::parity_constant(unsigned t) const {
  if (is_odd()) return 1.0;
  return std::pow(2.0, (static_cast<double>(t) + 1.0) / 2.0);
}

Modulus factorize(std::uint64_t q) { return Modulus(q); }

std::uint64_t reduce(std::int64_t n, std::uint64_t q) {
  const i128 r = i128(n) % i128(q);
  return static_cast<std::uint64_t>(r < 0 ? r + i128(q) : r);
}

std::uint64_t to_unit_range(std::int64_t n, std::uint64_t q) {
  const std::uint64_t r = reduce(n, q);
  return r == 0 ? q : r;
}

std::uint64_t mod_inverse(std::int64_t n, std::uint64_t q) {
  if (q == 0) fail(ErrorCode::invalid_argument, "modulus must be positive");
  if (q == 1) return 1;
  const std::uint64_t a = reduce(n, q);
  if (gcd(a, q) != 1) {
    fail(ErrorCode::not_coprime, std::to_string(n) + " is not invertible modulo " + std::to_string(q));
  }
  // Extended Euclid on signed 128-bit values.
  i128 old_r = a, r = q, old_s = 1, s = 0;
  while (r != 0) {
    const i128 quotient = old_r / r;
    const i128 next_r = old_r - quotient * r;
    const i128 next_s = old_s - quotient * s;
    old_r = r;
    r = next_r;
    old_s = s;
    s = next_s;
  }
  i128 inv = old_s % i128(q);
  if (inv <= 0) inv += q;
  return static_cast<std::uint64_t>(inv);
}

std::uint64_t gcd3(std::int64_t a, std::int64_t b, std::uint64_t q) {
  if (q == 0) fail(ErrorCode::invalid_argument, "modulus must be positive");
  return gcd(gcd(reduce(a, q), reduce(b, q)), q);
}

std::vector<std::uint64_t> units(std::uint64_t q) {
  if (q == 0) fail(ErrorCode::invalid_argument, "modulus must be positive");
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= q; ++n) {
    if (gcd(n, q) == 1) out.push_back(n);
  }
  return out;
}

std::vector<std::uint32_t> inverse_table(std::uint64_t q) {
  if (q == 0 || q > 0xFFFFFFFFu) fail(ErrorCode::invalid_argument, "inverse table needs 1 <= q < 2^32");
  std::vector<std::uint32_t> table(q, 0);
  if (q == 1) return table;
  table[1] = 1;
  // Each unit r and its inverse are filled together; non-units stay 0.
  for (std::uint64_t r = 2; r < q; ++r) {
    if (table[r] != 0 || gcd(r, q) != 1) continue;
    const std::uint64_t inv = mod_inverse(static_cast<std::int64_t>(r), q) % q;
    table[r] = static_cast<std::uint32_t>(inv);
    table[inv] = static_cast<std::uint32_t>(r);
  }
  return table;
}

}  // namespace modcount

#pragma once

#include <cstdint>
#include <vector>

namespace modcount {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A modulus q >= 1 with its factorization and the arithmetic functions the
/// moment bounds need. Immutable once built.
class Modulus {
 public:
  explicit Modulus(std::uint64_t q);  // factorizes; throws on q == 0

  std::uint64_t value() const noexcept { return q_; }
  const std::vector<PrimePower>& factors() const noexcept { return factors_; }
  std::uint64_t phi() const noexcept { return phi_; }
  std::uint64_t divisor_count() const noexcept { return d_; }
  unsigned omega() const noexcept { return static_cast<unsigned>(factors_.size()); }
  bool is_odd() const noexcept { return (q_ & 1u) != 0; }

  /// C_q for t variables: 1 when q is odd, 2^((t+1)/2) when q is even.
  double parity_constant(unsigned t) const;

 private:
  std::uint64_t q_;
  std::vector<PrimePower> factors_;
  std::uint64_t phi_ = 1;
  std::uint64_t d_ = 1;
};

Modulus factorize(std::uint64_t q);

// Residues are reported in [1, q] throughout the library.
std::uint64_t reduce(std::int64_t n, std::uint64_t q);
std::uint64_t to_unit_range(std::int64_t n, std::uint64_t q);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// Inverse of n mod q in [1, q]; throws not_coprime when gcd(n, q) > 1.
std::uint64_t mod_inverse(std::int64_t n, std::uint64_t q);

/// gcd(a mod q, b mod q, q), so gcd3(0, 0, q) == q.
std::uint64_t gcd3(std::int64_t a, std::int64_t b, std::uint64_t q);

/// Ascending units in [1, q]; {1} for q == 1.
std::vector<std::uint64_t> units(std::uint64_t q);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
bool is_prime(std::uint64_t n);

/// inverse[r] for r in [0, q): the inverse of r in [0, q) when r is a unit, 0 otherwise.
/// For q == 1 the single entry is 0 (the torus has one point).
std::vector<std::uint32_t> inverse_table(std::uint64_t q);

}  // namespace modcount

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "modarith.hpp"

namespace modcount {

using Complex = std::complex<double>;

enum class ExpSumKind { kloosterman, hyper_kloosterman, ramanujan };

struct ExpSumValue {
  Complex value;
  ExpSumKind kind;
  std::vector<std::int64_t> params;  // (a, b, q) or (k_1..k_t, c, q)
  double bound;                      // Weil or Weinstein bound with constant 1
};

/// cos/sin of 2*pi*r/q for every residue r, so e(x/q) is a table lookup once
/// x has been reduced mod q.
class RootTable {
 public:
  explicit RootTable(std::uint64_t q);
  Complex operator()(std::uint64_t r) const { return roots_[r]; }
  std::uint64_t modulus() const noexcept { return roots_.size(); }

 private:
  std::vector<Complex> roots_;
};

/// S(a, b; q) by direct summation over units.
ExpSumValue kloosterman(std::int64_t a, std::int64_t b, std::uint64_t q);

/// Weil bound gcd3(a,b,q)^(1/2) q^(1/2) d(q); phi(q) when a = b = 0 mod q.
double weil_bound(std::int64_t a, std::int64_t b, const Modulus& q);

/// Ramanujan sum c_q(b) = S(0, b; q).
double ramanujan(std::int64_t b, std::uint64_t q);

/// Kloosterman sums for a fixed modulus; holds the unit list, inverses and roots.
class KloostermanTable {
 public:
  explicit KloostermanTable(std::uint64_t q);
  Complex operator()(std::int64_t a, std::int64_t b) const;
  std::uint64_t modulus() const noexcept { return q_; }

 private:
  std::uint64_t q_;
  std::vector<std::uint32_t> units_;
  std::vector<std::uint32_t> inverses_;
  RootTable roots_;
};

constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

/// Sum over unit tuples (q_1..q_t) with q_1...q_t = c (mod q) of
/// e((k_1 q_1 + ... + k_t q_t)/q). The first t-1 coordinates run
/// lexicographically over units and q_t is solved for.
class HyperKloosterman {
 public:
  HyperKloosterman(std::uint64_t q, std::int64_t c, unsigned t,
                   std::uint64_t budget = kDefaultEnumerationBudget);

  Complex operator()(std::span<const std::int64_t> ks) const;
  /// phi(q)^(t-1): the number of terms in one evaluation.
  std::uint64_t cost() const noexcept { return cost_; }

 private:
  std::uint64_t q_;
  std::uint64_t c_;
  unsigned t_;
  std::uint64_t cost_;
  std::vector<std::uint32_t> units_;
  std::vector<std::uint32_t> inverses_;
  RootTable roots_;
};

ExpSumValue hyper_kloosterman(std::span<const std::int64_t> ks, std::int64_t c, std::uint64_t q,
                              std::uint64_t budget = kDefaultEnumerationBudget);

/// C_q q^((t-1)/2) t^omega(q) prod_{i<t} gcd3(k_i, k_t, q)^(1/2).
double weinstein_bound(std::span<const std::int64_t> ks, const Modulus& q);

/// (sin(pi L k/q) / sin(pi k/q))^2, and L^2 when k = 0 mod q.
double fejer(std::int64_t k, std::uint64_t L, std::uint64_t q);

/// T(L; q) = sum_{k=1}^{q-1} fejer(k, L, q) by direct summation.
double fejer_mass(std::uint64_t L, std::uint64_t q);

/// sum_{k=1}^{q-1} fejer(k, L, q) gcd(k, q).
double fejer_gcd_sum(std::uint64_t L, std::uint64_t q);

/// Sum over units m in the torus window (b, b+L] of e(-k c m^{-1} / q).
Complex incomplete_kloosterman(std::int64_t b, std::uint64_t L, std::int64_t k, std::int64_t c,
                               std::uint64_t q);

/// The same sum rewritten as (1/q) sum_{l=1}^{q} [sum_{m in (b,b+L]} e(lm/q)] S(-l, -kc; q).
Complex complete_incomplete(std::int64_t b, std::uint64_t L, std::int64_t k, std::int64_t c,
                            std::uint64_t q);

}  // namespace modcount

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "config.hpp"
#include "int128.hpp"
#include "modarith.hpp"
#include "rational.hpp"

namespace modcount {

/// The wrapped window (start, start + length] of residues mod q.
struct TorusInterval {
  std::uint64_t start = 0;   // in [0, q)
  std::uint64_t length = 0;  // in [0, q]

  bool contains(std::uint64_t m, std::uint64_t q) const {
    return (m % q + 2 * q - start - 1) % q < length;
  }
};

/// Which expected count is subtracted from a box count.
///   thm1: t = 2, q_2 restricted to units; E = L_1 * #{units in the q_2 window} / q.
///   thm3: every coordinate restricted to units; E = (prod L_i / q^t) * phi(q)^(t-1).
enum class MainTermShape { thm1, thm3 };

struct BoxSpec {
  Modulus modulus;
  unsigned t = 2;
  std::vector<TorusInterval> intervals;
  std::uint64_t c = 1;
  std::vector<bool> coprime_flags;

  static BoxSpec theorem1(std::uint64_t q, std::int64_t c, TorusInterval first, TorusInterval second);
  static BoxSpec theorem3(std::uint64_t q, std::int64_t c, std::span<const TorusInterval> intervals);

  /// Throws unless the box is well formed and its flags match one of the two shapes.
  void validate() const;
  MainTermShape shape() const;
};

/// Number of tuples in the box with q_1...q_t = c (mod q). Any solution
/// consists of units, so the coprime flags never change the count.
std::uint64_t count_solutions(const BoxSpec& box, const Budgets& budgets = {});

Rational main_term(const BoxSpec& box);

enum class MomentMethod { prefix, pairs, spectral, exact_t, spectral_t, kth };

struct MomentReport {
  std::uint64_t q = 1;
  std::uint64_t c = 1;
  unsigned t = 2;
  std::vector<std::uint64_t> lengths;
  unsigned k = 2;
  MomentMethod method = MomentMethod::prefix;
  double moment_value = 0.0;
  /// Exact moment as exact_num / exact_den when the method is exact. For the
  /// t = 2 second moment exact_den is q^2, so exact_num is the integer q^2 S.
  std::optional<i128> exact_num;
  i128 exact_den = 1;
  MainTermShape main_term_kind = MainTermShape::thm1;
  double bound_value = 0.0;
  double ratio = 0.0;
};

/// N(a, b) for every base pair, backed by wrapped 2-D prefix sums over the
/// q x q indicator of points (x, y) with x y = c (mod q).
class SolutionGrid {
 public:
  SolutionGrid(std::uint64_t q, std::int64_t c, const Budgets& budgets = {});

  std::uint64_t modulus() const noexcept { return q_; }
  /// Points with x in (a, a + L1] and y in (b, b + L2].
  std::uint32_t count(std::uint64_t a, std::uint64_t L1, std::uint64_t b, std::uint64_t L2) const;
  /// Units in (b, b + L].
  std::uint32_t units_in(std::uint64_t b, std::uint64_t L) const;

 private:
  std::uint32_t rect(std::uint64_t x0, std::uint64_t x1, std::uint64_t y0, std::uint64_t y1) const;

  std::uint64_t q_;
  std::vector<std::uint32_t> prefix_;        // (q+1) x (q+1), row-major in x
  std::vector<std::uint32_t> unit_prefix_;   // q+1
};

/// #{a mod q : 0 and d both lie in (a, a + L]}.
std::uint64_t pair_window_weight(std::uint64_t d, std::uint64_t L, std::uint64_t q);

/// L1 * L2 * q * d(q)^3.
double theorem1_bound(const Modulus& q, std::uint64_t L1, std::uint64_t L2);
/// C_q^2 t^(2 omega) q^(t-1) L^t d(q)^t [1 + t (L+1)^(t-1) / q].
double theorem3_bound(const Modulus& q, std::uint64_t L, unsigned t);
/// L^k / q^(k/2 - 2).
double higher_moment_envelope(std::uint64_t q, std::uint64_t L, unsigned k);

MomentReport second_moment_prefix(std::uint64_t q, std::int64_t c, std::uint64_t L1, std::uint64_t L2,
                                  const Config& config = {});
MomentReport second_moment_pairs(std::uint64_t q, std::int64_t c, std::uint64_t L1, std::uint64_t L2,
                                 const Config& config = {});
MomentReport second_moment_spectral(std::uint64_t q, std::int64_t c, std::uint64_t L, const Config& config = {});

/// Exact all-coprime second moment over all q^t base tuples.
MomentReport second_moment_exact_t(std::uint64_t q, std::int64_t c, std::uint64_t L, unsigned t,
                                   const Config& config = {});
MomentReport second_moment_spectral_t(std::uint64_t q, std::int64_t c, std::uint64_t L, unsigned t,
                                      const Config& config = {});

MomentReport kth_moment(std::uint64_t q, std::int64_t c, std::uint64_t L, unsigned k, MainTermShape shape,
                        const Config& config = {});

struct BadBoxReport {
  std::uint64_t q = 1;
  std::uint64_t c = 1;
  unsigned t = 2;
  std::uint64_t L = 0;
  std::uint64_t bad_count = 0;
  i128 total = 1;  // q^t
  double fraction = 0.0;
  std::vector<std::vector<std::uint64_t>> sample;  // first bad base tuples in lexicographic order
};

BadBoxReport bad_boxes(std::uint64_t q, std::int64_t c, std::uint64_t L, unsigned t, const Config& config = {});

/// moment_value over the matching theorem's right-hand side with constant 1
/// (or over the higher-moment envelope when k != 2). Zero when the bound is zero.
double theorem_ratio(const MomentReport& report);

}  // namespace modcount

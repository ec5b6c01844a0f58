#include "verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "expsums.hpp"
#include "modarith.hpp"
#include "moments.hpp"
#include "parallel.hpp"

namespace modcount {

namespace {

/// Accumulates one check family; `observe` takes a margin that must be <= 0.
class Tally {
 public:
  explicit Tally(std::string name) { result_.name = std::move(name); result_.worst_margin = -INFINITY; }

  void observe(double margin) {
    ++result_.cases;
    if (!(margin <= 0.0)) ++result_.violations;
    if (std::isnan(margin) || margin > result_.worst_margin) result_.worst_margin = margin;
  }
  void merge(const Tally& other) {
    result_.cases += other.result_.cases;
    result_.violations += other.result_.violations;
    if (std::isnan(other.result_.worst_margin) || other.result_.worst_margin > result_.worst_margin) {
      result_.worst_margin = other.result_.worst_margin;
    }
  }
  CheckResult result() const {
    CheckResult r = result_;
    if (r.cases == 0) r.worst_margin = 0.0;
    return r;
  }

 private:
  CheckResult result_;
};

/// Runs body(q, tally) for each q in [lo, hi] in parallel and merges in q order.
CheckResult sweep(const std::string& name, std::uint64_t lo, std::uint64_t hi, const Config& config,
                  const std::function<void(std::uint64_t, Tally&)>& body) {
  Tally total(name);
  if (hi < lo) return total.result();
  std::vector<Tally> parts(hi - lo + 1, Tally(name));
  parallel_for(parts.size(), config.threads, [&](std::size_t i) { body(lo + i, parts[i]); });
  for (const auto& part : parts) total.merge(part);
  return total.result();
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::vector<std::uint64_t> sample_units(std::uint64_t q) {
  if (q <= 2) return {1};
  const auto all = units(q);
  std::vector<std::uint64_t> out = {1, all[all.size() / 2], q - 1};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> sample_lengths(std::uint64_t q) {
  std::vector<std::uint64_t> out = {1, isqrt(q), q / 2, q - 1, q};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<CheckResult> run_verification(std::uint64_t max_q, const Config& config) {
  std::vector<CheckResult> results;
  const Config serial{1, config.budgets};
  auto cap = [&](std::uint64_t limit) { return std::min(max_q, limit); };

  results.push_back(sweep("weil_bound", 1, cap(200), config, [](std::uint64_t q, Tally& tally) {
    const Modulus modulus(q);
    const KloostermanTable table(q);
    for (std::uint64_t a = 0; a < q; ++a) {
      for (std::uint64_t b = 0; b < q; ++b) {
        if (a == 0 && b == 0) continue;
        const auto sa = static_cast<std::int64_t>(a), sb = static_cast<std::int64_t>(b);
        tally.observe(std::abs(table(sa, sb)) - weil_bound(sa, sb, modulus) - 1e-6);
      }
    }
  }));

  results.push_back(sweep("kloosterman_real", 1, cap(200), config, [](std::uint64_t q, Tally& tally) {
    const KloostermanTable table(q);
    const double tol = 1e-9 * std::max<double>(1.0, static_cast<double>(Modulus(q).phi()));
    for (std::uint64_t a = 0; a < q; ++a) {
      for (std::uint64_t b = 0; b < q; ++b) {
        tally.observe(std::abs(table(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)).imag()) - tol);
      }
    }
  }));

  results.push_back(sweep("kloosterman_symmetry", 1, cap(100), config, [](std::uint64_t q, Tally& tally) {
    const KloostermanTable table(q);
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(q); ++a) {
      for (std::int64_t b = a + 1; b < static_cast<std::int64_t>(q); ++b) {
        tally.observe(std::abs(table(a, b) - table(b, a)) - 1e-9);
      }
    }
  }));

  results.push_back(sweep("weinstein_bound_t3", 1, cap(40), config, [&](std::uint64_t q, Tally& tally) {
    if (q % 2 == 0 && q > 30) return;
    const Modulus modulus(q);
    const HyperKloosterman sum(q, 1, 3, config.budgets.enumeration);
    std::mt19937_64 engine(q);
    for (int sample = 0; sample < 256; ++sample) {
      const std::array<std::int64_t, 3> ks = {static_cast<std::int64_t>(engine() % q),
                                              static_cast<std::int64_t>(engine() % q),
                                              static_cast<std::int64_t>(engine() % q)};
      tally.observe(std::abs(sum(ks)) - weinstein_bound(ks, modulus) - 1e-6);
    }
  }));

  results.push_back(sweep("hyper_kloosterman_collapse", 1, cap(60), config, [&](std::uint64_t q, Tally& tally) {
    const KloostermanTable table(q);
    for (std::uint64_t c : sample_units(q)) {
      const HyperKloosterman sum(q, static_cast<std::int64_t>(c), 2, config.budgets.enumeration);
      for (std::int64_t k1 = 0; k1 < static_cast<std::int64_t>(q); ++k1) {
        for (std::int64_t k2 = 0; k2 < static_cast<std::int64_t>(q); ++k2) {
          const std::array<std::int64_t, 2> ks = {k1, k2};
          const auto kc = static_cast<std::int64_t>(mul_mod(static_cast<std::uint64_t>(k2), c, q));
          tally.observe(std::abs(sum(ks) - table(k1, kc)) - 1e-9);
        }
      }
    }
  }));

  results.push_back(sweep("fejer_mass", 1, cap(200), config, [](std::uint64_t q, Tally& tally) {
    for (std::uint64_t L = 0; L <= q; ++L) {
      const double exact = static_cast<double>(q * L) - static_cast<double>(L * L);
      const double tol = 1e-6 * static_cast<double>(q) * static_cast<double>(std::max<std::uint64_t>(L, 1));
      tally.observe(std::abs(fejer_mass(L, q) - exact) - tol);
    }
  }));

  results.push_back(sweep("fejer_gcd_bound", 1, cap(200), config, [](std::uint64_t q, Tally& tally) {
    const double d = static_cast<double>(Modulus(q).divisor_count());
    for (std::uint64_t L = 0; L <= q; ++L) {
      tally.observe(fejer_gcd_sum(L, q) - static_cast<double>(q * L) * d - 1e-6);
    }
  }));

  results.push_back(sweep("fejer_reflection", 2, cap(200), config, [](std::uint64_t q, Tally& tally) {
    for (std::uint64_t L = 0; L <= q; ++L) {
      for (std::uint64_t k = 1; k < q; ++k) {
        const double f = fejer(static_cast<std::int64_t>(k), L, q);
        const double g = fejer(static_cast<std::int64_t>(q - k), L, q);
        tally.observe(std::max(std::abs(f - g) - 1e-9 * std::max(1.0, f), -f));
      }
    }
  }));

  results.push_back(sweep("completion_identity", 1, cap(50), config, [](std::uint64_t q, Tally& tally) {
    const std::vector<std::uint64_t> lengths = {0, 1, isqrt(q), q / 2, q};
    const std::vector<std::int64_t> ks = {1, 2, static_cast<std::int64_t>(q) - 1};
    std::vector<std::int64_t> cs = {1, static_cast<std::int64_t>(q) - 1};
    if (q <= 2) cs = {1};
    for (std::int64_t c : cs) {
      for (std::int64_t k : ks) {
        for (std::uint64_t L : lengths) {
          for (std::int64_t b = 0; b < static_cast<std::int64_t>(q); ++b) {
            const Complex direct = incomplete_kloosterman(b, L, k, c, q);
            const Complex completed = complete_incomplete(b, L, k, c, q);
            tally.observe(std::abs(direct - completed) - 1e-6 * static_cast<double>(q));
          }
        }
      }
    }
  }));

  results.push_back(sweep("spectral_vs_prefix", 3, cap(50), config, [&](std::uint64_t q, Tally& tally) {
    for (std::uint64_t c : sample_units(q)) {
      for (std::uint64_t L : sample_lengths(q)) {
        const auto exact = second_moment_prefix(q, static_cast<std::int64_t>(c), L, L, serial);
        const auto spectral = second_moment_spectral(q, static_cast<std::int64_t>(c), L, serial);
        const double tol = std::max(1e-6 * exact.moment_value, 1e-6 * static_cast<double>(q * L * L));
        tally.observe(std::abs(spectral.moment_value - exact.moment_value) - tol);
      }
    }
  }));

  results.push_back(sweep("theorem1_envelope", 3, cap(50), config, [&](std::uint64_t q, Tally& tally) {
    for (std::uint64_t c : sample_units(q)) {
      for (std::uint64_t L : sample_lengths(q)) {
        const auto exact = second_moment_prefix(q, static_cast<std::int64_t>(c), L, L, serial);
        tally.observe(theorem_ratio(exact) - 2.0);
      }
    }
  }));

  results.push_back(sweep("prefix_vs_pairs", 1, cap(120), config, [&](std::uint64_t q, Tally& tally) {
    for (std::uint64_t c : sample_units(q)) {
      for (std::uint64_t L : sample_lengths(q)) {
        const auto prefix = second_moment_prefix(q, static_cast<std::int64_t>(c), L, L, serial);
        const auto pairs = second_moment_pairs(q, static_cast<std::int64_t>(c), L, L, serial);
        tally.observe(*prefix.exact_num == *pairs.exact_num ? -1.0 : 1.0);
      }
    }
  }));

  results.push_back(sweep("mass_identity", 1, cap(300), config, [&](std::uint64_t q, Tally& tally) {
    const SolutionGrid grid(q, 1, config.budgets);
    const std::uint64_t phi = Modulus(q).phi();
    const std::uint64_t root = isqrt(q);
    for (std::uint64_t L : {std::uint64_t{1}, root, q}) {
      std::uint64_t total = 0;
      for (std::uint64_t a = 0; a < q; ++a) {
        for (std::uint64_t b = 0; b < q; ++b) total += grid.count(a, L, b, L);
      }
      tally.observe(total == L * L * phi ? -1.0 : 1.0);
    }
  }));

  results.push_back(sweep("spectral_t3_identity", 5, cap(15), config, [&](std::uint64_t q, Tally& tally) {
    if (q % 2 == 0) return;
    for (std::int64_t c : {std::int64_t{1}, static_cast<std::int64_t>(q) - 1}) {
      for (std::uint64_t L : {std::uint64_t{1}, std::uint64_t{2}, q / 2, q}) {
        const auto exact = second_moment_exact_t(q, c, L, 3, serial);
        const auto spectral = second_moment_spectral_t(q, c, L, 3, serial);
        const double tol = std::max(1e-6 * exact.moment_value, 1e-6 * double(q * q) * double(L * L * L));
        tally.observe(std::abs(spectral.moment_value - exact.moment_value) - tol);
      }
    }
  }));

  return results;
}

}  // namespace modcount

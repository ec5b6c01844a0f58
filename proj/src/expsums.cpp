#include "expsums.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace modcount {

namespace {

std::vector<std::uint32_t> unit_residues(std::uint64_t q) {
  // Residues in [0, q): q == 1 has the single unit 0.
  std::vector<std::uint32_t> out;
  if (q == 1) {
    out.push_back(0);
    return out;
  }
  for (std::uint64_t n = 1; n < q; ++n) {
    if (gcd(n, q) == 1) out.push_back(static_cast<std::uint32_t>(n));
  }
  return out;
}

void require_window(std::uint64_t L, std::uint64_t q) {
  require(q >= 1, "modulus must be positive");
  require(L <= q, "window length must lie in [0, q]");
}

void require_coprime(std::int64_t c, std::uint64_t q) {
  if (gcd(reduce(c, q), q) != 1) {
    fail(ErrorCode::not_coprime, "c must be coprime to q (c=" + std::to_string(c) + ", q=" + std::to_string(q) + ")");
  }
}

}  // namespace

RootTable::RootTable(std::uint64_t q) {
  require(q >= 1 && q <= 0xFFFFFFFFu, "root table needs 1 <= q < 2^32");
  roots_.resize(q);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(q);
  for (std::uint64_t r = 0; r < q; ++r) {
    const double angle = step * static_cast<double>(r);
    roots_[r] = {std::cos(angle), std::sin(angle)};
  }
}

KloostermanTable::KloostermanTable(std::uint64_t q)
    : q_(q), units_(unit_residues(q)), inverses_(inverse_table(q)), roots_(q) {}

Complex KloostermanTable::operator()(std::int64_t a, std::int64_t b) const {
  const std::uint64_t ar = reduce(a, q_), br = reduce(b, q_);
  Complex sum = 0.0;
  for (std::uint32_t n : units_) {
    const std::uint64_t phase = (mul_mod(ar, n, q_) + mul_mod(br, inverses_[n], q_)) % q_;
    sum += roots_(phase);
  }
  return sum;
}

double weil_bound(std::int64_t a, std::int64_t b, const Modulus& q) {
  const std::uint64_t m = q.value();
  if (reduce(a, m) == 0 && reduce(b, m) == 0) return static_cast<double>(q.phi());
  return std::sqrt(static_cast<double>(gcd3(a, b, m))) * std::sqrt(static_cast<double>(m)) *
         static_cast<double>(q.divisor_count());
}

ExpSumValue kloosterman(std::int64_t a, std::int64_t b, std::uint64_t q) {
  const Modulus modulus(q);
  const KloostermanTable table(q);
  return {table(a, b), ExpSumKind::kloosterman, {a, b, static_cast<std::int64_t>(q)}, weil_bound(a, b, modulus)};
}

double ramanujan(std::int64_t b, std::uint64_t q) { return KloostermanTable(q)(0, b).real(); }

HyperKloosterman::HyperKloosterman(std::uint64_t q, std::int64_t c, unsigned t, std::uint64_t budget)
    : q_(q), c_(0), t_(t), cost_(1), roots_(q) {
  require(t >= 2, "hyper-Kloosterman sums need t >= 2");
  require_coprime(c, q);
  c_ = reduce(c, q);
  units_ = unit_residues(q);
  for (unsigned i = 0; i + 1 < t; ++i) {
    if (cost_ > budget / units_.size()) {
      fail(ErrorCode::budget_exceeded, "hyper-Kloosterman enumeration phi(q)^(t-1) exceeds budget " +
                                           std::to_string(budget));
    }
    cost_ *= units_.size();
  }
  inverses_ = inverse_table(q);
}

Complex HyperKloosterman::operator()(std::span<const std::int64_t> ks) const {
  require(ks.size() == t_, "frequency tuple has the wrong length");
  std::vector<std::uint64_t> freq(t_);
  for (unsigned i = 0; i < t_; ++i) freq[i] = reduce(ks[i], q_);

  // Odometer over the first t-1 coordinates; level i keeps the running
  // product and phase of coordinates 0..i.
  const unsigned depth = t_ - 1;
  const std::size_t count = units_.size();
  std::vector<std::size_t> index(depth, 0);
  std::vector<std::uint64_t> product(depth), phase(depth);
  auto refresh_from = [&](unsigned level) {
    for (unsigned i = level; i < depth; ++i) {
      const std::uint64_t u = units_[index[i]];
      const std::uint64_t prev_product = i == 0 ? 1 % q_ : product[i - 1];
      const std::uint64_t prev_phase = i == 0 ? 0 : phase[i - 1];
      product[i] = mul_mod(prev_product, u, q_);
      phase[i] = (prev_phase + mul_mod(freq[i], u, q_)) % q_;
    }
  };
  refresh_from(0);

  Complex sum = 0.0;
  const std::uint64_t last_freq = freq[depth];
  for (;;) {
    const std::uint64_t last = mul_mod(c_, inverses_[product[depth - 1]], q_);
    sum += roots_((phase[depth - 1] + mul_mod(last_freq, last, q_)) % q_);

    int level = static_cast<int>(depth) - 1;
    while (level >= 0 && ++index[level] == count) {
      index[level] = 0;
      --level;
    }
    if (level < 0) break;
    refresh_from(static_cast<unsigned>(level));
  }
  return sum;
}

double weinstein_bound(std::span<const std::int64_t> ks, const Modulus& q) {
  const unsigned t = static_cast<unsigned>(ks.size());
  require(t >= 2, "hyper-Kloosterman sums need t >= 2");
  const double m = static_cast<double>(q.value());
  double bound = q.parity_constant(t) * std::pow(m, (t - 1) / 2.0) * std::pow(static_cast<double>(t), q.omega());
  for (unsigned i = 0; i + 1 < t; ++i) {
    bound *= std::sqrt(static_cast<double>(gcd3(ks[i], ks[t - 1], q.value())));
  }
  return bound;
}

ExpSumValue hyper_kloosterman(std::span<const std::int64_t> ks, std::int64_t c, std::uint64_t q,
                              std::uint64_t budget) {
  const Modulus modulus(q);
  const HyperKloosterman sum(q, c, static_cast<unsigned>(ks.size()), budget);
  std::vector<std::int64_t> params(ks.begin(), ks.end());
  params.push_back(c);
  params.push_back(static_cast<std::int64_t>(q));
  return {sum(ks), ExpSumKind::hyper_kloosterman, std::move(params), weinstein_bound(ks, modulus)};
}

double fejer(std::int64_t k, std::uint64_t L, std::uint64_t q) {
  require_window(L, q);
  const std::uint64_t kr = reduce(k, q);
  if (kr == 0) return static_cast<double>(L) * static_cast<double>(L);
  // sin^2 has period pi, so both arguments may be reduced mod q first.
  const std::uint64_t lk = mul_mod(L % q, kr, q);
  const double num = std::sin(std::numbers::pi * static_cast<double>(lk) / static_cast<double>(q));
  const double den = std::sin(std::numbers::pi * static_cast<double>(kr) / static_cast<double>(q));
  const double ratio = num / den;
  return ratio * ratio;
}

double fejer_mass(std::uint64_t L, std::uint64_t q) {
  require_window(L, q);
  double sum = 0.0;
  for (std::uint64_t k = 1; k < q; ++k) sum += fejer(static_cast<std::int64_t>(k), L, q);
  return sum;
}

double fejer_gcd_sum(std::uint64_t L, std::uint64_t q) {
  require_window(L, q);
  double sum = 0.0;
  for (std::uint64_t k = 1; k < q; ++k) {
    sum += fejer(static_cast<std::int64_t>(k), L, q) * static_cast<double>(gcd(k, q));
  }
  return sum;
}

Complex incomplete_kloosterman(std::int64_t b, std::uint64_t L, std::int64_t k, std::int64_t c,
                               std::uint64_t q) {
  require_window(L, q);
  require_coprime(c, q);
  const RootTable roots(q);
  const std::uint64_t start = reduce(b, q);
  const std::uint64_t freq = (q - mul_mod(reduce(k, q), reduce(c, q), q)) % q;
  Complex sum = 0.0;
  for (std::uint64_t j = 1; j <= L; ++j) {
    const std::uint64_t m = (start + j) % q;
    if (gcd(m, q) != 1) continue;
    const std::uint64_t inv = q == 1 ? 0 : mod_inverse(static_cast<std::int64_t>(m), q) % q;
    sum += roots(mul_mod(freq, inv, q));
  }
  return sum;
}

Complex complete_incomplete(std::int64_t b, std::uint64_t L, std::int64_t k, std::int64_t c,
                            std::uint64_t q) {
  require_window(L, q);
  require_coprime(c, q);
  const RootTable roots(q);
  const KloostermanTable kloos(q);
  const std::uint64_t start = reduce(b, q);
  const std::int64_t kc = -static_cast<std::int64_t>(mul_mod(reduce(k, q), reduce(c, q), q));
  Complex sum = 0.0;
  for (std::uint64_t l = 1; l <= q; ++l) {
    Complex window = 0.0;
    for (std::uint64_t j = 1; j <= L; ++j) window += roots(mul_mod(l % q, (start + j) % q, q));
    sum += window * kloos(-static_cast<std::int64_t>(l), kc);
  }
  return sum / static_cast<double>(q);
}

}  // namespace modcount

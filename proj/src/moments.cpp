#include "moments.hpp"

#include <array>
#include <cmath>
#include <string>

#include "error.hpp"
#include "expsums.hpp"
#include "parallel.hpp"

namespace modcount {

namespace {

struct Range {
  std::uint64_t lo, hi;  // [lo, hi)
};

/// The residues (a, a + L] as at most two half-open index ranges in [0, q).
std::array<Range, 2> wrapped_ranges(std::uint64_t a, std::uint64_t L, std::uint64_t q, int& parts) {
  if (L == 0) {
    parts = 0;
    return {};
  }
  if (L >= q) {
    parts = 1;
    return {Range{0, q}, Range{}};
  }
  const std::uint64_t lo = (a + 1) % q;
  const std::uint64_t hi = lo + L;
  if (hi <= q) {
    parts = 1;
    return {Range{lo, hi}, Range{}};
  }
  parts = 2;
  return {Range{lo, q}, Range{0, hi - q}};
}

void check_modulus_and_c(std::uint64_t q, std::int64_t c) {
  require(q >= 1, "modulus must be positive");
  if (gcd(reduce(c, q), q) != 1) fail(ErrorCode::not_coprime, "c must be coprime to q");
}

void check_length(std::uint64_t L, std::uint64_t q) { require(L <= q, "window length must lie in [0, q]"); }

std::uint64_t checked_budget_product(std::uint64_t a, std::uint64_t b, std::uint64_t limit, const char* what) {
  if (a != 0 && b > limit / a) {
    fail(ErrorCode::budget_exceeded, std::string(what) + " exceeds budget " + std::to_string(limit));
  }
  return a * b;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exp; ++i) out *= base;
  return out;
}

std::vector<std::uint32_t> units_in_window(std::uint64_t a, std::uint64_t L, std::uint64_t q) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t j = 1; j <= L; ++j) {
    const std::uint64_t m = (a + j) % q;
    if (gcd(m, q) == 1) out.push_back(static_cast<std::uint32_t>(m));
  }
  return out;
}

/// Calls visit(product) for every tuple drawn from lists[0] x ... x lists[n-1],
/// where product is the residue of the tuple's product mod q.
template <class Visit>
void for_each_product(const std::vector<std::vector<std::uint32_t>>& lists, std::uint64_t q, Visit&& visit) {
  const std::size_t depth = lists.size();
  for (const auto& list : lists) {
    if (list.empty()) return;
  }
  std::vector<std::size_t> index(depth, 0);
  std::vector<std::uint64_t> product(depth + 1, 1 % q);
  for (std::size_t i = 0; i < depth; ++i) product[i + 1] = mul_mod(product[i], lists[i][0], q);
  for (;;) {
    visit(product[depth]);
    std::size_t level = depth;
    while (level > 0) {
      --level;
      if (++index[level] < lists[level].size()) break;
      index[level] = 0;
      if (level == 0) return;
    }
    for (std::size_t i = level; i < depth; ++i) product[i + 1] = mul_mod(product[i], lists[i][index[i]], q);
  }
}

/// All-coprime counts for every base tuple (a_1..a_t) with equal side L, in
/// lexicographic order.
std::vector<std::uint32_t> all_tuple_counts(std::uint64_t q, std::uint64_t c, std::uint64_t L, unsigned t,
                                            const Config& config) {
  const std::uint64_t heads = ipow(q, t - 1);
  checked_budget_product(heads, q, config.budgets.grid_cells, "q^t base tuples");
  const std::uint64_t per_head = ipow(std::min<std::uint64_t>(L, q), t - 1) + q;
  checked_budget_product(heads, per_head, config.budgets.enumeration, "base-tuple scan");

  const auto inverses = inverse_table(q);
  std::vector<std::vector<std::uint32_t>> window_units(q);
  for (std::uint64_t a = 0; a < q; ++a) window_units[a] = units_in_window(a, L, q);

  std::vector<std::uint32_t> counts(heads * q);
  parallel_for(heads, config.threads, [&](std::size_t head) {
    std::vector<std::vector<std::uint32_t>> lists(t - 1);
    std::size_t rest = head;
    for (unsigned i = t - 1; i-- > 0;) {
      lists[i] = window_units[rest % q];
      rest /= q;
    }
    std::vector<std::uint32_t> hist(q, 0);
    for_each_product(lists, q, [&](std::uint64_t product) { ++hist[mul_mod(c, inverses[product], q)]; });
    // Cyclic window sums of the histogram give the count for every a_t.
    std::vector<std::uint32_t> prefix(q + 1, 0);
    for (std::uint64_t m = 0; m < q; ++m) prefix[m + 1] = prefix[m] + hist[m];
    std::uint32_t* out = counts.data() + head * q;
    for (std::uint64_t a = 0; a < q; ++a) {
      int parts = 0;
      const auto ranges = wrapped_ranges(a, L, q, parts);
      std::uint32_t n = 0;
      for (int p = 0; p < parts; ++p) n += prefix[ranges[p].hi] - prefix[ranges[p].lo];
      out[a] = n;
    }
  });
  return counts;
}

MomentReport t2_report(std::uint64_t q, std::int64_t c, std::uint64_t L1, std::uint64_t L2, MomentMethod method) {
  MomentReport r;
  r.q = q;
  r.c = reduce(c, q);
  r.t = 2;
  r.lengths = {L1, L2};
  r.k = 2;
  r.method = method;
  r.main_term_kind = MainTermShape::thm1;
  r.bound_value = theorem1_bound(Modulus(q), L1, L2);
  return r;
}

void finish(MomentReport& r) { r.ratio = theorem_ratio(r); }

void set_exact(MomentReport& r, i128 num, i128 den) {
  r.exact_num = num;
  r.exact_den = den;
  r.moment_value = static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

}  // namespace

BoxSpec BoxSpec::theorem1(std::uint64_t q, std::int64_t c, TorusInterval first, TorusInterval second) {
  BoxSpec box{Modulus(q), 2, {first, second}, reduce(c, q), {false, true}};
  for (auto& iv : box.intervals) iv.start %= q;
  box.validate();
  return box;
}

BoxSpec BoxSpec::theorem3(std::uint64_t q, std::int64_t c, std::span<const TorusInterval> intervals) {
  const unsigned t = static_cast<unsigned>(intervals.size());
  BoxSpec box{Modulus(q), t, {intervals.begin(), intervals.end()}, reduce(c, q), std::vector<bool>(t, true)};
  for (auto& iv : box.intervals) iv.start %= q;
  box.validate();
  return box;
}

void BoxSpec::validate() const {
  const std::uint64_t q = modulus.value();
  require(t >= 2, "a box needs t >= 2 coordinates");
  require(intervals.size() == t, "a box needs exactly t intervals");
  require(coprime_flags.size() == t, "a box needs exactly t coprime flags");
  for (const auto& iv : intervals) {
    require(iv.start < q, "interval start must lie in [0, q)");
    check_length(iv.length, q);
  }
  check_modulus_and_c(q, static_cast<std::int64_t>(c));
  (void)shape();
}

MainTermShape BoxSpec::shape() const {
  if (t == 2 && !coprime_flags[0] && coprime_flags[1]) return MainTermShape::thm1;
  for (bool flag : coprime_flags) {
    if (!flag) fail(ErrorCode::invalid_argument, "coprime flags must be [false, true] (t = 2) or all true");
  }
  return MainTermShape::thm3;
}

std::uint64_t count_solutions(const BoxSpec& box, const Budgets& budgets) {
  box.validate();
  const std::uint64_t q = box.modulus.value();
  std::vector<std::vector<std::uint32_t>> lists;
  std::uint64_t cost = 1;
  for (unsigned i = 0; i + 1 < box.t; ++i) {
    lists.push_back(units_in_window(box.intervals[i].start, box.intervals[i].length, q));
    cost = checked_budget_product(cost, std::max<std::uint64_t>(lists.back().size(), 1), budgets.enumeration,
                                  "box enumeration");
  }
  const auto inverses = inverse_table(q);
  const TorusInterval& last = box.intervals.back();
  std::uint64_t count = 0;
  for_each_product(lists, q, [&](std::uint64_t product) {
    if (last.contains(mul_mod(box.c, inverses[product], q), q)) ++count;
  });
  return count;
}

Rational main_term(const BoxSpec& box) {
  box.validate();
  const std::uint64_t q = box.modulus.value();
  if (box.shape() == MainTermShape::thm1) {
    const auto& second = box.intervals[1];
    const i128 units = static_cast<i128>(units_in_window(second.start, second.length, q).size());
    return Rational(i128(box.intervals[0].length) * units, i128(q));
  }
  i128 num = checked_pow(i128(box.modulus.phi()), box.t - 1);
  for (const auto& iv : box.intervals) num = checked_mul(num, i128(iv.length));
  return Rational(num, checked_pow(i128(q), box.t));
}

SolutionGrid::SolutionGrid(std::uint64_t q, std::int64_t c, const Budgets& budgets) : q_(q) {
  check_modulus_and_c(q, c);
  checked_budget_product(q, q, budgets.grid_cells, "solution grid q^2");
  const std::uint64_t cr = reduce(c, q);
  const auto inverses = inverse_table(q);
  const std::uint64_t side = q + 1;
  prefix_.assign(side * side, 0);
  unit_prefix_.assign(side, 0);
  // Row y of the indicator holds the single x = c y^{-1} when y is a unit.
  std::vector<std::int64_t> x_of_y(q, -1);
  for (std::uint64_t y = 0; y < q; ++y) {
    const bool unit = gcd(y, q) == 1;
    unit_prefix_[y + 1] = unit_prefix_[y] + (unit ? 1 : 0);
    if (unit) x_of_y[y] = static_cast<std::int64_t>(mul_mod(cr, inverses[y], q));
  }
  for (std::uint64_t x = 0; x < q; ++x) {
    for (std::uint64_t y = 0; y < q; ++y) {
      const std::uint32_t cell = x_of_y[y] == static_cast<std::int64_t>(x) ? 1 : 0;
      prefix_[(x + 1) * side + (y + 1)] =
          cell + prefix_[x * side + (y + 1)] + prefix_[(x + 1) * side + y] - prefix_[x * side + y];
    }
  }
}

std::uint32_t SolutionGrid::rect(std::uint64_t x0, std::uint64_t x1, std::uint64_t y0, std::uint64_t y1) const {
  const std::uint64_t side = q_ + 1;
  return prefix_[x1 * side + y1] - prefix_[x0 * side + y1] - prefix_[x1 * side + y0] + prefix_[x0 * side + y0];
}

std::uint32_t SolutionGrid::count(std::uint64_t a, std::uint64_t L1, std::uint64_t b, std::uint64_t L2) const {
  int xs = 0, ys = 0;
  const auto xr = wrapped_ranges(a % q_, L1, q_, xs);
  const auto yr = wrapped_ranges(b % q_, L2, q_, ys);
  std::uint32_t n = 0;
  for (int i = 0; i < xs; ++i) {
    for (int j = 0; j < ys; ++j) n += rect(xr[i].lo, xr[i].hi, yr[j].lo, yr[j].hi);
  }
  return n;
}

std::uint32_t SolutionGrid::units_in(std::uint64_t b, std::uint64_t L) const {
  int parts = 0;
  const auto r = wrapped_ranges(b % q_, L, q_, parts);
  std::uint32_t n = 0;
  for (int i = 0; i < parts; ++i) n += unit_prefix_[r[i].hi] - unit_prefix_[r[i].lo];
  return n;
}

std::uint64_t pair_window_weight(std::uint64_t d, std::uint64_t L, std::uint64_t q) {
  d %= q;
  if (L >= q) return q;
  if (d == 0) return L;
  // Windows reaching from 0 forward to d, plus windows wrapping from d forward to 0.
  const std::uint64_t forward = L > d ? L - d : 0;
  const std::uint64_t backward = L > q - d ? L - (q - d) : 0;
  return forward + backward;
}

double theorem1_bound(const Modulus& q, std::uint64_t L1, std::uint64_t L2) {
  const double d = static_cast<double>(q.divisor_count());
  return static_cast<double>(L1) * static_cast<double>(L2) * static_cast<double>(q.value()) * d * d * d;
}

double theorem3_bound(const Modulus& q, std::uint64_t L, unsigned t) {
  const double m = static_cast<double>(q.value());
  const double Ld = static_cast<double>(L);
  const double cq = q.parity_constant(t);
  return cq * cq * std::pow(static_cast<double>(t), 2.0 * q.omega()) * std::pow(m, t - 1.0) * std::pow(Ld, t) *
         std::pow(static_cast<double>(q.divisor_count()), t) * (1.0 + t * std::pow(Ld + 1.0, t - 1.0) / m);
}

double higher_moment_envelope(std::uint64_t q, std::uint64_t L, unsigned k) {
  return std::pow(static_cast<double>(L), k) / std::pow(static_cast<double>(q), k / 2.0 - 2.0);
}

MomentReport second_moment_prefix(std::uint64_t q, std::int64_t c, std::uint64_t L1, std::uint64_t L2,
                                  const Config& config) {
  check_modulus_and_c(q, c);
  check_length(L1, q);
  check_length(L2, q);
  const SolutionGrid grid(q, c, config.budgets);
  std::vector<std::uint32_t> units(q);
  for (std::uint64_t b = 0; b < q; ++b) units[b] = grid.units_in(b, L2);

  // q^2 S = sum_{a,b} (q N(a,b) - L1 Phi(b))^2, accumulated per row a.
  std::vector<i128> rows(q, 0);
  parallel_for(q, config.threads, [&](std::size_t a) {
    i128 sum = 0;
    for (std::uint64_t b = 0; b < q; ++b) {
      const i128 dev = i128(q) * grid.count(a, L1, b, L2) - i128(L1) * units[b];
      sum += dev * dev;
    }
    rows[a] = sum;
  });
  i128 total = 0;
  for (i128 r : rows) total = checked_add(total, r);

  MomentReport report = t2_report(q, c, L1, L2, MomentMethod::prefix);
  set_exact(report, total, i128(q) * i128(q));
  finish(report);
  return report;
}

MomentReport second_moment_pairs(std::uint64_t q, std::int64_t c, std::uint64_t L1, std::uint64_t L2,
                                 const Config& config) {
  check_modulus_and_c(q, c);
  check_length(L1, q);
  check_length(L2, q);
  const Modulus modulus(q);
  checked_budget_product(modulus.phi(), modulus.phi(), config.budgets.enumeration, "phi(q)^2 point pairs");

  const std::uint64_t cr = reduce(c, q);
  const auto inverses = inverse_table(q);
  std::vector<std::uint64_t> xs, ys;
  for (std::uint64_t y = 0; y < q; ++y) {
    if (gcd(y, q) != 1) continue;
    ys.push_back(y);
    xs.push_back(mul_mod(cr, inverses[y], q));
  }
  std::vector<std::uint64_t> w1(q), w2(q);
  for (std::uint64_t d = 0; d < q; ++d) {
    w1[d] = pair_window_weight(d, L1, q);
    w2[d] = pair_window_weight(d, L2, q);
  }

  // sum_{a,b} N^2 counts ordered point pairs by the boxes holding both;
  // sum_b Phi(b)^2 counts ordered unit pairs by the windows holding both.
  const std::size_t n = ys.size();
  std::vector<i128> square_rows(n, 0), unit_rows(n, 0);
  parallel_for(n, config.threads, [&](std::size_t i) {
    i128 squares = 0, unit_pairs = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t dy = (ys[i] + q - ys[j]) % q;
      squares += i128(w1[(xs[i] + q - xs[j]) % q]) * w2[dy];
      unit_pairs += w2[dy];
    }
    square_rows[i] = squares;
    unit_rows[i] = unit_pairs;
  });
  i128 sum_n2 = 0, sum_phi2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_n2 += square_rows[i];
    sum_phi2 += unit_rows[i];
  }
  // sum_a N(a,b) = L1 Phi(b), so the cross term is twice the square term:
  // q^2 S = q^2 sum N^2 - q L1^2 sum Phi^2.
  const i128 qq = i128(q);
  const i128 total = checked_add(checked_mul(qq * qq, sum_n2), -checked_mul(qq * i128(L1) * i128(L1), sum_phi2));

  MomentReport report = t2_report(q, c, L1, L2, MomentMethod::pairs);
  set_exact(report, total, qq * qq);
  finish(report);
  return report;
}

MomentReport second_moment_spectral(std::uint64_t q, std::int64_t c, std::uint64_t L, const Config& config) {
  check_modulus_and_c(q, c);
  check_length(L, q);
  const Modulus modulus(q);
  checked_budget_product(checked_budget_product(q, q, config.budgets.enumeration, "spectral terms"),
                         std::max<std::uint64_t>(modulus.phi(), 1), config.budgets.enumeration,
                         "spectral Kloosterman evaluations");

  const KloostermanTable kloos(q);
  const std::uint64_t cr = reduce(c, q);
  std::vector<double> kernel(q, 0.0);
  for (std::uint64_t k = 1; k < q; ++k) kernel[k] = fejer(static_cast<std::int64_t>(k), L, q);
  const double L2 = static_cast<double>(L) * static_cast<double>(L);

  std::vector<double> terms(q, 0.0);
  parallel_for(q, config.threads, [&](std::size_t k) {
    if (k == 0 || kernel[k] == 0.0) return;
    const std::int64_t b = -static_cast<std::int64_t>(mul_mod(k, cr, q));
    double inner = L2 * std::norm(kloos(0, b));
    for (std::uint64_t l = 1; l < q; ++l) {
      if (kernel[l] == 0.0) continue;
      inner += std::norm(kloos(-static_cast<std::int64_t>(l), b)) * kernel[l];
    }
    terms[k] = kernel[k] * inner;
  });
  double sum = 0.0;
  for (double term : terms) sum += term;

  MomentReport report = t2_report(q, c, L, L, MomentMethod::spectral);
  report.moment_value = sum / (static_cast<double>(q) * static_cast<double>(q));
  finish(report);
  return report;
}

MomentReport second_moment_exact_t(std::uint64_t q, std::int64_t c, std::uint64_t L, unsigned t,
                                   const Config& config) {
  check_modulus_and_c(q, c);
  check_length(L, q);
  require(t >= 2, "t must be at least 2");
  const Modulus modulus(q);
  const auto counts = all_tuple_counts(q, reduce(c, q), L, t, config);

  // q^{2t} S = sum (q^t N - L^t phi^{t-1})^2.
  const i128 scale = checked_pow(i128(q), t);
  const i128 expected = checked_mul(checked_pow(i128(L), t), checked_pow(i128(modulus.phi()), t - 1));
  i128 total = 0;
  for (std::uint32_t n : counts) {
    const i128 dev = checked_add(checked_mul(scale, i128(n)), -expected);
    total = checked_add(total, checked_mul(dev, dev));
  }

  MomentReport report;
  report.q = q;
  report.c = reduce(c, q);
  report.t = t;
  report.lengths.assign(t, L);
  report.method = MomentMethod::exact_t;
  report.main_term_kind = MainTermShape::thm3;
  report.bound_value = theorem3_bound(modulus, L, t);
  set_exact(report, total, checked_mul(scale, scale));
  finish(report);
  return report;
}

MomentReport second_moment_spectral_t(std::uint64_t q, std::int64_t c, std::uint64_t L, unsigned t,
                                      const Config& config) {
  check_modulus_and_c(q, c);
  check_length(L, q);
  require(t >= 2, "t must be at least 2");
  const Modulus modulus(q);
  const HyperKloosterman hyper(q, c, t, config.budgets.enumeration);
  const std::uint64_t tuples = checked_budget_product(ipow(q, t - 1), q, config.budgets.enumeration, "q^t frequencies");
  checked_budget_product(tuples, hyper.cost(), config.budgets.enumeration, "hyper-Kloosterman evaluations");

  // Index r in [0, q) stands for frequency r + 1, so the last index is k = q.
  std::vector<double> kernel(q);
  for (std::uint64_t r = 0; r < q; ++r) kernel[r] = fejer(static_cast<std::int64_t>(r + 1), L, q);

  std::vector<double> terms(q, 0.0);
  parallel_for(q, config.threads, [&](std::size_t first) {
    if (kernel[first] == 0.0) return;
    std::vector<std::uint64_t> index(t, 0);
    index[0] = first;
    std::vector<std::int64_t> ks(t);
    double sum = 0.0;
    for (;;) {
      bool all_zero_freq = true;
      double weight = 1.0;
      for (unsigned i = 0; i < t; ++i) {
        ks[i] = static_cast<std::int64_t>(index[i] + 1);
        weight *= kernel[index[i]];
        all_zero_freq = all_zero_freq && index[i] + 1 == q;
      }
      if (!all_zero_freq && weight != 0.0) sum += weight * std::norm(hyper(ks));

      unsigned level = t;
      while (level > 1) {
        --level;
        if (++index[level] < q) break;
        index[level] = 0;
        if (level == 1) {
          level = 0;
          break;
        }
      }
      if (level == 0) break;
    }
    terms[first] = sum;
  });
  double total = 0.0;
  for (double term : terms) total += term;

  MomentReport report;
  report.q = q;
  report.c = reduce(c, q);
  report.t = t;
  report.lengths.assign(t, L);
  report.method = MomentMethod::spectral_t;
  report.main_term_kind = MainTermShape::thm3;
  report.bound_value = theorem3_bound(modulus, L, t);
  report.moment_value = total / std::pow(static_cast<double>(q), t);
  finish(report);
  return report;
}

MomentReport kth_moment(std::uint64_t q, std::int64_t c, std::uint64_t L, unsigned k, MainTermShape shape,
                        const Config& config) {
  check_modulus_and_c(q, c);
  check_length(L, q);
  require(k >= 1, "moment order must be positive");
  const Modulus modulus(q);
  const SolutionGrid grid(q, c, config.budgets);
  const i128 qq = i128(q);

  // Deviation of N(a,b) from the main term as num / den with den = q (thm1) or q^2 (thm3).
  std::vector<i128> offset(q);
  i128 scale = qq, den = qq;
  if (shape == MainTermShape::thm1) {
    for (std::uint64_t b = 0; b < q; ++b) offset[b] = i128(L) * grid.units_in(b, L);
  } else {
    scale = qq * qq;
    den = qq * qq;
    for (std::uint64_t b = 0; b < q; ++b) offset[b] = i128(L) * i128(L) * i128(modulus.phi());
  }

  const bool even = k % 2 == 0;
  std::vector<i128> exact_rows(q, 0);
  std::vector<long double> float_rows(q, 0.0L);
  const long double den_ld = static_cast<long double>(den);
  parallel_for(q, config.threads, [&](std::size_t a) {
    i128 exact = 0;
    long double approx = 0.0L;
    for (std::uint64_t b = 0; b < q; ++b) {
      const i128 dev = scale * grid.count(a, L, b, L) - offset[b];
      if (even) {
        exact = checked_add(exact, checked_pow(dev, k));
      } else {
        approx += std::pow(std::fabs(static_cast<long double>(dev) / den_ld), static_cast<long double>(k));
      }
    }
    exact_rows[a] = exact;
    float_rows[a] = approx;
  });

  MomentReport report;
  report.q = q;
  report.c = reduce(c, q);
  report.t = 2;
  report.lengths = {L, L};
  report.k = k;
  report.method = MomentMethod::kth;
  report.main_term_kind = shape;
  if (even) {
    i128 total = 0;
    for (i128 r : exact_rows) total = checked_add(total, r);
    set_exact(report, total, checked_pow(den, k));
  } else {
    long double total = 0.0L;
    for (long double r : float_rows) total += r;
    report.moment_value = static_cast<double>(total);
  }
  if (k == 2) {
    report.bound_value =
        shape == MainTermShape::thm1 ? theorem1_bound(modulus, L, L) : theorem3_bound(modulus, L, 2);
  } else {
    report.bound_value = higher_moment_envelope(q, L, k);
  }
  finish(report);
  return report;
}

BadBoxReport bad_boxes(std::uint64_t q, std::int64_t c, std::uint64_t L, unsigned t, const Config& config) {
  check_modulus_and_c(q, c);
  check_length(L, q);
  require(t >= 2, "t must be at least 2");
  BadBoxReport report;
  report.q = q;
  report.c = reduce(c, q);
  report.t = t;
  report.L = L;
  report.total = checked_pow(i128(q), t);
  const std::size_t cap = config.budgets.sample_cap;

  auto decode = [&](std::uint64_t index) {
    std::vector<std::uint64_t> tuple(t);
    for (unsigned i = t; i-- > 0;) {
      tuple[i] = index % q;
      index /= q;
    }
    return tuple;
  };

  if (t == 2) {
    const SolutionGrid grid(q, c, config.budgets);
    std::vector<std::uint64_t> row_bad(q, 0);
    std::vector<std::vector<std::uint64_t>> row_sample(q);
    parallel_for(q, config.threads, [&](std::size_t a) {
      for (std::uint64_t b = 0; b < q; ++b) {
        if (grid.count(a, L, b, L) != 0) continue;
        ++row_bad[a];
        if (row_sample[a].size() < cap) row_sample[a].push_back(b);
      }
    });
    for (std::uint64_t a = 0; a < q; ++a) {
      report.bad_count += row_bad[a];
      for (std::uint64_t b : row_sample[a]) {
        if (report.sample.size() < cap) report.sample.push_back({a, b});
      }
    }
  } else {
    const auto counts = all_tuple_counts(q, report.c, L, t, config);
    for (std::uint64_t i = 0; i < counts.size(); ++i) {
      if (counts[i] != 0) continue;
      ++report.bad_count;
      if (report.sample.size() < cap) report.sample.push_back(decode(i));
    }
  }
  report.fraction = static_cast<double>(static_cast<long double>(report.bad_count) /
                                        static_cast<long double>(report.total));
  return report;
}

double theorem_ratio(const MomentReport& report) {
  const Modulus modulus(report.q);
  const std::uint64_t L1 = report.lengths.empty() ? 0 : report.lengths[0];
  double bound;
  if (report.k != 2) {
    bound = higher_moment_envelope(report.q, L1, report.k);
  } else if (report.main_term_kind == MainTermShape::thm1) {
    bound = theorem1_bound(modulus, L1, report.lengths.size() > 1 ? report.lengths[1] : L1);
  } else {
    bound = theorem3_bound(modulus, L1, report.t);
  }
  return bound > 0.0 ? report.moment_value / bound : 0.0;
}

}  // namespace modcount

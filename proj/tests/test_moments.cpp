#include "doctest.h"

#include <array>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "moments.hpp"
#include "verify.hpp"

using namespace modcount;

namespace {

bool in_window(std::uint64_t m, std::uint64_t a, std::uint64_t L, std::uint64_t q) { return (m + 2 * q - a - 1) % q < L; }

// q^2 S for the two-variable shape, by direct counting over every base pair.
i128 brute_q2S(std::uint64_t q, std::uint64_t c, std::uint64_t L1, std::uint64_t L2) {
  i128 total = 0;
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      i128 n = 0, units = 0;
      for (std::uint64_t y = 0; y < q; ++y) {
        if (!in_window(y, b, L2, q) || std::gcd(y, q) != 1) continue;
        ++units;
        for (std::uint64_t x = 0; x < q; ++x) n += in_window(x, a, L1, q) && (x * y) % q == c % q;
      }
      const i128 dev = i128(q) * n - i128(L1) * units;
      total += dev * dev;
    }
  }
  return total;
}

std::uint64_t brute_weight(std::uint64_t d, std::uint64_t L, std::uint64_t q) {
  std::uint64_t n = 0;
  for (std::uint64_t a = 0; a < q; ++a) n += in_window(0, a, L, q) && in_window(d, a, L, q);
  return n;
}

Config threads(unsigned n) { return Config{n, {}}; }

}  // namespace

TEST_CASE("torus interval membership") {
  const TorusInterval w{5, 3};
  CHECK(w.contains(6, 7));
  CHECK(w.contains(0, 7));
  CHECK(w.contains(1, 7));
  CHECK_FALSE(w.contains(5, 7));
  CHECK_FALSE(w.contains(2, 7));
  CHECK(TorusInterval{3, 7}.contains(3, 7));
  CHECK_FALSE(TorusInterval{3, 0}.contains(4, 7));
}

TEST_CASE("count_solutions") {
  const auto full = BoxSpec::theorem1(5, 1, {0, 5}, {0, 5});
  CHECK(count_solutions(full) == 4);
  CHECK(count_solutions(BoxSpec::theorem1(7, 1, {0, 3}, {0, 3})) == 1);
  CHECK(count_solutions(BoxSpec::theorem1(7, 1, {0, 0}, {0, 3})) == 0);

  const std::array<TorusInterval, 3> cube = {TorusInterval{0, 2}, TorusInterval{4, 3}, TorusInterval{1, 5}};
  std::uint64_t brute = 0;
  for (std::uint64_t x = 0; x < 7; ++x)
    for (std::uint64_t y = 0; y < 7; ++y)
      for (std::uint64_t z = 0; z < 7; ++z)
        brute += in_window(x, 0, 2, 7) && in_window(y, 4, 3, 7) && in_window(z, 1, 5, 7) && (x * y * z) % 7 == 3;
  CHECK(count_solutions(BoxSpec::theorem3(7, 3, cube)) == brute);
}

TEST_CASE("box validation") {
  CHECK_THROWS_AS(BoxSpec::theorem1(6, 3, {0, 2}, {0, 2}), Error);
  CHECK_THROWS_AS(BoxSpec::theorem1(6, 1, {0, 7}, {0, 2}), Error);
  BoxSpec wide = BoxSpec::theorem1(6, 1, {0, 1}, {0, 2});
  wide.intervals[0].start = 6;
  CHECK_THROWS_AS(wide.validate(), Error);
  BoxSpec odd = BoxSpec::theorem1(7, 1, {0, 2}, {0, 2});
  odd.coprime_flags = {true, false};
  CHECK_THROWS_AS(odd.validate(), Error);
}

TEST_CASE("main_term") {
  CHECK(main_term(BoxSpec::theorem1(5, 1, {0, 5}, {0, 5})) == Rational(4, 1));
  CHECK(main_term(BoxSpec::theorem1(7, 1, {0, 3}, {0, 3})) == Rational(9, 7));
  const std::array<TorusInterval, 3> full = {TorusInterval{0, 12}, TorusInterval{0, 12}, TorusInterval{0, 12}};
  CHECK(main_term(BoxSpec::theorem3(12, 1, full)) == Rational(16, 1));
  CHECK(main_term(BoxSpec::theorem1(12, 1, {0, 4}, {2, 4})).str() == "1/3");
}

TEST_CASE("pair window weight matches brute force") {
  for (std::uint64_t q = 1; q <= 60; ++q) {
    for (std::uint64_t L = 0; L <= q; ++L) {
      for (std::uint64_t d = 0; d < q; ++d) REQUIRE(pair_window_weight(d, L, q) == brute_weight(d, L, q));
    }
  }
}

TEST_CASE("second moment frozen values") {
  auto r = second_moment_prefix(7, 1, 3, 3);
  CHECK(*r.exact_num == 700);
  CHECK(r.exact_den == 49);
  CHECK(r.moment_value == doctest::Approx(100.0 / 7));
  CHECK(r.main_term_kind == MainTermShape::thm1);
  CHECK(r.bound_value == doctest::Approx(9.0 * 7 * 8));
  CHECK(theorem_ratio(r) == doctest::Approx(100.0 / 7 / 504));
  CHECK(r.ratio == doctest::Approx(theorem_ratio(r)));

  CHECK(*second_moment_prefix(12, 5, 4, 4).exact_num == 6912);
  CHECK(second_moment_prefix(12, 5, 4, 4).moment_value == doctest::Approx(48.0));
  CHECK(*second_moment_prefix(7, 1, 0, 3).exact_num == 0);
  CHECK(*second_moment_prefix(10, 3, 2, 5).exact_num == 2240);
  CHECK(*second_moment_pairs(10, 3, 2, 5).exact_num == 2240);
}

TEST_CASE("exact methods agree with brute force") {
  for (std::uint64_t q = 1; q <= 16; ++q) {
    for (std::uint64_t c : sample_units(q)) {
      for (std::uint64_t L1 = 0; L1 <= q; L1 += 1 + q / 5) {
        for (std::uint64_t L2 = 0; L2 <= q; L2 += 1 + q / 4) {
          const i128 expected = brute_q2S(q, c, L1, L2);
          REQUIRE(*second_moment_prefix(q, c, L1, L2).exact_num == expected);
          REQUIRE(*second_moment_pairs(q, c, L1, L2).exact_num == expected);
        }
      }
    }
  }
}

TEST_CASE("spectral second moment") {
  CHECK(second_moment_spectral(7, 1, 3).moment_value == doctest::Approx(100.0 / 7).epsilon(1e-9));
  CHECK(second_moment_spectral(12, 5, 4).moment_value == doctest::Approx(48.0).epsilon(1e-9));
  CHECK(std::abs(second_moment_spectral(11, 2, 11).moment_value) < 1e-9);
  CHECK(second_moment_spectral(1, 1, 1).moment_value == 0.0);
  CHECK(second_moment_spectral(7, 1, 3).method == MomentMethod::spectral);
}

TEST_CASE("full windows and degenerate modulus") {
  for (std::uint64_t q : {1u, 2u, 9u, 30u}) {
    CHECK(*second_moment_prefix(q, 1, q, q).exact_num == 0);
    CHECK(*second_moment_pairs(q, 1, q, q).exact_num == 0);
    CHECK(std::abs(second_moment_spectral(q, 1, q).moment_value) < 1e-9);
    CHECK(kth_moment(q, 1, q, 3, MainTermShape::thm1).moment_value == 0.0);
    CHECK(kth_moment(q, 1, q, 4, MainTermShape::thm3).moment_value == 0.0);
    CHECK(theorem_ratio(second_moment_prefix(q, 1, q, q)) == 0.0);
  }
}

TEST_CASE("three-variable moment") {
  const auto exact = second_moment_exact_t(5, 1, 2, 3);
  CHECK(*exact.exact_num * 125 == i128(8616) * exact.exact_den);
  CHECK(exact.moment_value == doctest::Approx(68.928));
  CHECK(exact.main_term_kind == MainTermShape::thm3);
  CHECK(second_moment_spectral_t(5, 1, 2, 3).moment_value == doctest::Approx(68.928).epsilon(1e-9));
  CHECK(std::abs(second_moment_spectral_t(7, 1, 7, 3).moment_value) < 1e-6);

  // t = 2 all-coprime shape against a brute-force loop.
  const std::uint64_t q = 9;
  const std::int64_t c = 2;
  const std::uint64_t L = 4;
  double brute = 0;
  const double main = double(L * L) / double(q * q) * double(Modulus(q).phi());
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      double n = 0;
      for (std::uint64_t x = 0; x < q; ++x)
        for (std::uint64_t y = 0; y < q; ++y)
          n += in_window(x, a, L, q) && in_window(y, b, L, q) && (x * y) % q == std::uint64_t(c);
      brute += (n - main) * (n - main);
    }
  }
  CHECK(second_moment_exact_t(q, c, L, 2).moment_value == doctest::Approx(brute));
  CHECK(second_moment_spectral_t(q, c, L, 2).moment_value == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("kth moment") {
  const auto k2 = kth_moment(13, 2, 4, 2, MainTermShape::thm1);
  const auto prefix = second_moment_prefix(13, 2, 4, 4);
  CHECK(k2.moment_value == doctest::Approx(prefix.moment_value));
  CHECK(*k2.exact_num * prefix.exact_den == *prefix.exact_num * k2.exact_den);

  const auto k4 = kth_moment(101, 1, 11, 4, MainTermShape::thm1);
  CHECK(std::isfinite(k4.moment_value));
  CHECK(k4.moment_value > 0);
  CHECK(k4.bound_value == doctest::Approx(std::pow(11.0, 4) / std::pow(101.0, 0.0)));
  CHECK(k4.ratio == doctest::Approx(k4.moment_value / k4.bound_value));

  // Odd k against direct floating evaluation.
  const std::uint64_t q = 11, L = 3;
  double brute = 0;
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      double n = 0, units = 0;
      for (std::uint64_t y = 0; y < q; ++y) {
        if (!in_window(y, b, L, q) || y == 0) continue;
        ++units;
        for (std::uint64_t x = 0; x < q; ++x) n += in_window(x, a, L, q) && (x * y) % q == 1;
      }
      brute += std::pow(std::abs(n - double(L) * units / double(q)), 3);
    }
  }
  const auto k3 = kth_moment(q, 1, L, 3, MainTermShape::thm1);
  CHECK_FALSE(k3.exact_num.has_value());
  CHECK(k3.moment_value == doctest::Approx(brute).epsilon(1e-12));
  CHECK_THROWS_AS(kth_moment(11, 1, 3, 0, MainTermShape::thm1), Error);
}

TEST_CASE("mass identity") {
  for (std::uint64_t q = 1; q <= 80; ++q) {
    const SolutionGrid grid(q, 1);
    const std::uint64_t phi = Modulus(q).phi();
    for (std::uint64_t L1 : {std::uint64_t{1}, q / 3, q}) {
      for (std::uint64_t L2 : {std::uint64_t{2} % (q + 1), q}) {
        std::uint64_t total = 0;
        for (std::uint64_t a = 0; a < q; ++a)
          for (std::uint64_t b = 0; b < q; ++b) total += grid.count(a, L1, b, L2);
        REQUIRE(total == L1 * L2 * phi);
      }
    }
  }
}

TEST_CASE("bad boxes") {
  CHECK(bad_boxes(5, 1, 5, 2).bad_count == 0);
  CHECK(bad_boxes(17, 3, 17, 2).bad_count == 0);
  CHECK(bad_boxes(9, 2, 9, 3).bad_count == 0);
  CHECK(bad_boxes(7, 1, 0, 2).bad_count == 49);

  const auto r = bad_boxes(101, 1, 11, 2);
  CHECK(r.total == 101 * 101);
  CHECK(r.fraction == doctest::Approx(double(r.bad_count) / (101.0 * 101.0)));
  CHECK(r.sample.size() == std::min<std::uint64_t>(r.bad_count, 16));
  const SolutionGrid grid(101, 1);
  for (const auto& s : r.sample) CHECK(grid.count(s[0], 11, s[1], 11) == 0);
  for (std::size_t i = 1; i < r.sample.size(); ++i) CHECK(r.sample[i - 1] < r.sample[i]);

  const auto t3 = bad_boxes(11, 1, 3, 3);
  for (const auto& s : t3.sample) {
    const std::array<TorusInterval, 3> box = {TorusInterval{s[0], 3}, TorusInterval{s[1], 3}, TorusInterval{s[2], 3}};
    CHECK(count_solutions(BoxSpec::theorem3(11, 1, box)) == 0);
  }
  std::uint64_t brute = 0;
  for (std::uint64_t a = 0; a < 11; ++a)
    for (std::uint64_t b = 0; b < 11; ++b)
      for (std::uint64_t d = 0; d < 11; ++d) {
        const std::array<TorusInterval, 3> box = {TorusInterval{a, 3}, TorusInterval{b, 3}, TorusInterval{d, 3}};
        brute += count_solutions(BoxSpec::theorem3(11, 1, box)) == 0;
      }
  CHECK(t3.bad_count == brute);
}

TEST_CASE("reflection covariance of bad boxes") {
  // q_1 -> -q_1 maps windows to windows and c to -c.
  for (std::uint64_t q = 2; q <= 60; ++q) {
    for (std::uint64_t L : sample_lengths(q)) {
      REQUIRE(bad_boxes(q, 1, L, 2).bad_count == bad_boxes(q, q - 1, L, 2).bad_count);
    }
  }
}

TEST_CASE("general unit scaling does not preserve bad counts") {
  CHECK(bad_boxes(5, 1, 2, 2).bad_count == 10);
  CHECK(bad_boxes(5, 2, 2, 2).bad_count == 11);
}

TEST_CASE("bad 2L-box implies bad L sub-boxes") {
  for (std::uint64_t q : {31u, 53u, 60u}) {
    const std::uint64_t L = 3;
    const SolutionGrid grid(q, 1);
    const auto big = bad_boxes(q, 1, 2 * L, 2, Config{1, {.sample_cap = 64}});
    REQUIRE(big.bad_count > 0);
    for (const auto& s : big.sample) {
      for (std::uint64_t i = 0; i <= L; ++i)
        for (std::uint64_t j = 0; j <= L; ++j) REQUIRE(grid.count((s[0] + i) % q, L, (s[1] + j) % q, L) == 0);
    }
  }
}

TEST_CASE("thread count does not change results") {
  const auto one = second_moment_pairs(97, 5, 9, 13, threads(1));
  const auto many = second_moment_pairs(97, 5, 9, 13, threads(8));
  CHECK(*one.exact_num == *many.exact_num);
  CHECK(second_moment_spectral(61, 2, 7, threads(1)).moment_value ==
        second_moment_spectral(61, 2, 7, threads(8)).moment_value);
  CHECK(second_moment_spectral_t(9, 2, 4, 3, threads(1)).moment_value ==
        second_moment_spectral_t(9, 2, 4, 3, threads(8)).moment_value);
  CHECK(kth_moment(61, 2, 7, 3, MainTermShape::thm3, threads(1)).moment_value ==
        kth_moment(61, 2, 7, 3, MainTermShape::thm3, threads(8)).moment_value);
  CHECK(bad_boxes(61, 2, 7, 2, threads(1)).sample == bad_boxes(61, 2, 7, 2, threads(8)).sample);
}

TEST_CASE("budgets and validation") {
  Config tight;
  tight.budgets.grid_cells = 100;
  try {
    second_moment_prefix(11, 1, 3, 3, tight);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::budget_exceeded);
  }
  tight = Config{};
  tight.budgets.enumeration = 1000;
  CHECK_THROWS_AS(second_moment_pairs(101, 1, 3, 3, tight), Error);
  CHECK_THROWS_AS(second_moment_spectral_t(15, 1, 3, 3, tight), Error);
  try {
    second_moment_prefix(6, 3, 2, 2);
    FAIL("expected coprimality error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_coprime);
  }
  CHECK_THROWS_AS(second_moment_prefix(6, 1, 7, 2), Error);
  CHECK_THROWS_AS(second_moment_exact_t(5, 1, 2, 1), Error);
}

TEST_CASE("theorem bounds") {
  CHECK(theorem1_bound(Modulus(12), 2, 3) == doctest::Approx(2.0 * 3 * 12 * 216));
  // t = 3, q = 12: C_q^2 = 16, 3^(2*2) = 81, q^2 = 144, L^3 d^3 = 8 * 216, 1 + 3 * 9 / 12.
  CHECK(theorem3_bound(Modulus(12), 2, 3) == doctest::Approx(16.0 * 81 * 144 * 8 * 216 * (1 + 27.0 / 12)));
  CHECK(higher_moment_envelope(100, 10, 6) == doctest::Approx(1e6 / 100.0));
}

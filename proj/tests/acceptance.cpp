// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "covering.hpp"
#include "expsums.hpp"
#include "modarith.hpp"
#include "moments.hpp"
#include "verify.hpp"

using namespace modcount;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::uint64_t divisors(std::uint64_t q) {
  std::uint64_t n = 0;
  for (std::uint64_t k = 1; k <= q; ++k) n += q % k == 0;
  return n;
}

unsigned distinct_primes(std::uint64_t q) {
  unsigned n = 0;
  for (std::uint64_t p = 2; p * p <= q; ++p) {
    if (q % p) continue;
    ++n;
    while (q % p == 0) q /= p;
  }
  return n + (q > 1);
}

std::uint64_t isqrt(std::uint64_t n) {
  std::uint64_t r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

const Config kSerial{1, {}};

Outcome spectral_identity() {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t cases = 0, bad = 0;
  double worst = 0;
  for (std::uint64_t q = 3; q <= 50; ++q) {
    for (std::uint64_t c : sample_units(q)) {
      for (std::uint64_t L : sample_lengths(q)) {
        const double exact = second_moment_prefix(q, std::int64_t(c), L, L, kSerial).moment_value;
        const double spectral = second_moment_spectral(q, std::int64_t(c), L, kSerial).moment_value;
        const double tol = std::max(1e-6 * exact, 1e-6 * double(q) * double(L * L));
        worst = std::max(worst, std::abs(spectral - exact) / tol);
        ++cases;
        bad += !(std::abs(spectral - exact) <= tol);
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {bad == 0 && elapsed < 120,
          fmt("%llu cases, %llu over tolerance, worst error/tolerance %.3g, %.1f s (target < 120 s)",
              (unsigned long long)cases, (unsigned long long)bad, worst, elapsed)};
}

Outcome exact_agreement() {
  std::uint64_t cases = 0, bad = 0;
  for (std::uint64_t q = 3; q <= 120; ++q) {
    for (std::uint64_t c : sample_units(q)) {
      for (std::uint64_t L : sample_lengths(q)) {
        const auto a = second_moment_prefix(q, std::int64_t(c), L, L, kSerial);
        const auto b = second_moment_pairs(q, std::int64_t(c), L, L, kSerial);
        ++cases;
        bad += !(a.exact_num && b.exact_num && *a.exact_num == *b.exact_num && a.exact_den == i128(q) * q);
      }
    }
  }
  return {bad == 0, fmt("%llu cases, %llu integer mismatches in q^2 S", (unsigned long long)cases,
                        (unsigned long long)bad)};
}

// q^6 S for the all-coprime three-variable shape, counting each box directly.
i128 brute_t3(std::uint64_t q, std::uint64_t c, std::uint64_t L) {
  auto inside = [&](std::uint64_t m, std::uint64_t a) { return (m + 2 * q - a - 1) % q < L; };
  const std::uint64_t phi = units(q).size();
  const i128 main_scaled = i128(L * L * L) * i128(phi * phi);  // q^3 * main term
  const i128 q3 = i128(q) * q * q;
  i128 total = 0;
  for (std::uint64_t a1 = 0; a1 < q; ++a1) {
    for (std::uint64_t a2 = 0; a2 < q; ++a2) {
      for (std::uint64_t a3 = 0; a3 < q; ++a3) {
        i128 n = 0;
        for (std::uint64_t x = 0; x < q; ++x) {
          if (!inside(x, a1) || std::gcd(x, q) != 1) continue;
          for (std::uint64_t y = 0; y < q; ++y) {
            if (!inside(y, a2) || std::gcd(y, q) != 1) continue;
            for (std::uint64_t z = 0; z < q; ++z) n += inside(z, a3) && (x * y * z) % q == c;
          }
        }
        const i128 dev = q3 * n - main_scaled;
        total += dev * dev;
      }
    }
  }
  return total;
}

Outcome t_variable_identity() {
  std::uint64_t cases = 0, bad = 0;
  double worst = 0;
  for (std::uint64_t q : {5u, 7u, 9u, 11u, 13u, 15u}) {
    for (std::uint64_t c : {std::uint64_t{1}, q - 1}) {
      for (std::uint64_t L : {std::uint64_t{1}, std::uint64_t{2}, q / 2, q}) {
        const i128 scaled = brute_t3(q, c, L);
        const long double q6 = powl(static_cast<long double>(q), 6);
        const double brute = static_cast<double>(static_cast<long double>(scaled) / q6);
        const double spectral = second_moment_spectral_t(q, std::int64_t(c), L, 3, kSerial).moment_value;
        const double tol = std::max(1e-6 * brute, 1e-6 * double(q * q) * double(L * L * L));
        worst = std::max(worst, std::abs(spectral - brute) / tol);
        ++cases;
        bad += !(std::abs(spectral - brute) <= tol);
      }
    }
  }
  return {bad == 0, fmt("%llu cases, %llu over tolerance, worst error/tolerance %.3g", (unsigned long long)cases,
                        (unsigned long long)bad, worst)};
}

Outcome weil() {
  std::uint64_t cases = 0, bad = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::uint64_t q = 1; q <= 200; ++q) {
    const KloostermanTable table(q);
    const double dq = double(divisors(q));
    for (std::uint64_t a = 0; a < q; ++a) {
      for (std::uint64_t b = 0; b < q; ++b) {
        if (a == 0 && b == 0) continue;
        const double g = double(std::gcd(std::gcd(a, b), q));
        const double margin = std::abs(table(std::int64_t(a), std::int64_t(b))) - std::sqrt(g * double(q)) * dq;
        worst = std::max(worst, margin);
        ++cases;
        bad += !(margin <= 1e-6);
      }
    }
  }
  return {bad == 0, fmt("%llu pairs, %llu violations, max |S| - bound = %.4g", (unsigned long long)cases,
                        (unsigned long long)bad, worst)};
}

Outcome weinstein() {
  std::uint64_t cases = 0, bad = 0;
  double worst = 0;
  for (std::uint64_t q = 1; q <= 40; ++q) {
    if (q % 2 == 0 && q > 30) continue;
    const HyperKloosterman sum(q, 1, 3);
    const double cq = q % 2 ? 1.0 : 4.0;  // 2^((t+1)/2) at t = 3
    const double base = cq * double(q) * std::pow(3.0, distinct_primes(q));
    std::mt19937_64 engine(1000 + q);
    for (int i = 0; i < 256; ++i) {
      const std::array<std::int64_t, 3> ks = {std::int64_t(engine() % q), std::int64_t(engine() % q),
                                              std::int64_t(engine() % q)};
      auto g = [&](std::int64_t x, std::int64_t y) {
        return double(std::gcd(std::gcd(std::uint64_t(x), std::uint64_t(y)), q));
      };
      const double bound = base * std::sqrt(g(ks[0], ks[2]) * g(ks[1], ks[2]));
      const double value = std::abs(sum(ks));
      worst = std::max(worst, value / bound);
      ++cases;
      bad += !(value <= bound + 1e-6);
    }
  }
  return {bad == 0, fmt("%llu tuples, %llu violations, max |K|/bound = %.4g", (unsigned long long)cases,
                        (unsigned long long)bad, worst)};
}

Outcome fejer_identities() {
  std::uint64_t cases = 0, bad_mass = 0, bad_gcd = 0;
  for (std::uint64_t q = 1; q <= 200; ++q) {
    const double dq = double(divisors(q));
    for (std::uint64_t L = 0; L <= q; ++L) {
      const double exact = double(q * L) - double(L * L);
      ++cases;
      bad_mass += !(std::abs(fejer_mass(L, q) - exact) <= 1e-6 * double(q) * double(std::max<std::uint64_t>(L, 1)));
      bad_gcd += !(fejer_gcd_sum(L, q) <= double(q * L) * dq + 1e-6);
    }
  }
  return {bad_mass == 0 && bad_gcd == 0,
          fmt("%llu (q, L) pairs, %llu mass violations, %llu gcd-sum bound violations", (unsigned long long)cases,
              (unsigned long long)bad_mass, (unsigned long long)bad_gcd)};
}

Outcome completion() {
  std::uint64_t cases = 0, bad = 0;
  double worst = 0;
  for (std::uint64_t q = 1; q <= 50; ++q) {
    const std::int64_t sq = std::int64_t(q);
    std::vector<std::int64_t> cs = {1, sq - 1};
    if (q <= 2) cs = {1};
    for (std::int64_t c : cs) {
      for (std::int64_t k : {std::int64_t{1}, std::int64_t{2}, sq - 1}) {
        for (std::uint64_t L : {std::uint64_t{0}, std::uint64_t{1}, isqrt(q), q / 2, q}) {
          for (std::int64_t b = 0; b < sq; ++b) {
            const double err = std::abs(incomplete_kloosterman(b, L, k, c, q) - complete_incomplete(b, L, k, c, q));
            worst = std::max(worst, err / (1e-6 * double(q)));
            ++cases;
            bad += !(err <= 1e-6 * double(q));
          }
        }
      }
    }
  }
  return {bad == 0, fmt("%llu cases, %llu over tolerance, worst error/tolerance %.3g", (unsigned long long)cases,
                        (unsigned long long)bad, worst)};
}

Outcome theorem1_envelope() {
  double worst = 0;
  std::string where;
  for (std::uint64_t q = 3; q <= 50; ++q) {
    const double d = double(divisors(q));
    for (std::uint64_t c : sample_units(q)) {
      for (std::uint64_t L : sample_lengths(q)) {
        const double s = second_moment_prefix(q, std::int64_t(c), L, L, kSerial).moment_value;
        const double ratio = s / (double(L * L) * double(q) * d * d * d);
        if (ratio > worst) {
          worst = ratio;
          where = fmt("q=%llu c=%llu L=%llu", (unsigned long long)q, (unsigned long long)c, (unsigned long long)L);
        }
      }
    }
  }
  return {worst <= 2.0, fmt("max S/(L^2 q d(q)^3) = %.6g at %s (limit 2)", worst, where.c_str())};
}

Outcome chebyshev_bad_boxes() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (std::uint64_t q : {101u, 199u, 293u}) {
    const auto L = static_cast<std::uint64_t>(std::ceil(std::pow(double(q), 0.55)));
    const auto bad = bad_boxes(q, 1, L, 2, kSerial);
    const auto moment = second_moment_pairs(q, 1, L, L, kSerial);
    const SolutionGrid grid(q, 1);
    std::uint64_t min_units = q;
    for (std::uint64_t b = 0; b < q; ++b) min_units = std::min<std::uint64_t>(min_units, grid.units_in(b, L));
    // bad * (L min_units / q)^2 <= S, i.e. bad * L^2 min_units^2 <= q^2 S, in exact integers.
    const i128 lhs = i128(bad.bad_count) * i128(L * L) * i128(min_units * min_units);
    const bool holds = min_units == 0 || lhs <= *moment.exact_num;
    const double cheb = min_units == 0 ? INFINITY
                                       : moment.moment_value / (double(q * q) * std::pow(double(L * min_units) / double(q), 2));
    ok = ok && holds;
    detail += fmt("q=%llu L=%llu bad=%llu fraction=%.5f chebyshev=%.5f; ", (unsigned long long)q,
                  (unsigned long long)L, (unsigned long long)bad.bad_count, bad.fraction, cheb);
  }
  const double elapsed = seconds_since(start);
  return {ok && elapsed < 300, detail + fmt("%.1f s (target < 300 s)", elapsed)};
}

// Largest over samples of the distance to the nearest point, by direct minimization.
double direct_r_max(std::uint64_t q, std::uint64_t m) {
  const auto points = solution_points(q);
  std::int64_t worst = 0;
  for (std::uint64_t j = 0; j <= m; ++j) {
    for (std::uint64_t i = 0; i <= m; ++i) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const auto& p : points) {
        const std::int64_t dx = std::int64_t(i * q) - std::int64_t(p.x * m);
        const std::int64_t dy = std::int64_t(j * q) - std::int64_t(p.y * m);
        best = std::min(best, dx * dx + dy * dy);
      }
      worst = std::max(worst, best);
    }
  }
  return std::sqrt(double(worst)) / double(m);
}

Outcome covering() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t q : {53u, 101u}) {
    const auto fine = covering_report(q, 2048, 0.99, 0, kSerial);
    const double coarse = direct_r_max(q, 256);
    const double coarse_error = double(q) / 256.0 * std::sqrt(2.0) / 2.0;
    const double envelope = std::pow(double(q), 0.75) * std::log(double(q));
    const bool grid_ok = fine.r_max >= coarse - 1e-9 && fine.r_max <= coarse + coarse_error;
    const bool tilde_ok = fine.r_tilde_estimate <= fine.r_max;
    const bool envelope_ok = fine.r_max <= envelope;
    ok = ok && grid_ok && tilde_ok && envelope_ok;
    detail += fmt("q=%llu r_max=%.6f (+%.4f) direct@q/256=%.6f (+%.4f) r_tilde(0.99)=%.6f q^(3/4)log q=%.3f; ",
                  (unsigned long long)q, fine.r_max, fine.error_bound, coarse, coarse_error, fine.r_tilde_estimate,
                  envelope);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome mass_identity() {
  std::uint64_t cases = 0, bad = 0;
  for (std::uint64_t q = 1; q <= 300; ++q) {
    const SolutionGrid grid(q, 1);
    const std::uint64_t phi = units(q).size();
    for (std::uint64_t L : {std::uint64_t{1}, isqrt(q), q}) {
      std::uint64_t total = 0;
      for (std::uint64_t a = 0; a < q; ++a)
        for (std::uint64_t b = 0; b < q; ++b) total += grid.count(a, L, b, L);
      ++cases;
      bad += total != L * L * phi;
    }
  }
  return {bad == 0, fmt("%llu (q, L) cases, %llu mismatches", (unsigned long long)cases, (unsigned long long)bad)};
}

struct Captured {
  int code;
  std::string out;
};

Captured capture(const std::string& args) {
  const std::string cmd = std::string(MODCOUNT_CLI) + " " + args;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome determinism() {
  const std::string verify = "verify --max-q 200 --format csv";
  const std::string sweep = "sweep --kind momentk --q-min 50 --q-max 150 --primes --L-exp 0.6 --k 2,3,4 --no-timing";
  const auto v1 = capture(verify + " --threads 1"), v8 = capture(verify + " --threads 8");
  const auto s1 = capture(sweep + " --threads 1"), s8 = capture(sweep + " --threads 8");
  const bool ok = v1.code == 0 && v8.code == 0 && s1.code == 0 && s8.code == 0 && v1.out == v8.out &&
                  s1.out == s8.out && !s1.out.empty();
  return {ok, fmt("verify: exit %d/%d, %zu bytes, %s; sweep: exit %d/%d, %zu bytes, %s", v1.code, v8.code,
                  v1.out.size(), v1.out == v8.out ? "identical" : "DIFFERENT", s1.code, s8.code, s1.out.size(),
                  s1.out == s8.out ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"spectral identity vs exact prefix moment", spectral_identity},
      {"prefix and pairs give identical q^2 S", exact_agreement},
      {"three-variable spectral identity vs brute force", t_variable_identity},
      {"Weil bound with constant 1", weil},
      {"Weinstein bound for t = 3", weinstein},
      {"Fejer mass identity and gcd-sum bound", fejer_identities},
      {"completion identity", completion},
      {"second moment over L^2 q d(q)^3 stays <= 2", theorem1_envelope},
      {"bad-box fraction under the Chebyshev bound", chebyshev_bad_boxes},
      {"covering radius grid, r_tilde and q^(3/4) log q", covering},
      {"mass identity", mass_identity},
      {"byte-identical output at 1 and 8 threads", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

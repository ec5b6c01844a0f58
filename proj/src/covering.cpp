#include "covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "int128.hpp"
#include "modarith.hpp"
#include "parallel.hpp"

namespace modcount {

namespace {

struct Parabola {
  std::int64_t center;  // scaled x of the point column
  std::int64_t height;  // scaled squared vertical distance within the row
};

/// Crossing of two parabolas with a.center < b.center, as num / den with den > 0.
struct Crossing {
  i128 num, den;
};

Crossing crossing(const Parabola& a, const Parabola& b) {
  const i128 num = (i128(b.height) + i128(b.center) * b.center) - (i128(a.height) + i128(a.center) * a.center);
  return {num, 2 * (i128(b.center) - a.center)};
}

bool less_equal(const Crossing& lhs, const Crossing& rhs) { return lhs.num * rhs.den <= rhs.num * lhs.den; }

}  // namespace

std::vector<SolutionPoint> solution_points(std::uint64_t q) {
  require(q >= 2, "solution points need q >= 2");
  std::vector<SolutionPoint> points;
  for (std::uint64_t x = 1; x < q; ++x) {
    if (gcd(x, q) == 1) points.push_back({x, mod_inverse(static_cast<std::int64_t>(x), q)});
  }
  return points;
}

DistanceField::DistanceField(std::uint64_t q, std::uint64_t subdivisions, const Config& config, bool torus)
    : q_(q), m_(subdivisions), torus_(torus) {
  require(q >= 2, "covering needs q >= 2");
  require(subdivisions >= 1, "grid needs at least one subdivision");
  const std::uint64_t n = side();
  if (n > config.budgets.covering_samples / n) {
    fail(ErrorCode::budget_exceeded,
         "covering grid of " + std::to_string(n) + "^2 samples exceeds budget " +
             std::to_string(config.budgets.covering_samples));
  }
  // Scaled coordinates: sample i sits at i*q, point x at x*m.
  require(q <= 1'000'000 && subdivisions <= 1'000'000 && q * subdivisions <= (std::uint64_t(1) << 30),
          "q * subdivisions must stay below 2^30");

  const auto points = solution_points(q);
  const std::int64_t qs = static_cast<std::int64_t>(q), ms = static_cast<std::int64_t>(m_);
  const std::int64_t period = qs * ms;
  std::vector<std::int64_t> shifts = {0};
  if (torus_) shifts = {-period, 0, period};

  field_.assign(n * n, 0);
  parallel_for(n, config.threads, [&](std::size_t j) {
    const std::int64_t row_y = static_cast<std::int64_t>(j) * qs;
    std::vector<Parabola> columns;
    columns.reserve(points.size() * shifts.size());
    for (std::int64_t dx : shifts) {
      for (const auto& p : points) {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (std::int64_t dy : shifts) {
          const std::int64_t v = row_y - (static_cast<std::int64_t>(p.y) * ms + dy);
          best = std::min(best, v * v);
        }
        columns.push_back({static_cast<std::int64_t>(p.x) * ms + dx, best});
      }
    }
    // Lower envelope: hull[k] is the parabola owning samples from bounds[k].
    std::vector<Parabola> hull;
    std::vector<Crossing> bounds;
    for (const auto& next : columns) {
      while (!hull.empty()) {
        const Crossing cross = crossing(hull.back(), next);
        if (hull.size() > 1 && less_equal(cross, bounds.back())) {
          hull.pop_back();
          bounds.pop_back();
          continue;
        }
        bounds.push_back(cross);
        break;
      }
      hull.push_back(next);
    }
    std::size_t owner = 0;
    std::int64_t* out = field_.data() + j * n;
    for (std::uint64_t i = 0; i < n; ++i) {
      const i128 s = i128(i) * qs;
      while (owner + 1 < hull.size() && bounds[owner].num < s * bounds[owner].den) ++owner;
      const std::int64_t dx = static_cast<std::int64_t>(s) - hull[owner].center;
      out[i] = dx * dx + hull[owner].height;
    }
  });

  sorted_ = field_;
  std::sort(sorted_.begin(), sorted_.end());
}

double DistanceField::error_bound() const { return grid_step() * std::sqrt(2.0) / 2.0; }

double DistanceField::r_max() const {
  return std::sqrt(static_cast<double>(sorted_.back())) / static_cast<double>(m_);
}

double DistanceField::coverage_fraction(double r) const {
  require(r >= 0.0 && std::isfinite(r), "radius must be finite and non-negative");
  const long double scaled = static_cast<long double>(r) * static_cast<long double>(m_);
  const long double limit = scaled * scaled;
  if (limit >= static_cast<long double>(sorted_.back())) return 1.0;
  // Radii handed back by r_max or r_tilde are sqrt(D) / m; squaring them again
  // can land a hair below the integer D, so snap to it.
  auto threshold = static_cast<std::int64_t>(std::floor(limit));
  const long double nearest = std::round(limit);
  if (std::abs(limit - nearest) <= 1e-9L * std::max(1.0L, limit)) threshold = static_cast<std::int64_t>(nearest);
  const auto covered = std::upper_bound(sorted_.begin(), sorted_.end(), threshold) - sorted_.begin();
  return static_cast<double>(covered) / static_cast<double>(sorted_.size());
}

double DistanceField::r_tilde(double theta) const {
  require(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
  const auto total = static_cast<long double>(sorted_.size());
  auto needed = static_cast<std::size_t>(std::ceil(static_cast<long double>(theta) * total));
  needed = std::clamp<std::size_t>(needed, 1, sorted_.size());
  return std::sqrt(static_cast<double>(sorted_[needed - 1])) / static_cast<double>(m_);
}

CoveringReport covering_report(std::uint64_t q, std::uint64_t subdivisions, double theta, unsigned curve_points,
                               const Config& config, bool torus) {
  const DistanceField field(q, subdivisions, config, torus);
  CoveringReport report;
  report.q = q;
  report.subdivisions = subdivisions;
  report.grid_step = field.grid_step();
  report.r_max = field.r_max();
  report.error_bound = field.error_bound();
  report.torus = torus;
  if (theta > 0.0) {
    report.theta = theta;
    report.r_tilde_estimate = field.r_tilde(theta);
  }
  const double top = report.r_max + report.error_bound;
  for (unsigned i = 0; i < curve_points; ++i) {
    const double r = curve_points == 1 ? top : top * static_cast<double>(i) / (curve_points - 1);
    report.curve.emplace_back(r, field.coverage_fraction(r));
  }
  return report;
}

CoveringReport covering_radius_max(std::uint64_t q, std::uint64_t subdivisions, const Config& config) {
  return covering_report(q, subdivisions, 0.0, 0, config);
}

double coverage_fraction(std::uint64_t q, double r, std::uint64_t subdivisions, const Config& config) {
  return DistanceField(q, subdivisions, config).coverage_fraction(r);
}

CoveringReport r_tilde(std::uint64_t q, double theta, std::uint64_t subdivisions, const Config& config) {
  require(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
  return covering_report(q, subdivisions, theta, 0, config);
}

}  // namespace modcount

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "config.hpp"

namespace modcount {

struct SolutionPoint {
  std::uint64_t x, y;
  friend bool operator==(const SolutionPoint&, const SolutionPoint&) = default;
};

/// Points (x, y) with 1 <= x, y <= q - 1 and x y = 1 (mod q), ordered by x.
std::vector<SolutionPoint> solution_points(std::uint64_t q);

/// Squared distances from every sample (i h, j h), h = q / subdivisions, of
/// [0, q]^2 to the nearest solution point. Distances are kept in scaled
/// integer units: a stored value D means a Euclidean distance sqrt(D) / subdivisions.
///
/// Each row is a lower envelope of parabolas, one per point column (every x
/// carries at most one point), evaluated exactly with integer arithmetic.
class DistanceField {
 public:
  DistanceField(std::uint64_t q, std::uint64_t subdivisions, const Config& config = {}, bool torus = false);

  std::uint64_t modulus() const noexcept { return q_; }
  std::uint64_t subdivisions() const noexcept { return m_; }
  double grid_step() const noexcept { return static_cast<double>(q_) / static_cast<double>(m_); }
  /// h * sqrt(2) / 2: the true covering radius lies in [r_max, r_max + this].
  double error_bound() const;
  bool torus() const noexcept { return torus_; }

  std::uint64_t side() const noexcept { return m_ + 1; }
  /// Scaled squared distance of sample (i, j), i along x.
  std::int64_t scaled_sq(std::uint64_t i, std::uint64_t j) const { return field_[j * side() + i]; }

  double r_max() const;
  /// Fraction of samples within distance r of some point.
  double coverage_fraction(double r) const;
  /// Smallest r on this grid whose coverage fraction reaches theta.
  double r_tilde(double theta) const;

 private:
  std::uint64_t q_;
  std::uint64_t m_;
  bool torus_;
  std::vector<std::int64_t> field_;
  std::vector<std::int64_t> sorted_;
};

struct CoveringReport {
  std::uint64_t q = 0;
  std::uint64_t subdivisions = 0;
  double grid_step = 0.0;
  double r_max = 0.0;
  double error_bound = 0.0;
  std::vector<std::pair<double, double>> curve;  // (r, covered fraction), r ascending
  double theta = 0.0;
  double r_tilde_estimate = 0.0;
  bool torus = false;
};

constexpr std::uint64_t kDefaultSubdivisions = 2048;

CoveringReport covering_radius_max(std::uint64_t q, std::uint64_t subdivisions = kDefaultSubdivisions,
                                   const Config& config = {});
double coverage_fraction(std::uint64_t q, double r, std::uint64_t subdivisions = kDefaultSubdivisions,
                         const Config& config = {});
CoveringReport r_tilde(std::uint64_t q, double theta, std::uint64_t subdivisions = kDefaultSubdivisions,
                       const Config& config = {});

/// Everything at once: r_max, r_tilde(theta) and a coverage curve with
/// `curve_points` radii evenly spaced over [0, r_max + error_bound].
CoveringReport covering_report(std::uint64_t q, std::uint64_t subdivisions, double theta, unsigned curve_points,
                               const Config& config = {}, bool torus = false);

}  // namespace modcount

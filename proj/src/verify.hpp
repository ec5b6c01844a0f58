#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"

namespace modcount {

/// Outcome of one identity or bound family checked over a built-in sweep.
struct CheckResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t violations = 0;
  /// Largest observed (error - tolerance) for identities, or (value - bound)
  /// for bounds; negative means every case passed with room to spare.
  double worst_margin = 0.0;
};

/// Runs the spectral, Weil, Weinstein, Fejer, completion, exact-method and
/// mass-identity checks for moduli up to max_q (each family capped at its own
/// desk-scale limit).
std::vector<CheckResult> run_verification(std::uint64_t max_q, const Config& config = {});

/// c values used by the moment sweeps: 1, q - 1 and the median unit, deduplicated.
std::vector<std::uint64_t> sample_units(std::uint64_t q);

/// {1, floor(sqrt q), floor(q/2), q - 1, q}, deduplicated, ascending.
std::vector<std::uint64_t> sample_lengths(std::uint64_t q);

}  // namespace modcount

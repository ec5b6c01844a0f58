#pragma once

#include <cstdint>

namespace modcount {

/// Explicit work limits. Exceeding one is an error, never a silent truncation.
struct Budgets {
  std::uint64_t enumeration = 100'000'000;   // terms summed by any single enumeration
  std::uint64_t grid_cells = 16'000'000;     // q^2 cells of a prefix-sum grid (q <= 4000)
  std::uint64_t covering_samples = 1u << 24; // (M+1)^2 samples of a covering grid
  std::uint64_t sample_cap = 16;             // bad base tuples kept in a report
};

struct Config {
  unsigned threads = 1;
  Budgets budgets;
};

}  // namespace modcount

// Binomial interval estimation and exact-vs-empirical comparison.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/exact.hpp"
#include "core/lattice.hpp"

namespace annulus {

struct WilsonInterval {
  double center = 0.0;
  double half_width = 0.0;
};

// Wilson score interval for a binomial proportion at the given
// two-sided confidence level.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double confidence);

// Inverse standard normal CDF (Acklam's rational approximation with one
// Halley refinement step; |error| < 1e-15 over (0, 1)).
double inverse_normal_cdf(double p);

struct ComparisonRow {
  std::string name;
  double exact = 0.0;
  double estimate = 0.0;
  double half_width = 0.0;  // Wilson half-width (std-error based for E[N_c])
  double z_score = 0.0;
  bool low_statistics = false;  // expected event count below 25
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double confidence = 0.0;
  std::uint64_t trials = 0;
  double rho_effective = 0.0;
};

// One row per observable: crossing probability, P(1)..P(n_max), E[N_c].
// Exact values are evaluated at the geometry's realized rho_effective.
// No pass/fail verdict; callers pick thresholds.
ComparisonReport compare(const TrialStatistics& stats, int n_max,
                         double confidence, const Truncation& trunc);

}  // namespace annulus

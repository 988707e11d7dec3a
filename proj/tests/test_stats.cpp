#include <cmath>

#include "core/stats.hpp"
#include "doctest.h"

using namespace annulus;

TEST_CASE("inverse normal CDF") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.841344746068543) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(inverse_normal_cdf(0.1) == doctest::Approx(-inverse_normal_cdf(0.9)).epsilon(1e-12));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), DomainError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), DomainError);
}

TEST_CASE("wilson interval reference cases") {
  WilsonInterval w = wilson_interval(0, 100, 0.95);
  CHECK(w.center == doctest::Approx(0.0186).epsilon(2e-2));
  CHECK(w.center + w.half_width == doctest::Approx(0.037).epsilon(3e-2));
  CHECK(w.center - w.half_width == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  w = wilson_interval(50, 100, 0.95);
  CHECK(w.center == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w.half_width == doctest::Approx(0.096).epsilon(1e-2));

  // Boundary case successes == trials: upper edge is exactly 1, no blowup.
  w = wilson_interval(100, 100, 0.95);
  CHECK(std::isfinite(w.center));
  CHECK(std::isfinite(w.half_width));
  CHECK(w.center + w.half_width == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wilson interval domain checks") {
  CHECK_THROWS_AS(wilson_interval(5, 0, 0.95), DomainError);
  CHECK_THROWS_AS(wilson_interval(11, 10, 0.95), DomainError);
  CHECK_THROWS_AS(wilson_interval(1, 10, 0.0), DomainError);
  CHECK_THROWS_AS(wilson_interval(1, 10, 1.0), DomainError);
}

TEST_CASE("compare builds one row per observable") {
  LatticeGeometry g = geometry_for(1.0, 64);
  TrialStatistics stats;
  stats.trials = 10000;
  stats.master_seed = 1;
  stats.geometry = g;
  stats.histogram[0] = 6400;
  stats.histogram[1] = 3580;
  stats.histogram[2] = 20;
  // no N_c = 3 events at all

  ComparisonReport report = compare(stats, 3, 0.95, Truncation{});
  REQUIRE(report.rows.size() == 5);  // crossing, P(1..3), E[Nc]
  CHECK(report.rows[0].name == "crossing");
  CHECK(report.rows[1].name == "P(1)");
  CHECK(report.rows[4].name == "E[Nc]");
  CHECK(report.rho_effective == doctest::Approx(g.rho_effective));

  CHECK(report.rows[0].estimate == doctest::Approx(0.36));
  CHECK(report.rows[0].exact == doctest::Approx(0.3594).epsilon(2e-2));
  for (const ComparisonRow& row : report.rows) {
    CHECK(std::isfinite(row.z_score));
    CHECK(std::isfinite(row.half_width));
  }
  // Low-count guard: expected P(2) events = 2e-3 * 1e4 = 20 < 25.
  CHECK(report.rows[2].low_statistics);
  CHECK(report.rows[3].low_statistics);
  CHECK(!report.rows[0].low_statistics);

  // Empty histogram cell: estimate 0 with a finite one-sided bound.
  CHECK(report.rows[3].estimate == 0.0);
  CHECK(report.rows[3].half_width > 0.0);

  CHECK_THROWS_AS(compare(TrialStatistics{}, 3, 0.95, Truncation{}), DomainError);
}

TEST_CASE("compare on a real batch reports the finite-size deficit") {
  LatticeGeometry g = geometry_for(1.0, 32);
  TrialStatistics stats = run_trials(g, 50000, 2024, 4);
  ComparisonReport report = compare(stats, 2, 0.95, Truncation{});
  // The lattice crosses less than the continuum formula by about
  // 1.9/cols, which at 5e4 trials is a large, stable z-score.
  CHECK(report.rows[0].z_score < -18.0);
  CHECK(report.rows[0].z_score > -35.0);
  CHECK(report.rows[0].estimate < report.rows[0].exact);
  CHECK(std::abs(report.rows[0].estimate -
                 (report.rows[0].exact - 1.9 / 32.0)) < 0.01);
  CHECK(report.rows[1].z_score < -18.0);
  CHECK(report.rows[1].z_score > -35.0);
}

TEST_CASE("wilson interval coverage calibration") {
  // 100 independent repetitions at cols = 32, 1e4 trials each: the 95%
  // interval should cover the true lattice crossing probability about
  // 95 times. The truth is unknown analytically (finite-size bias), so
  // use the pooled estimate over all repetitions; its own error is
  // negligible against the per-repetition half-width.
  LatticeGeometry g = geometry_for(1.0, 32);
  const int reps = 100;
  std::vector<std::uint64_t> hits(reps, 0);
  std::uint64_t total_hits = 0, total_trials = 0;
  for (int rep = 0; rep < reps; ++rep) {
    TrialStatistics stats = run_trials(g, 10000, 777000 + rep, 4);
    for (const auto& [nc, count] : stats.histogram) {
      if (nc >= 1) hits[rep] += count;
    }
    total_hits += hits[rep];
    total_trials += stats.trials;
  }
  const double pooled = static_cast<double>(total_hits) / total_trials;
  int covered = 0;
  for (int rep = 0; rep < reps; ++rep) {
    WilsonInterval w = wilson_interval(hits[rep], 10000, 0.95);
    if (std::abs(w.center - pooled) <= w.half_width) ++covered;
  }
  CHECK(covered >= 88);
  CHECK(covered <= 100);
}

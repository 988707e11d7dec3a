// Critical site percolation on a triangular lattice with annulus
// topology: reproducible sampling, spanning-cluster counting with
// wrap exclusion, and deterministic parallel trial batches.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "core/series.hpp"

namespace annulus {

// Triangular annulus lattice. `cols` counts the distinct half-spaced
// columns of the staggered triangular picture (so l/a = cols/2); the
// sites are stored as a rows x (cols/2) parallelogram grid, obtained by
// the shear j = (c - r)/2, which maps the triangular adjacency onto the
// uniform 6-neighbor stencil (r, j+-1), (r+-1, j), (r+1, j-1),
// (r-1, j+1) with site columns mod cols/2.
struct LatticeGeometry {
  int cols = 0;       // distinct half-spaced columns, even, >= 4
  int site_cols = 0;  // sites per row = cols/2
  int rows = 0;       // >= 2
  double rho_effective = 0.0;  // (rows - 1) * sqrt(3) / cols

  int cells() const { return rows * site_cols; }
};

// rows = round(rho * cols / sqrt(3)) + 1. Throws DomainError when the
// requested rho is unreachable at this resolution (rows below 2).
LatticeGeometry geometry_for(double rho, int cols);

// One two-coloring; 1 = blue, 0 = red, row-major.
using Coloring = std::vector<std::uint8_t>;

// splitmix64 output function. Element i of the stream seeded with s is
// splitmix_mix(s + (i+1) * 0x9E3779B97F4A7C15.
std::uint64_t splitmix_mix(std::uint64_t z);

// Seed for trial t of a batch: element t of the splitmix64 stream
// started at master_seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t t);

// Cell k is blue iff the top bit of stream element k is set. Identical
// results on every platform.
Coloring sample(const LatticeGeometry& g, std::uint64_t seed);

struct SpanningCount {
  int n_spanning = 0;       // distinct blue clusters touching both rows,
                            // wrapping clusters excluded
  bool wrap_excluded = false;  // a cluster touching both rows also wrapped
};

SpanningCount count_spanning(const LatticeGeometry& g, const Coloring& cells);

// Reusable workspace so batch loops do not reallocate per trial.
class SpanningCounter {
 public:
  explicit SpanningCounter(const LatticeGeometry& g);
  SpanningCount count(const Coloring& cells);

 private:
  LatticeGeometry geom_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> size_;
  std::vector<std::int32_t> shift_;  // column displacement to parent
  std::vector<std::uint8_t> flags_;  // wrap / touches-bottom / touches-top

  std::int32_t find(std::int32_t x, std::int32_t* displacement);
};

struct TrialStatistics {
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  LatticeGeometry geometry;
  std::map<int, std::uint64_t> histogram;  // N_c -> count
};

// Histogram of count_spanning over independent trials; trial t uses
// trial_seed(master_seed, t), so the result is identical for every
// worker count.
TrialStatistics run_trials(const LatticeGeometry& g, std::uint64_t trials,
                           std::uint64_t master_seed, int workers);

}  // namespace annulus

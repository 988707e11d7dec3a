#include "core/lattice.hpp"

#include <cmath>
#include <new>
#include <numbers>
#include <thread>

namespace annulus {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

LatticeGeometry geometry_for(double rho, int cols) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("rho must be positive and finite");
  }
  if (cols < 4 || (cols % 2) != 0) {
    throw DomainError("cols must be even and >= 4");
  }
  int rows = static_cast<int>(std::lround(rho * cols / std::numbers::sqrt3)) + 1;
  if (rows < 2) {
    throw DomainError("requested rho unreachable at this resolution (rows < 2)");
  }
  LatticeGeometry g;
  g.cols = cols;
  g.site_cols = cols / 2;
  g.rows = rows;
  g.rho_effective = (rows - 1) * std::numbers::sqrt3 / cols;
  return g;
}

std::uint64_t splitmix_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t t) {
  return splitmix_mix(master_seed + (t + 1) * kGolden);
}

Coloring sample(const LatticeGeometry& g, std::uint64_t seed) {
  Coloring cells(static_cast<std::size_t>(g.cells()));
  for (std::size_t k = 0; k < cells.size(); ++k) {
    cells[k] = static_cast<std::uint8_t>(splitmix_mix(seed + (k + 1) * kGolden) >> 63);
  }
  return cells;
}

SpanningCounter::SpanningCounter(const LatticeGeometry& g)
    : geom_(g),
      parent_(g.cells()),
      size_(g.cells()),
      shift_(g.cells()),
      flags_(g.cells()) {}

std::int32_t SpanningCounter::find(std::int32_t x, std::int32_t* displacement) {
  // First pass: locate the root and the total displacement.
  std::int32_t root = x;
  std::int32_t disp = 0;
  while (parent_[root] != root) {
    disp += shift_[root];
    root = parent_[root];
  }
  // Second pass: path compression with displacement rebasing.
  std::int32_t node = x;
  std::int32_t d = disp;
  while (parent_[node] != node) {
    std::int32_t next = parent_[node];
    std::int32_t step = shift_[node];
    parent_[node] = root;
    shift_[node] = d;
    node = next;
    d -= step;
  }
  *displacement = disp;
  return root;
}

SpanningCount SpanningCounter::count(const Coloring& cells) {
  const int rows = geom_.rows;
  const int cols = geom_.site_cols;
  const int n = rows * cols;
  if (static_cast<int>(cells.size()) != n) {
    throw DomainError("coloring size does not match geometry");
  }

  constexpr std::uint8_t kWrap = 1, kBottom = 2, kTop = 4;

  for (int i = 0; i < n; ++i) {
    parent_[i] = i;
    size_[i] = 1;
    shift_[i] = 0;
    flags_[i] = 0;
  }

  // Union a with b where b sits at column displacement delta from a.
  auto unite = [&](std::int32_t a, std::int32_t b, std::int32_t delta) {
    std::int32_t da, db;
    std::int32_t ra = find(a, &da);
    std::int32_t rb = find(b, &db);
    if (ra == rb) {
      // Already connected: a displacement mismatch means a cycle with
      // nonzero winding around the periodic direction.
      if (da + delta != db) flags_[ra] |= kWrap;
      return;
    }
    // Displacement of rb relative to ra so that db' + disp(b) stays
    // consistent: shift(rb->ra) = da + delta - db.
    std::int32_t rel = da + delta - db;
    if (size_[ra] < size_[rb]) {
      std::swap(ra, rb);
      rel = -rel;
    }
    parent_[rb] = ra;
    shift_[rb] = rel;
    size_[ra] += size_[rb];
    flags_[ra] |= flags_[rb];
  };

  for (int r = 0; r < rows; ++r) {
    const int base = r * cols;
    for (int c = 0; c < cols; ++c) {
      if (!cells[base + c]) continue;
      const std::int32_t here = base + c;
      // Forward half of the 6-neighbor stencil; the reverse edges are
      // covered when the loop reaches the neighbor.
      const int ce = (c + 1 == cols) ? 0 : c + 1;
      if (cells[base + ce]) unite(here, base + ce, +1);
      if (r + 1 < rows) {
        if (cells[base + cols + c]) unite(here, base + cols + c, 0);
        const int cw = (c == 0) ? cols - 1 : c - 1;
        if (cells[base + cols + cw]) unite(here, base + cols + cw, -1);
      }
    }
  }

  std::int32_t scratch;
  for (int c = 0; c < cols; ++c) {
    if (cells[c]) flags_[find(c, &scratch)] |= kBottom;
    const int top = (rows - 1) * cols + c;
    if (cells[top]) flags_[find(top, &scratch)] |= kTop;
  }

  SpanningCount result;
  for (int i = 0; i < n; ++i) {
    if (parent_[i] != i || !cells[i]) continue;
    const std::uint8_t f = flags_[i];
    if ((f & kBottom) && (f & kTop)) {
      if (f & kWrap) {
        result.wrap_excluded = true;
      } else {
        ++result.n_spanning;
      }
    }
  }
  return result;
}

SpanningCount count_spanning(const LatticeGeometry& g, const Coloring& cells) {
  SpanningCounter counter(g);
  return counter.count(cells);
}

TrialStatistics run_trials(const LatticeGeometry& g, std::uint64_t trials,
                           std::uint64_t master_seed, int workers) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (workers < 1) throw DomainError("workers must be >= 1");

  const std::uint64_t nworkers =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), trials);

  std::vector<std::map<int, std::uint64_t>> partial(nworkers);
  std::vector<std::thread> threads;
  threads.reserve(nworkers);

  try {
    for (std::uint64_t w = 0; w < nworkers; ++w) {
      // Contiguous trial ranges; per-trial seeds make the partition
      // irrelevant to the merged histogram.
      const std::uint64_t begin = trials * w / nworkers;
      const std::uint64_t end = trials * (w + 1) / nworkers;
      threads.emplace_back([&, w, begin, end] {
        SpanningCounter counter(g);
        Coloring cells;
        for (std::uint64_t t = begin; t < end; ++t) {
          cells = sample(g, trial_seed(master_seed, t));
          SpanningCount sc = counter.count(cells);
          ++partial[w][sc.n_spanning];
        }
      });
    }
  } catch (...) {
    for (auto& th : threads) th.join();
    throw;
  }
  for (auto& th : threads) th.join();

  TrialStatistics stats;
  stats.trials = trials;
  stats.master_seed = master_seed;
  stats.geometry = g;
  for (const auto& h : partial) {
    for (const auto& [nc, count] : h) stats.histogram[nc] += count;
  }
  return stats;
}

}  // namespace annulus

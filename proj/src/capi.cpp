// extern-C surface over the C++ core. Exceptions are caught at this
// boundary and mapped to status codes; handles own heap copies of the
// core value types.
#include "annulus/annulus.h"

#include <algorithm>
#include <iterator>
#include <new>
#include <utility>

#include "core/exact.hpp"
#include "core/lattice.hpp"
#include "core/stats.hpp"

struct ann_modulus {
  annulus::AnnulusModulus value;
};
struct ann_distribution {
  annulus::CrossingDistribution value;
};
struct ann_geometry {
  annulus::LatticeGeometry value;
};
struct ann_trials {
  annulus::TrialStatistics value;
};
struct ann_report {
  annulus::ComparisonReport value;
};

namespace {

annulus::Truncation to_core(ann_truncation t) {
  annulus::Truncation out;
  out.abs_tol = t.abs_tol;
  out.max_terms = t.max_terms;
  return out;
}

template <typename Fn>
ann_status guarded(Fn&& fn) {
  try {
    fn();
    return ANN_OK;
  } catch (const annulus::DomainError&) {
    return ANN_ERR_DOMAIN;
  } catch (const annulus::TruncationError&) {
    return ANN_ERR_TRUNCATION;
  } catch (const annulus::OverflowError&) {
    return ANN_ERR_OVERFLOW;
  } catch (const std::bad_alloc&) {
    return ANN_ERR_RESOURCE;
  } catch (...) {
    return ANN_ERR_ARGUMENT;
  }
}

}  // namespace

extern "C" {

const char* ann_status_message(ann_status status) {
  switch (status) {
    case ANN_OK:
      return "ok";
    case ANN_ERR_DOMAIN:
      return "argument outside its domain";
    case ANN_ERR_TRUNCATION:
      return "series did not converge within max_terms";
    case ANN_ERR_OVERFLOW:
      return "exact integer result does not fit int64";
    case ANN_ERR_RESOURCE:
      return "allocation failure";
    case ANN_ERR_ARGUMENT:
      return "null handle or output pointer";
  }
  return "unknown status";
}

ann_truncation ann_default_truncation(void) { return {1e-15, 10000}; }

ann_status ann_modulus_create(double rho, ann_modulus** out) {
  if (!out) return ANN_ERR_ARGUMENT;
  return guarded([&] { *out = new ann_modulus{annulus::make_modulus(rho)}; });
}

void ann_modulus_destroy(ann_modulus* m) { delete m; }
double ann_modulus_rho(const ann_modulus* m) { return m->value.rho; }
double ann_modulus_q_tilde(const ann_modulus* m) { return m->value.q_tilde; }
double ann_modulus_q(const ann_modulus* m) { return m->value.q; }

ann_status ann_crossing_probability(const ann_modulus* m, ann_form form,
                                    ann_truncation trunc, double* out) {
  if (!m || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    *out = annulus::crossing_probability(
        m->value, static_cast<annulus::CrossingForm>(form), to_core(trunc));
  });
}

ann_status ann_p_exact(const ann_modulus* m, int n_c, ann_truncation trunc,
                       double* out, int* underflowed) {
  if (!m || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    annulus::PExactResult r = annulus::p_exact(n_c, m->value, to_core(trunc));
    *out = r.value;
    if (underflowed) *underflowed = r.underflowed ? 1 : 0;
  });
}

ann_status ann_log_p_exact(const ann_modulus* m, int n_c, ann_truncation trunc,
                           double* out) {
  if (!m || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] { *out = annulus::log_p_exact(n_c, m->value, to_core(trunc)); });
}

ann_status ann_a_coefficient(int n_c, int s, int64_t* out) {
  if (!out) return ANN_ERR_ARGUMENT;
  return guarded([&] { *out = annulus::a_coefficient_i64(n_c, s); });
}

ann_status ann_leading_order_pn(const ann_modulus* m, int n_c, double* out) {
  if (!m || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] { *out = annulus::leading_order_pn(n_c, m->value); });
}

ann_status ann_distribution_create(const ann_modulus* m, int n_max,
                                   ann_truncation trunc, ann_distribution** out) {
  if (!m || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ann_distribution{annulus::distribution(m->value, n_max, to_core(trunc))};
  });
}

void ann_distribution_destroy(ann_distribution* d) { delete d; }
int ann_distribution_n_max(const ann_distribution* d) {
  return static_cast<int>(d->value.p.size()) - 1;
}
double ann_distribution_p(const ann_distribution* d, int n_c) {
  if (n_c < 0 || n_c >= static_cast<int>(d->value.p.size())) return 0.0;
  return d->value.p[static_cast<std::size_t>(n_c)];
}
double ann_distribution_tail_bound(const ann_distribution* d) {
  return d->value.tail_bound;
}

ann_status ann_mean_spanning_clusters(const ann_modulus* m, ann_truncation trunc,
                                      double* out) {
  if (!m || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] { *out = annulus::mean_spanning_clusters(m->value, to_core(trunc)); });
}

ann_status ann_o1_crossing_probability(const ann_modulus* m, ann_truncation trunc,
                                       double* out) {
  if (!m || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] { *out = annulus::o1_crossing_probability(m->value, to_core(trunc)); });
}

ann_status ann_z_plus_minus(const ann_modulus* m, ann_truncation trunc, double* out) {
  if (!m || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] { *out = annulus::z_plus_minus(m->value, to_core(trunc)); });
}

ann_status ann_loop_gas_partition(const ann_modulus* m, double chi_prime,
                                  ann_truncation trunc, double* out) {
  if (!m || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    *out = annulus::loop_gas_partition(chi_prime, m->value, to_core(trunc));
  });
}

ann_status ann_fugacity_from_angle(double chi_prime, double* u) {
  if (!u) return ANN_ERR_ARGUMENT;
  return guarded([&] { *u = annulus::fugacity_from_angle(chi_prime); });
}

ann_status ann_angle_factor_from_fugacity(double u, double* re, double* im) {
  if (!re || !im) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    annulus::AngleFactor f = annulus::angle_factor_from_fugacity(u);
    *re = f.re;
    *im = f.im;
  });
}

ann_status ann_geometry_create(double rho, int cols, ann_geometry** out) {
  if (!out) return ANN_ERR_ARGUMENT;
  return guarded([&] { *out = new ann_geometry{annulus::geometry_for(rho, cols)}; });
}

void ann_geometry_destroy(ann_geometry* g) { delete g; }
int ann_geometry_rows(const ann_geometry* g) { return g->value.rows; }
int ann_geometry_cols(const ann_geometry* g) { return g->value.cols; }
int ann_geometry_cells(const ann_geometry* g) { return g->value.cells(); }
double ann_geometry_rho_effective(const ann_geometry* g) {
  return g->value.rho_effective;
}

ann_status ann_sample_coloring(const ann_geometry* g, uint64_t seed,
                               uint8_t* cells) {
  if (!g || !cells) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    annulus::Coloring c = annulus::sample(g->value, seed);
    std::copy(c.begin(), c.end(), cells);
  });
}

ann_status ann_count_spanning(const ann_geometry* g, const uint8_t* cells,
                              int* n_spanning, int* wrap_excluded) {
  if (!g || !cells || !n_spanning) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    annulus::Coloring c(cells, cells + g->value.cells());
    annulus::SpanningCount sc = annulus::count_spanning(g->value, c);
    *n_spanning = sc.n_spanning;
    if (wrap_excluded) *wrap_excluded = sc.wrap_excluded ? 1 : 0;
  });
}

ann_status ann_run_trials(const ann_geometry* g, uint64_t trials,
                          uint64_t master_seed, int workers, ann_trials** out) {
  if (!g || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ann_trials{annulus::run_trials(g->value, trials, master_seed, workers)};
  });
}

void ann_trials_destroy(ann_trials* t) { delete t; }
uint64_t ann_trials_count(const ann_trials* t) { return t->value.trials; }
uint64_t ann_trials_master_seed(const ann_trials* t) { return t->value.master_seed; }
int ann_trials_histogram_size(const ann_trials* t) {
  return static_cast<int>(t->value.histogram.size());
}

ann_status ann_trials_histogram_entry(const ann_trials* t, int index, int* n_c,
                                      uint64_t* count) {
  if (!t || !n_c || !count) return ANN_ERR_ARGUMENT;
  if (index < 0 || index >= static_cast<int>(t->value.histogram.size())) {
    return ANN_ERR_DOMAIN;
  }
  auto it = t->value.histogram.begin();
  std::advance(it, index);
  *n_c = it->first;
  *count = it->second;
  return ANN_OK;
}

ann_status ann_wilson_interval(uint64_t successes, uint64_t trials,
                               double confidence, double* center,
                               double* half_width) {
  if (!center || !half_width) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    annulus::WilsonInterval w = annulus::wilson_interval(successes, trials, confidence);
    *center = w.center;
    *half_width = w.half_width;
  });
}

ann_status ann_compare(const ann_trials* t, int n_max, double confidence,
                       ann_truncation trunc, ann_report** out) {
  if (!t || !out) return ANN_ERR_ARGUMENT;
  return guarded([&] {
    *out = new ann_report{annulus::compare(t->value, n_max, confidence, to_core(trunc))};
  });
}

void ann_report_destroy(ann_report* r) { delete r; }
int ann_report_rows(const ann_report* r) {
  return static_cast<int>(r->value.rows.size());
}
double ann_report_rho_effective(const ann_report* r) {
  return r->value.rho_effective;
}

const char* ann_report_name(const ann_report* r, int row) {
  if (row < 0 || row >= static_cast<int>(r->value.rows.size())) return "";
  return r->value.rows[static_cast<std::size_t>(row)].name.c_str();
}
double ann_report_exact(const ann_report* r, int row) {
  return r->value.rows.at(static_cast<std::size_t>(row)).exact;
}
double ann_report_estimate(const ann_report* r, int row) {
  return r->value.rows.at(static_cast<std::size_t>(row)).estimate;
}
double ann_report_half_width(const ann_report* r, int row) {
  return r->value.rows.at(static_cast<std::size_t>(row)).half_width;
}
double ann_report_z_score(const ann_report* r, int row) {
  return r->value.rows.at(static_cast<std::size_t>(row)).z_score;
}
int ann_report_low_statistics(const ann_report* r, int row) {
  return r->value.rows.at(static_cast<std::size_t>(row)).low_statistics ? 1 : 0;
}

}  // extern "C"

/* annulus: exact scaling-limit crossing formulas for critical percolation
 * in an annulus, plus a Monte Carlo verifier on the triangular lattice.
 *
 * C API. All functions return ann_status; results go through out
 * parameters. Handles are opaque and must be released with the matching
 * _destroy function. The library keeps no global state; handles may be
 * used concurrently from multiple threads as long as each handle is not
 * destroyed while in use.
 */
#ifndef ANNULUS_H
#define ANNULUS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ann_status {
  ANN_OK = 0,
  ANN_ERR_DOMAIN = 1,     /* argument outside its stated domain */
  ANN_ERR_TRUNCATION = 2, /* series failed to converge within max_terms */
  ANN_ERR_OVERFLOW = 3,   /* exact integer result does not fit int64 */
  ANN_ERR_RESOURCE = 4,   /* allocation failure */
  ANN_ERR_ARGUMENT = 5    /* null handle or out pointer */
} ann_status;

/* Static description of a status code. */
const char *ann_status_message(ann_status status);

/* Series truncation policy shared by every evaluation below.
 * abs_tol must be > 0, max_terms >= 1. Pass ann_default_truncation()
 * unless you need something else. */
typedef struct ann_truncation {
  double abs_tol;
  int64_t max_terms;
} ann_truncation;

ann_truncation ann_default_truncation(void); /* {1e-15, 10000} */

/* ---- annulus modulus ---------------------------------------------- */

/* Geometry parameter rho = L/l of the periodic rectangle, with both
 * nomes q_tilde = exp(-2*pi*rho) and q = exp(-pi/rho). */
typedef struct ann_modulus ann_modulus;

ann_status ann_modulus_create(double rho, ann_modulus **out);
void ann_modulus_destroy(ann_modulus *m);
double ann_modulus_rho(const ann_modulus *m);
double ann_modulus_q_tilde(const ann_modulus *m);
double ann_modulus_q(const ann_modulus *m);

/* ---- exact formulas ----------------------------------------------- */

/* Equivalent closed forms of the crossing probability. AUTO selects
 * the q_tilde series for rho >= 1/2 and the q series otherwise. */
typedef enum ann_form {
  ANN_FORM_X1 = 0,      /* q_tilde theta-quotient */
  ANN_FORM_X2 = 1,      /* conjugate-modulus q theta-quotient */
  ANN_FORM_X3A = 2,     /* eta quotient in q_tilde */
  ANN_FORM_X3B = 3,     /* eta quotient in q */
  ANN_FORM_LOOPGAS = 4, /* loop-gas partition-function combination */
  ANN_FORM_AUTO = 5
} ann_form;

/* P(at least one spanning cluster) = sum over N_c >= 1 of P(N_c). */
ann_status ann_crossing_probability(const ann_modulus *m, ann_form form,
                                    ann_truncation trunc, double *out);

/* P(exactly n_c spanning clusters), n_c >= 1. When the value underflows
 * double precision the result is exactly 0 and *underflowed is set; use
 * ann_log_p_exact to inspect the tail. underflowed may be NULL. */
ann_status ann_p_exact(const ann_modulus *m, int n_c, ann_truncation trunc,
                       double *out, int *underflowed);

/* Natural log of P(n_c), computed in log space (finite far past the
 * point where P itself underflows). */
ann_status ann_log_p_exact(const ann_modulus *m, int n_c,
                           ann_truncation trunc, double *out);

/* Integer coefficient A_s(n_c) of the P(N_c) series, exact.
 * Fails with ANN_ERR_OVERFLOW if the value does not fit int64, and with
 * ANN_ERR_DOMAIN for n_c + s > 64. */
ann_status ann_a_coefficient(int n_c, int s, int64_t *out);

/* One-term approximation 3^(n_c-1/2) * q_tilde^((4 n_c^2 - 1)/12). */
ann_status ann_leading_order_pn(const ann_modulus *m, int n_c, double *out);

/* Full distribution P(0..n_max). P(0) is defined by complement against
 * the crossing probability; tail_bound is the magnitude of the first
 * omitted term P(n_max + 1). */
typedef struct ann_distribution ann_distribution;

ann_status ann_distribution_create(const ann_modulus *m, int n_max,
                                   ann_truncation trunc,
                                   ann_distribution **out);
void ann_distribution_destroy(ann_distribution *d);
int ann_distribution_n_max(const ann_distribution *d);
double ann_distribution_p(const ann_distribution *d, int n_c);
double ann_distribution_tail_bound(const ann_distribution *d);

/* E[N_c] = sum over n_c >= 1 of n_c * P(n_c). */
ann_status ann_mean_spanning_clusters(const ann_modulus *m,
                                      ann_truncation trunc, double *out);

/* O(1)-model crossing probability (odd spanning-hull counts included). */
ann_status ann_o1_crossing_probability(const ann_modulus *m,
                                       ann_truncation trunc, double *out);

/* Partition function Z_{+-} with opposite fixed boundary conditions;
 * satisfies Z_{+-} + o1_crossing = 1. */
ann_status ann_z_plus_minus(const ann_modulus *m, ann_truncation trunc,
                            double *out);

/* Loop-gas generating-function value at boundary angle chi_prime:
 * (1/2) Z(pi/6, 3*chi_prime) in the q_tilde theta form, normalized so
 * that Z(pi/18) - Z(5*pi/18) = 1/2 (the odd-hull sum rule). */
ann_status ann_loop_gas_partition(const ann_modulus *m, double chi_prime,
                                  ann_truncation trunc, double *out);

/* Spanning-hull fugacity u = cos(3*chi_prime) / cos(pi/6). */
ann_status ann_fugacity_from_angle(double chi_prime, double *u);

/* Inverse map: real and imaginary parts of exp(3*i*chi_prime) on the
 * branch with 3*chi_prime in [0, pi]. Requires |u| <= 2/sqrt(3). */
ann_status ann_angle_factor_from_fugacity(double u, double *re, double *im);

/* ---- triangular-lattice Monte Carlo ------------------------------- */

/* Triangular annulus lattice: cols distinct half-spaced columns of the
 * staggered triangular picture (x-periodic), rows rows; the sites form
 * a rows x (cols/2) sheared grid. Realizes aspect ratio
 * rho_effective = (rows-1)*sqrt(3)/cols. */
typedef struct ann_geometry ann_geometry;

/* cols must be even and >= 4; rows = round(rho*cols/sqrt(3)) + 1.
 * Fails with ANN_ERR_DOMAIN if the requested rho is unreachable
 * (rows would clamp below 2). */
ann_status ann_geometry_create(double rho, int cols, ann_geometry **out);
void ann_geometry_destroy(ann_geometry *g);
int ann_geometry_rows(const ann_geometry *g);
int ann_geometry_cols(const ann_geometry *g);
/* Number of stored sites, rows * cols / 2. */
int ann_geometry_cells(const ann_geometry *g);
double ann_geometry_rho_effective(const ann_geometry *g);

/* One sampled two-coloring: cells[row*(cols/2) + site] = 1 for blue, 0
 * for red, each blue with probability 1/2. Fully determined by (seed,
 * cell index) via splitmix64, identical on every platform. cells must
 * hold rows*cols/2 bytes. */
ann_status ann_sample_coloring(const ann_geometry *g, uint64_t seed,
                               uint8_t *cells);

/* Number of distinct blue clusters touching both the bottom and the top
 * row, excluding any cluster that also wraps the periodic x-direction.
 * *wrap_excluded reports whether such an exclusion occurred. */
ann_status ann_count_spanning(const ann_geometry *g, const uint8_t *cells,
                              int *n_spanning, int *wrap_excluded);

/* Histogram of spanning-cluster counts over independent trials.
 * Trial t uses the t-th element of the splitmix64 stream seeded with
 * master_seed, so the histogram is bit-identical for any worker count. */
typedef struct ann_trials ann_trials;

ann_status ann_run_trials(const ann_geometry *g, uint64_t trials,
                          uint64_t master_seed, int workers,
                          ann_trials **out);
void ann_trials_destroy(ann_trials *t);
uint64_t ann_trials_count(const ann_trials *t);
uint64_t ann_trials_master_seed(const ann_trials *t);
int ann_trials_histogram_size(const ann_trials *t);
ann_status ann_trials_histogram_entry(const ann_trials *t, int index,
                                      int *n_c, uint64_t *count);

/* ---- statistics --------------------------------------------------- */

/* Wilson score interval for a binomial proportion. */
ann_status ann_wilson_interval(uint64_t successes, uint64_t trials,
                               double confidence, double *center,
                               double *half_width);

/* Exact-vs-empirical comparison: one row per observable (crossing
 * probability, P(1)..P(n_max), E[N_c]), exact values evaluated at the
 * geometry's rho_effective. Rows with expected event count below 25 are
 * flagged as having insufficient statistics. */
typedef struct ann_report ann_report;

ann_status ann_compare(const ann_trials *t, int n_max, double confidence,
                       ann_truncation trunc, ann_report **out);
void ann_report_destroy(ann_report *r);
int ann_report_rows(const ann_report *r);
double ann_report_rho_effective(const ann_report *r);
/* Returned string is owned by the report handle. */
const char *ann_report_name(const ann_report *r, int row);
double ann_report_exact(const ann_report *r, int row);
double ann_report_estimate(const ann_report *r, int row);
double ann_report_half_width(const ann_report *r, int row);
double ann_report_z_score(const ann_report *r, int row);
int ann_report_low_statistics(const ann_report *r, int row);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ANNULUS_H */

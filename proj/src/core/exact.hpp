// Closed-form scaling-limit results for spanning clusters in an
// annulus: crossing probabilities in equivalent theta/eta forms, the
// full distribution of the spanning-cluster count, the O(1)-model
// quantities and the loop-gas partition function.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "core/series.hpp"

namespace annulus {

// Geometry parameter rho = L/l together with both nomes. At extreme
// rho one of the nomes may underflow to exactly 0 (the limit value);
// operations handle that limit analytically. A nome that would round to
// 1.0 is rejected by make_modulus.
struct AnnulusModulus {
  double rho;
  double q_tilde;  // exp(-2 pi rho)
  double q;        // exp(-pi / rho)
};

AnnulusModulus make_modulus(double rho);

enum class CrossingForm {
  X1,       // q_tilde theta quotient
  X2,       // conjugate-modulus q theta quotient
  X3a,      // eta quotient, q_tilde side
  X3b,      // eta quotient, q side
  LoopGas,  // partition-function combination
  Auto      // X1 for rho >= 1/2, X2 otherwise
};

// P(at least one spanning cluster).
double crossing_probability(const AnnulusModulus& m, CrossingForm form,
                            const Truncation& trunc);

// Exact integer coefficient A_s(n_c); requires n_c >= 1, s >= 0 and
// n_c + s <= 64.
boost::multiprecision::cpp_int a_coefficient(int n_c, int s);

// a_coefficient narrowed to int64; throws OverflowError if it does not fit.
int64_t a_coefficient_i64(int n_c, int s);

struct PExactResult {
  double value = 0.0;
  bool underflowed = false;  // value is exactly 0 because the leading
                             // term underflows double precision
};

// P(exactly n_c spanning clusters), n_c >= 1.
PExactResult p_exact(int n_c, const AnnulusModulus& m, const Truncation& trunc);

// ln P(n_c), computed in log space; finite far past the underflow point.
double log_p_exact(int n_c, const AnnulusModulus& m, const Truncation& trunc);

// One-term approximation 3^(n_c - 1/2) q_tilde^((4 n_c^2 - 1)/12).
double leading_order_pn(int n_c, const AnnulusModulus& m);

struct CrossingDistribution {
  std::vector<double> p;  // index N_c = 0 .. n_max
  double tail_bound = 0.0;
  double rho = 0.0;
};

// P(0..n_max); P(0) by complement against the crossing probability,
// tail_bound the magnitude of the first omitted P(n_max + 1).
CrossingDistribution distribution(const AnnulusModulus& m, int n_max,
                                  const Truncation& trunc);

// E[N_c].
double mean_spanning_clusters(const AnnulusModulus& m, const Truncation& trunc);

// Crossing probability of the O(1) model (odd hull counts included).
double o1_crossing_probability(const AnnulusModulus& m, const Truncation& trunc);

// Z_{+-}; satisfies z_plus_minus + o1_crossing_probability = 1.
double z_plus_minus(const AnnulusModulus& m, const Truncation& trunc);

// Loop-gas generating-function value at boundary angle chi_prime,
// normalized so that Z(pi/18) - Z(5 pi/18) = 1/2 and
// 2 (Z(pi/18) + Z(5 pi/18) - 2 Z(pi/6)) = crossing probability.
double loop_gas_partition(double chi_prime, const AnnulusModulus& m,
                          const Truncation& trunc);

// Spanning-hull fugacity u = cos(3 chi_prime) / cos(pi/6).
double fugacity_from_angle(double chi_prime);

struct AngleFactor {
  double re;  // cos(3 chi_prime)
  double im;  // sin(3 chi_prime)
};

// Inverse of fugacity_from_angle on the branch 3 chi_prime in [0, pi];
// requires |u| <= 2/sqrt(3).
AngleFactor angle_factor_from_fugacity(double u);

}  // namespace annulus

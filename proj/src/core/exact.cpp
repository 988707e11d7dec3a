#include "core/exact.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace annulus {
namespace {

using boost::multiprecision::cpp_int;

constexpr double kPi = std::numbers::pi;
const double kLogDblMin = std::log(std::numeric_limits<double>::min());

double sqrt3() { return std::numbers::sqrt3; }

// ln eta as a function of ln(nome); valid even when the nome itself
// underflows (the product factor is then exactly 1).
double log_eta(double log_nome, const Truncation& trunc) {
  double prod = 0.0;
  double nome = std::exp(log_nome);
  if (nome > 0.0) prod = log_euler_product(Nome(nome), 1, trunc);
  return log_nome / 24.0 + prod;
}

double theta_quotient_qt(const AnnulusModulus& m, const Truncation& trunc) {
  Nome qt(m.q_tilde);
  double num = bilateral_sum({{12}, {4}, {1, 4}}, qt, trunc) -
               bilateral_sum({{12}, {8}, {5, 4}}, qt, trunc);
  double den = bilateral_sum({{12}, {2}, {0}}, qt, trunc) -
               bilateral_sum({{12}, {10}, {2}}, qt, trunc);
  return sqrt3() * num / den;
}

double theta_quotient_q(const AnnulusModulus& m, const Truncation& trunc) {
  Nome q(m.q);
  double s1 = bilateral_sum({{6}, {1}, {0}}, q, trunc);
  double s2 = bilateral_sum({{6}, {5}, {1}}, q, trunc);
  double s3 = bilateral_sum({{6}, {3}, {1, 3}}, q, trunc);
  return (s1 + s2 - 2.0 * s3) / (s1 - s2);
}

double eta_quotient_qt(const AnnulusModulus& m, const Truncation& trunc) {
  double lq = -2.0 * kPi * m.rho;  // ln q_tilde
  double log_value = log_eta(lq, trunc) + 2.0 * log_eta(6.0 * lq, trunc) -
                     log_eta(3.0 * lq, trunc) - 2.0 * log_eta(2.0 * lq, trunc);
  return sqrt3() * std::exp(log_value);
}

double eta_quotient_q(const AnnulusModulus& m, const Truncation& trunc) {
  double lq = -kPi / m.rho;  // ln q
  double log_value = log_eta(2.0 * lq, trunc) + 2.0 * log_eta(lq / 3.0, trunc) -
                     log_eta(2.0 * lq / 3.0, trunc) - 2.0 * log_eta(lq, trunc);
  return std::exp(log_value);
}

// The combination Z(pi/18) + Z(5 pi/18) - 2 Z(pi/6) evaluated term by
// term in p, so the large cancelling p = 0 contributions never appear.
double loop_gas_combination(const AnnulusModulus& m, const Truncation& trunc) {
  Nome qt(m.q_tilde);
  const double angles[3] = {kPi / 6.0, 5.0 * kPi / 6.0, kPi / 2.0};

  double sum = 0.0;
  double comp = 0.0;
  auto add = [&](double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  };

  auto weight = [&](int64_t p) {
    double d = static_cast<double>(p);
    return std::cos(angles[0] * d) + std::cos(angles[1] * d) -
           2.0 * std::cos(angles[2] * d);
  };
  auto power = [&](int64_t p) {
    double e = (static_cast<double>(p * p) - 1.0) / 12.0;
    double lt = e * qt.log();
    return lt < kLogDblMin ? 0.0 : std::exp(lt);
  };

  add(weight(0) * power(0));
  for (int64_t p = 1;; ++p) {
    if (p > trunc.max_terms) {
      throw TruncationError("loop-gas combination did not converge");
    }
    double mag = power(p);
    add(2.0 * weight(p) * mag);
    if (p >= 2 && mag < trunc.abs_tol) break;
  }
  double theta = sum + comp;
  return theta / (2.0 * sqrt3() * euler_product(qt, 2, trunc));
}

}  // namespace

AnnulusModulus make_modulus(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("rho must be positive and finite");
  }
  double q_tilde = std::exp(-2.0 * kPi * rho);
  double q = std::exp(-kPi / rho);
  if (q_tilde >= 1.0 || q >= 1.0) {
    throw DomainError("rho too extreme: a nome rounds to 1 in double precision");
  }
  return {rho, q_tilde, q};
}

double crossing_probability(const AnnulusModulus& m, CrossingForm form,
                            const Truncation& trunc) {
  trunc.validate();
  if (form == CrossingForm::Auto) {
    form = m.rho >= 0.5 ? CrossingForm::X1 : CrossingForm::X2;
  }
  switch (form) {
    case CrossingForm::X1:
      if (m.q_tilde == 0.0) return 0.0;
      return theta_quotient_qt(m, trunc);
    case CrossingForm::X2:
      if (m.q == 0.0) return 1.0;  // q -> 0 limit: 1 - 2 q^(1/3) + O(q)
      return theta_quotient_q(m, trunc);
    case CrossingForm::X3a:
      return eta_quotient_qt(m, trunc);
    case CrossingForm::X3b:
      if (m.q == 0.0) return 1.0;
      return eta_quotient_q(m, trunc);
    case CrossingForm::LoopGas:
      if (m.q_tilde == 0.0) return 0.0;
      return loop_gas_combination(m, trunc);
    default:
      throw DomainError("unknown crossing form");
  }
}

cpp_int a_coefficient(int n_c, int s) {
  if (n_c < 1 || s < 0) throw DomainError("a_coefficient requires n_c >= 1, s >= 0");
  if (n_c + s > 64) throw DomainError("a_coefficient limited to n_c + s <= 64");

  auto binom = [](int n, int k) {
    if (k < 0 || k > n) return cpp_int(0);
    cpp_int result = 1;
    for (int i = 1; i <= k; ++i) {
      result *= (n - k + i);
      result /= i;
    }
    return result;
  };

  cpp_int sum = 0;
  for (int r = s; r <= n_c + s; ++r) {
    sum += binom(r, s) * binom(2 * n_c + 2 * s, 2 * r);
  }
  return (s & 1) ? -sum : sum;
}

int64_t a_coefficient_i64(int n_c, int s) {
  cpp_int value = a_coefficient(n_c, s);
  if (value > std::numeric_limits<int64_t>::max() ||
      value < std::numeric_limits<int64_t>::min()) {
    throw OverflowError("A_s(n_c) does not fit a 64-bit integer");
  }
  return value.convert_to<int64_t>();
}

namespace {

// ln P(n_c) split as log_prefactor + leading_exponent*ln(q_tilde) +
// ln(relative s-sum). Returns -inf when q_tilde has underflowed.
double log_p_exact_impl(int n_c, const AnnulusModulus& m, const Truncation& trunc) {
  if (n_c < 1) throw DomainError("p_exact requires n_c >= 1");
  if (n_c > 63) throw DomainError("p_exact limited to n_c <= 63");
  trunc.validate();
  if (m.q_tilde == 0.0) return -std::numeric_limits<double>::infinity();

  Nome qt(m.q_tilde);
  double log_pref = (n_c - 0.5) * std::log(3.0) -
                    (2.0 * n_c - 1.0) * std::log(2.0) -
                    log_euler_product(qt, 2, trunc);
  // Leading exponent (n_c + 0)^2/3 - 1/12 = (4 n_c^2 - 1)/12, exact rational.
  double lead = static_cast<double>(4 * n_c * n_c - 1) / 12.0;

  // Relative terms A_s * q_tilde^((2 n_c s + s^2)/3); alternating signs,
  // so the stopping rule requires two consecutive small terms.
  double sum = 0.0;
  double comp = 0.0;
  int small_streak = 0;
  for (int s = 0;; ++s) {
    if (n_c + s > 64) {
      throw TruncationError("p_exact s-series hit the coefficient-width cap");
    }
    double rel_exp = static_cast<double>(2 * n_c * s + s * s) / 3.0;
    double lt = rel_exp * qt.log();
    double mag = lt < kLogDblMin ? 0.0 : std::exp(lt);
    double term = a_coefficient(n_c, s).convert_to<double>() * mag;
    double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
    double partial = std::abs(sum + comp);
    if (s > 0 && std::abs(term) < trunc.abs_tol * std::max(partial, 1e-300)) {
      if (++small_streak >= 2) break;
    } else {
      small_streak = 0;
    }
  }
  double rel_sum = sum + comp;
  if (!(rel_sum > 0.0)) {
    throw TruncationError("p_exact s-series lost all significance");
  }
  return log_pref + lead * qt.log() + std::log(rel_sum);
}

}  // namespace

PExactResult p_exact(int n_c, const AnnulusModulus& m, const Truncation& trunc) {
  double lp = log_p_exact_impl(n_c, m, trunc);
  if (lp < kLogDblMin) return {0.0, true};
  return {std::exp(lp), false};
}

double log_p_exact(int n_c, const AnnulusModulus& m, const Truncation& trunc) {
  return log_p_exact_impl(n_c, m, trunc);
}

double leading_order_pn(int n_c, const AnnulusModulus& m) {
  if (n_c < 1) throw DomainError("leading_order_pn requires n_c >= 1");
  double lead = static_cast<double>(4 * n_c * n_c - 1) / 12.0;
  double lt = lead * (-2.0 * kPi * m.rho);
  double power = lt < kLogDblMin ? 0.0 : std::exp(lt);
  return std::pow(3.0, n_c - 0.5) * power;
}

CrossingDistribution distribution(const AnnulusModulus& m, int n_max,
                                  const Truncation& trunc) {
  if (n_max < 1 || n_max > 62) throw DomainError("distribution requires 1 <= n_max <= 62");
  CrossingDistribution d;
  d.rho = m.rho;
  d.p.resize(n_max + 1);
  double crossing = crossing_probability(m, CrossingForm::Auto, trunc);
  d.p[0] = 1.0 - crossing;
  for (int n = 1; n <= n_max; ++n) {
    d.p[n] = p_exact(n, m, trunc).value;
  }
  d.tail_bound = p_exact(n_max + 1, m, trunc).value;
  return d;
}

double mean_spanning_clusters(const AnnulusModulus& m, const Truncation& trunc) {
  trunc.validate();
  double sum = 0.0;
  for (int n = 1; n <= 63; ++n) {
    PExactResult p = p_exact(n, m, trunc);
    if (p.underflowed) break;
    double term = n * p.value;
    sum += term;
    if (n > 1 && term < trunc.abs_tol * std::max(sum, 1e-300)) break;
  }
  return sum;
}

double o1_crossing_probability(const AnnulusModulus& m, const Truncation& trunc) {
  trunc.validate();
  if (m.q == 0.0) return 1.0;
  if (m.rho >= 0.5) {
    // q-series converges slowly here; use the hull-parity decomposition
    // (odd counts carry total probability 1/2 at every modulus).
    return 0.5 + 0.5 * crossing_probability(m, CrossingForm::X1, trunc);
  }
  Nome q(m.q);
  double num = bilateral_sum({{6}, {1}, {0}}, q, trunc) -
               bilateral_sum({{6}, {3}, {1, 3}}, q, trunc);
  return num / euler_product(q, 1, trunc);
}

double z_plus_minus(const AnnulusModulus& m, const Truncation& trunc) {
  trunc.validate();
  if (m.q == 0.0) return 0.0;
  if (m.rho >= 0.5) {
    return 0.5 - 0.5 * crossing_probability(m, CrossingForm::X1, trunc);
  }
  Nome q(m.q);
  double num = bilateral_sum({{6}, {3}, {1, 3}}, q, trunc) -
               bilateral_sum({{6}, {5}, {1}}, q, trunc);
  return num / euler_product(q, 1, trunc);
}

double loop_gas_partition(double chi_prime, const AnnulusModulus& m,
                          const Truncation& trunc) {
  trunc.validate();
  if (!std::isfinite(chi_prime)) throw DomainError("chi_prime must be finite");
  if (m.q_tilde == 0.0) {
    throw DomainError("loop_gas_partition diverges in the q_tilde -> 0 limit");
  }
  Nome qt(m.q_tilde);
  double theta = cosine_bilateral_sum(3.0 * chi_prime, {-1, 12}, qt, trunc);
  return theta / (4.0 * sqrt3() * euler_product(qt, 2, trunc));
}

double fugacity_from_angle(double chi_prime) {
  if (!std::isfinite(chi_prime)) throw DomainError("chi_prime must be finite");
  return std::cos(3.0 * chi_prime) / std::cos(kPi / 6.0);
}

AngleFactor angle_factor_from_fugacity(double u) {
  double half = sqrt3() * u / 2.0;  // cos(3 chi')
  if (!std::isfinite(u) || std::abs(half) > 1.0 + 1e-12) {
    throw DomainError("fugacity outside the branch domain |u| <= 2/sqrt(3)");
  }
  double re = std::clamp(half, -1.0, 1.0);
  return {re, std::sqrt(std::max(0.0, 1.0 - re * re))};
}

}  // namespace annulus

#include <cmath>
#include <numbers>
#include <vector>

#include "core/exact.hpp"
#include "doctest.h"

using namespace annulus;

namespace {
const Truncation kDefault{};
constexpr double kPi = std::numbers::pi;

// Reference values frozen from high-precision evaluation of the series.
constexpr double kCrossingRho1 = 0.35938685373191088;
constexpr double kP1Rho1 = 0.35736985505168870;
constexpr double kP2Rho1 = 2.0168273075160297e-3;
constexpr double kP3Rho1 = 1.7137248535876715e-7;
constexpr double kMeanRho1 = 0.36140402378505999;
constexpr double kCrossingRho5 = 6.7238767286216576e-4;
constexpr double kCrossingRho005 = 0.99999999839606178;

const CrossingForm kAllForms[] = {CrossingForm::X1, CrossingForm::X2,
                                  CrossingForm::X3a, CrossingForm::X3b,
                                  CrossingForm::LoopGas};
}  // namespace

TEST_CASE("make_modulus computes both nomes") {
  AnnulusModulus m = make_modulus(1.0);
  CHECK(m.q_tilde == doctest::Approx(std::exp(-2.0 * kPi)).epsilon(1e-15));
  CHECK(m.q == doctest::Approx(std::exp(-kPi)).epsilon(1e-15));
  // Conjugate-moduli relation ln(q_tilde) ln(q) = 2 pi^2.
  for (double rho : {0.2, 0.7, 1.0, 3.3}) {
    AnnulusModulus mm = make_modulus(rho);
    CHECK(std::log(mm.q_tilde) * std::log(mm.q) ==
          doctest::Approx(2.0 * kPi * kPi).epsilon(1e-12));
  }
}

TEST_CASE("conjugate-moduli crossover at rho = 1/2") {
  CHECK(make_modulus(0.5).q_tilde ==
        doctest::Approx(make_modulus(1.0).q).epsilon(1e-15));
}

TEST_CASE("make_modulus boundary behavior") {
  AnnulusModulus tiny = make_modulus(1e-9);
  CHECK(tiny.q_tilde < 1.0);
  CHECK(tiny.q_tilde > 1.0 - 1e-8);
  CHECK(tiny.q == 0.0);  // underflowed limit, handled analytically

  CHECK_THROWS_AS(make_modulus(0.0), DomainError);
  CHECK_THROWS_AS(make_modulus(-1.0), DomainError);
  CHECK_THROWS_AS(make_modulus(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(make_modulus(std::nan("")), DomainError);
}

TEST_CASE("crossing probability, five equivalent forms") {
  for (double rho : {0.2, 0.5, 1.0, 2.0, 5.0}) {
    AnnulusModulus m = make_modulus(rho);
    std::vector<double> values;
    for (CrossingForm f : kAllForms) {
      values.push_back(crossing_probability(m, f, kDefault));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        CHECK(values[i] == doctest::Approx(values[j]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("crossing probability reference points") {
  AnnulusModulus m1 = make_modulus(1.0);
  for (CrossingForm f : kAllForms) {
    CHECK(crossing_probability(m1, f, kDefault) ==
          doctest::Approx(kCrossingRho1).epsilon(1e-13));
  }
  CHECK(crossing_probability(make_modulus(5.0), CrossingForm::Auto, kDefault) ==
        doctest::Approx(kCrossingRho5).epsilon(1e-12));
  CHECK(crossing_probability(make_modulus(0.05), CrossingForm::Auto, kDefault) ==
        doctest::Approx(kCrossingRho005).epsilon(1e-12));
}

TEST_CASE("crossing probability is monotone decreasing in rho") {
  double prev = 2.0;
  for (int i = 0; i <= 40; ++i) {
    double rho = std::pow(10.0, -1.0 + 2.0 * i / 40.0);  // 0.1 .. 10
    double v = crossing_probability(make_modulus(rho), CrossingForm::Auto, kDefault);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(crossing_probability(make_modulus(0.05), CrossingForm::Auto, kDefault) >
        1.0 - 1e-8);
  CHECK(crossing_probability(make_modulus(10.0), CrossingForm::Auto, kDefault) < 1e-6);
}

TEST_CASE("A coefficients") {
  CHECK(a_coefficient_i64(1, 0) == 2);
  CHECK(a_coefficient_i64(1, 1) == -8);
  CHECK(a_coefficient_i64(3, 0) == 32);

  // A_0(N) = 2^(2N-1), exact integer identity up to N = 20.
  for (int n = 1; n <= 20; ++n) {
    CHECK(a_coefficient(n, 0) == boost::multiprecision::pow(
                                     boost::multiprecision::cpp_int(2), 2 * n - 1));
  }
  // Sign alternates with s.
  for (int n = 1; n <= 6; ++n) {
    for (int s = 0; s <= 8; ++s) {
      boost::multiprecision::cpp_int a = a_coefficient(n, s);
      CHECK(((s % 2 == 0) ? a > 0 : a < 0));
    }
  }
}

TEST_CASE("A coefficient overflow is detected, not wrapped") {
  CHECK_NOTHROW(a_coefficient_i64(31, 0));       // 2^61 fits
  CHECK_THROWS_AS(a_coefficient_i64(32, 0), OverflowError);  // 2^63 does not
  CHECK_THROWS_AS(a_coefficient(33, 32), DomainError);       // beyond width cap
  CHECK_THROWS_AS(a_coefficient(0, 0), DomainError);
  CHECK_THROWS_AS(a_coefficient(1, -1), DomainError);
}

TEST_CASE("p_exact reproduces the published reference digits") {
  AnnulusModulus m = make_modulus(1.0);
  CHECK(p_exact(1, m, kDefault).value == doctest::Approx(kP1Rho1).epsilon(1e-12));
  CHECK(p_exact(2, m, kDefault).value == doctest::Approx(kP2Rho1).epsilon(1e-12));
  CHECK(p_exact(3, m, kDefault).value == doctest::Approx(kP3Rho1).epsilon(1e-12));
}

TEST_CASE("p_exact tail agrees with the crossing probability") {
  AnnulusModulus m = make_modulus(1.0);
  double tail = 0.0;
  for (int n = 2; n <= 10; ++n) tail += p_exact(n, m, kDefault).value;
  double p1_by_subtraction =
      crossing_probability(m, CrossingForm::X1, kDefault) - tail;
  CHECK(p_exact(1, m, kDefault).value ==
        doctest::Approx(p1_by_subtraction).epsilon(1e-10));
}

TEST_CASE("p_exact underflow semantics") {
  AnnulusModulus m = make_modulus(1.0);
  PExactResult r = p_exact(40, m, kDefault);
  CHECK(r.value == 0.0);
  CHECK(r.underflowed);
  double lp = log_p_exact(40, m, kDefault);
  CHECK(std::isfinite(lp));
  CHECK(lp < std::log(std::numeric_limits<double>::min()));
  // log accessor agrees with the direct value where both exist
  CHECK(log_p_exact(2, m, kDefault) ==
        doctest::Approx(std::log(kP2Rho1)).epsilon(1e-12));
}

TEST_CASE("leading-order approximation") {
  AnnulusModulus m = make_modulus(1.0);
  CHECK(leading_order_pn(1, m) ==
        doctest::Approx(std::sqrt(3.0) * std::exp(-kPi / 2.0)).epsilon(1e-14));
  // Shchur comparison digits come from the one-term form already.
  CHECK(leading_order_pn(2, m) == doctest::Approx(2.02e-3).epsilon(5e-3));
  CHECK(leading_order_pn(3, m) == doctest::Approx(1.71e-7).epsilon(5e-3));

  // Dominance of the first term at rho = 1.
  CHECK(std::abs(p_exact(1, m, kDefault).value - leading_order_pn(1, m)) /
            p_exact(1, m, kDefault).value <
        0.01);
  CHECK(std::abs(p_exact(2, m, kDefault).value - leading_order_pn(2, m)) /
            p_exact(2, m, kDefault).value <
        0.001);
}

TEST_CASE("distribution at rho = 1") {
  CrossingDistribution d = distribution(make_modulus(1.0), 3, kDefault);
  REQUIRE(d.p.size() == 4);
  CHECK(d.p[0] == doctest::Approx(1.0 - kCrossingRho1).epsilon(1e-12));
  CHECK(d.p[1] == doctest::Approx(kP1Rho1).epsilon(1e-12));
  CHECK(d.p[2] == doctest::Approx(kP2Rho1).epsilon(1e-12));
  CHECK(d.p[3] == doctest::Approx(kP3Rho1).epsilon(1e-12));
  double total = d.p[0] + d.p[1] + d.p[2] + d.p[3] + d.tail_bound;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("distribution in the thin-annulus regime") {
  CrossingDistribution d = distribution(make_modulus(5.0), 2, kDefault);
  CHECK(d.p[0] == doctest::Approx(1.0 - kCrossingRho5).epsilon(1e-12));
  CHECK(d.tail_bound < 1e-20);
}

TEST_CASE("distribution at rho = 0.1 sums to one with interior mode") {
  CrossingDistribution d = distribution(make_modulus(0.1), 40, kDefault);
  double total = d.tail_bound;
  for (double p : d.p) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  int mode = 0;
  for (int n = 1; n <= 40; ++n) {
    if (d.p[n] > d.p[mode]) mode = n;
  }
  CHECK(mode == 4);  // near E[N_c] ~ sqrt(3)/4 * 10
}

TEST_CASE("distribution tail is strictly decreasing past the mode") {
  CrossingDistribution d = distribution(make_modulus(1.0), 6, kDefault);
  for (int n = 2; n <= 6; ++n) CHECK(d.p[n] < d.p[n - 1]);
}

TEST_CASE("mean spanning clusters") {
  CHECK(mean_spanning_clusters(make_modulus(1.0), kDefault) ==
        doctest::Approx(kMeanRho1).epsilon(1e-12));
  CHECK(mean_spanning_clusters(make_modulus(5.0), kDefault) ==
        doctest::Approx(kCrossingRho5).epsilon(1e-6));
  // Thick-annulus asymptote E[N_c] ~ (sqrt(3)/4)/rho.
  double ratio = mean_spanning_clusters(make_modulus(0.05), kDefault) * 0.05 * 4.0 /
                 std::sqrt(3.0);
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("O(1) model crossing probability") {
  AnnulusModulus m = make_modulus(1.0);
  double o1 = o1_crossing_probability(m, kDefault);
  double crossing = crossing_probability(m, CrossingForm::X1, kDefault);
  CHECK(o1 > crossing);  // odd hull counts are included
  // Parity decomposition: odd counts carry total probability 1/2, even
  // counts >= 2 carry crossing/2.
  CHECK(o1 == doctest::Approx(0.5 + 0.5 * crossing).epsilon(1e-12));

  // Both evaluation routes agree near the nome crossover.
  for (double rho : {0.42, 0.49}) {
    AnnulusModulus mm = make_modulus(rho);
    Nome q(mm.q);
    double direct = (bilateral_sum({{6}, {1}, {0}}, q, kDefault) -
                     bilateral_sum({{6}, {3}, {1, 3}}, q, kDefault)) /
                    euler_product(q, 1, kDefault);
    double via_parity =
        0.5 + 0.5 * crossing_probability(mm, CrossingForm::X1, kDefault);
    CHECK(direct == doctest::Approx(via_parity).epsilon(1e-12));
  }

  // rho -> infinity limit: only the odd-sum rule survives.
  CHECK(o1_crossing_probability(make_modulus(20.0), kDefault) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Z_{+-} complement identity") {
  for (double rho : {0.1, 0.3, 1.0, 3.0}) {
    AnnulusModulus m = make_modulus(rho);
    CHECK(z_plus_minus(m, kDefault) + o1_crossing_probability(m, kDefault) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Z_{+-} small-q expansion starts at h = 1/3") {
  AnnulusModulus m = make_modulus(2.0);
  double q13 = std::pow(m.q, 1.0 / 3.0);
  CHECK(std::abs(z_plus_minus(m, kDefault) - q13) < m.q);
}

TEST_CASE("Z_{+-} vanishes in the thick-annulus limit") {
  CHECK(z_plus_minus(make_modulus(0.05), kDefault) < 1e-6);
}

TEST_CASE("loop-gas partition function identities") {
  for (double rho : {0.3, 1.0, 3.0}) {
    AnnulusModulus m = make_modulus(rho);
    double za = loop_gas_partition(kPi / 18.0, m, kDefault);
    double zb = loop_gas_partition(5.0 * kPi / 18.0, m, kDefault);
    double zc = loop_gas_partition(kPi / 6.0, m, kDefault);
    // Odd-hull sum rule (pentagonal normalization).
    CHECK(za - zb == doctest::Approx(0.5).epsilon(1e-12));
    // Even-hull combination carries half the crossing probability.
    CHECK(2.0 * (za + zb - 2.0 * zc) ==
          doctest::Approx(crossing_probability(m, CrossingForm::X1, kDefault))
              .epsilon(1e-12));
  }
}

TEST_CASE("loop-gas n_c = 0 projector kills odd winding terms") {
  // At chi' = pi/6 the cosine weight vanishes for odd p; the sum over
  // even p only must reproduce the full value.
  AnnulusModulus m = make_modulus(1.0);
  double z = loop_gas_partition(kPi / 6.0, m, kDefault);
  double even_only = 0.0;
  for (int p = -40; p <= 40; p += 2) {
    even_only += std::cos(kPi / 2.0 * p) *
                 std::pow(m.q_tilde, (static_cast<double>(p) * p - 1.0) / 12.0);
  }
  even_only /= 4.0 * std::sqrt(3.0) * euler_product(Nome(m.q_tilde), 2, kDefault);
  CHECK(z == doctest::Approx(even_only).epsilon(1e-12));
}

TEST_CASE("fugacity map special angles") {
  CHECK(fugacity_from_angle(kPi / 18.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(fugacity_from_angle(kPi / 6.0)) < 1e-15);
  CHECK(fugacity_from_angle(5.0 * kPi / 18.0) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("angle factor inverse branch") {
  AngleFactor f = angle_factor_from_fugacity(1.0);
  CHECK(f.re * f.re + f.im * f.im == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::atan2(f.im, f.re) == doctest::Approx(kPi / 6.0).epsilon(1e-14));

  // Round trip forward(inverse(u)) = u on [-1, 1].
  for (int i = 0; i <= 20; ++i) {
    double u = -1.0 + 0.1 * i;
    AngleFactor g = angle_factor_from_fugacity(u);
    double chi_prime = std::atan2(g.im, g.re) / 3.0;
    CHECK(std::abs(fugacity_from_angle(chi_prime) - u) < 1e-14);
  }

  CHECK_THROWS_AS(angle_factor_from_fugacity(1.3), DomainError);  // > 2/sqrt(3)
  CHECK_NOTHROW(angle_factor_from_fugacity(2.0 / std::sqrt(3.0)));
}

#include <cmath>
#include <numbers>

#include "core/series.hpp"
#include "doctest.h"

using namespace annulus;

namespace {
const Truncation kDefault{};
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("nome domain") {
  CHECK_THROWS_AS(Nome(0.0), DomainError);
  CHECK_THROWS_AS(Nome(1.0), DomainError);
  CHECK_THROWS_AS(Nome(-0.5), DomainError);
  CHECK_THROWS_AS(Nome(std::nan("")), DomainError);
  CHECK(Nome(0.5).value() == 0.5);
}

TEST_CASE("bilateral sum small-nome limit keeps only r=0") {
  double v = bilateral_sum({{12}, {2}, {0}}, Nome(1e-8), kDefault);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("pentagonal number theorem") {
  for (double q : {0.01, 0.1, 0.3, 0.6, 0.9}) {
    Truncation t{1e-16, 100000};
    double lhs = bilateral_sum({{6}, {1}, {0}}, Nome(q), t) -
                 bilateral_sum({{6}, {5}, {1}}, Nome(q), t);
    double rhs = euler_product(Nome(q), 1, t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("bilateral sum at q_tilde = exp(-2 pi), leading term exp(-pi/2)") {
  double v = bilateral_sum({{12}, {4}, {1, 4}}, Nome(std::exp(-2.0 * kPi)), kDefault);
  CHECK(v == doctest::Approx(std::exp(-kPi / 2.0)).epsilon(1e-4));
  // Corrections beyond r = 0 are below 1e-4.
  CHECK(std::abs(v - std::exp(-kPi / 2.0)) < 1e-4);
}

TEST_CASE("alternating bilateral sum carries (-1)^r") {
  // sum (-1)^n q^(3n^2+2n+1/4) vs direct enumeration
  double q = 0.2;
  double direct = 0.0;
  for (int r = -20; r <= 20; ++r) {
    direct += ((r & 1) ? -1.0 : 1.0) * std::pow(q, 3.0 * r * r + 2.0 * r + 0.25);
  }
  QuadraticSeries s{{3}, {2}, {1, 4}, true};
  CHECK(bilateral_sum(s, Nome(q), kDefault) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("euler product basics") {
  CHECK(euler_product(Nome(1e-8), 1, kDefault) ==
        doctest::Approx(1.0 - 1e-8).epsilon(1e-15));

  // Dual-path: direct product vs exp(sum of log1p).
  double direct = euler_product(Nome(0.5), 2, kDefault);
  double via_log = std::exp(log_euler_product(Nome(0.5), 2, kDefault));
  CHECK(direct == doctest::Approx(via_log).epsilon(1e-13));
}

TEST_CASE("dedekind eta small-nome limit") {
  CHECK(dedekind_eta(Nome(1e-24), kDefault) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("dedekind eta at the modular fixed point tau = i") {
  // eta(i) = Gamma(1/4) / (2 pi^(3/4))
  double v = dedekind_eta(Nome(std::exp(-2.0 * kPi)), kDefault);
  CHECK(v == doctest::Approx(0.7682254223260566).epsilon(1e-12));
}

TEST_CASE("eta modular identity eta(2i) = eta(i/2)/sqrt(2)") {
  double lhs = dedekind_eta(Nome(std::exp(-4.0 * kPi)), kDefault);
  double rhs = dedekind_eta(Nome(std::exp(-kPi)), kDefault) / std::sqrt(2.0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("eta modular identity on a rho grid") {
  // eta at nome(i*rho) = rho^(-1/2) eta at nome(i/rho)
  for (double rho : {0.5, 1.0, 2.0, 4.0}) {
    double lhs = dedekind_eta(Nome(std::exp(-2.0 * kPi * rho)), kDefault);
    double rhs = dedekind_eta(Nome(std::exp(-2.0 * kPi / rho)), kDefault) /
                 std::sqrt(rho);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("positive bilateral sum is increasing in the nome") {
  QuadraticSeries s{{6}, {1}, {0}};
  double prev = 0.0;
  for (double q : {0.05, 0.1, 0.2, 0.4, 0.6, 0.8}) {
    double v = bilateral_sum(s, Nome(q), kDefault);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("truncation soundness: halving abs_tol moves results by < abs_tol") {
  QuadraticSeries s{{6}, {5}, {1}};
  for (double q : {0.1, 0.5, 0.9}) {
    double tol = 1e-6;
    double coarse = bilateral_sum(s, Nome(q), {tol, 100000});
    double fine = bilateral_sum(s, Nome(q), {tol / 2.0, 100000});
    CHECK(std::abs(coarse - fine) < tol);
  }
}

TEST_CASE("truncation cap raises") {
  CHECK_THROWS_AS(bilateral_sum({{1, 100}, {0}, {0}}, Nome(0.999), {1e-15, 10}),
                  TruncationError);
  CHECK_THROWS_AS(euler_product(Nome(0.999), 1, {1e-15, 5}), TruncationError);
}

TEST_CASE("truncation policy validation") {
  CHECK_THROWS_AS(bilateral_sum({{6}, {1}, {0}}, Nome(0.5), {0.0, 100}),
                  DomainError);
  CHECK_THROWS_AS(bilateral_sum({{6}, {1}, {0}}, Nome(0.5), {1e-15, 0}),
                  DomainError);
  CHECK_THROWS_AS(bilateral_sum({{-6}, {1}, {0}}, Nome(0.5), kDefault), DomainError);
}

// Numerically stable evaluation of the sparse quadratic-exponent sums
// and infinite products from which the exact annulus formulas are built.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace annulus {

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Series nome, strictly inside (0, 1). The limits 0 and 1 are never
// valid inputs.
class Nome {
 public:
  explicit Nome(double value);
  double value() const { return value_; }
  double log() const { return log_; }  // ln(value), cached, < 0

 private:
  double value_;
  double log_;
};

struct Truncation {
  double abs_tol = 1e-15;
  int64_t max_terms = 10000;

  void validate() const;
};

// Exact rational, just wide enough for the exponents that occur here
// (denominators 1, 3, 4, 12, 24).
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(int64_t n) : num(n), den(1) {}
  constexpr Rational(int64_t n, int64_t d) : num(n), den(d) {}
  double as_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Exponent polynomial a r^2 + b r + c with a > 0; each term of the
// bilateral sum is (+-) q^(a r^2 + b r + c), the sign alternating with
// r when `alternating` is set.
struct QuadraticSeries {
  Rational a;
  Rational b;
  Rational c;
  bool alternating = false;
};

// Sum over r in Z of (+-) q^(a r^2 + b r + c), accumulated r = 0, -1,
// +1, -2, +2, ... with compensated summation. Stops once both the r and
// -r terms fall below trunc.abs_tol.
double bilateral_sum(const QuadraticSeries& series, const Nome& nome,
                     const Truncation& trunc);

// Sum over p in Z of cos(omega * p) * q^((p^2 + exponent_offset_num/12)/12)
// -- concretely, of cos(omega * p) * q^(p^2/12 + offset) with offset an
// exact rational. Kernel for the loop-gas partition function.
double cosine_bilateral_sum(double omega, Rational offset, const Nome& nome,
                            const Truncation& trunc);

// Product over n >= 1 of (1 - q^(step*n)), truncated once the factor is
// within trunc.abs_tol of 1.
double euler_product(const Nome& nome, int step, const Truncation& trunc);

// ln of euler_product, accumulated as a sum of log1p terms.
double log_euler_product(const Nome& nome, int step, const Truncation& trunc);

// Dedekind eta as a function of the nome: q^(1/24) * prod(1 - q^n).
double dedekind_eta(const Nome& nome, const Truncation& trunc);

}  // namespace annulus

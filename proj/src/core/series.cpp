#include "core/series.hpp"

#include <cmath>
#include <limits>

namespace annulus {
namespace {

// Kahan-Neumaier compensated accumulator.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

// q^e via exp(e * ln q); exponents that would underflow the smallest
// normal magnitude contribute exactly 0.
double nome_pow(double exponent, const Nome& nome) {
  double logterm = exponent * nome.log();
  if (logterm < std::log(std::numeric_limits<double>::min())) return 0.0;
  return std::exp(logterm);
}

}  // namespace

Nome::Nome(double value) : value_(value) {
  if (!(value > 0.0) || !(value < 1.0) || !std::isfinite(value)) {
    throw DomainError("nome must lie strictly inside (0, 1)");
  }
  log_ = std::log(value);
}

void Truncation::validate() const {
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
    throw DomainError("truncation abs_tol must be positive");
  }
  if (max_terms < 1) throw DomainError("truncation max_terms must be >= 1");
}

double bilateral_sum(const QuadraticSeries& series, const Nome& nome,
                     const Truncation& trunc) {
  trunc.validate();
  if (series.a.num <= 0 || series.a.den <= 0) {
    throw DomainError("bilateral_sum requires a > 0");
  }

  // Exponent at integer r, carried as an exact rational until the final
  // conversion. Denominators here are at most 24, so no overflow for
  // any r the truncation cap admits.
  const auto exponent = [&](int64_t r) {
    Rational a = series.a, b = series.b, c = series.c;
    int64_t den = a.den * b.den * c.den;
    int64_t num = a.num * (b.den * c.den) * r * r + b.num * (a.den * c.den) * r +
                  c.num * (a.den * b.den);
    return static_cast<double>(num) / static_cast<double>(den);
  };

  Accumulator acc;
  acc.add(nome_pow(exponent(0), nome));
  for (int64_t r = 1;; ++r) {
    if (r > trunc.max_terms) {
      throw TruncationError("bilateral_sum did not converge within max_terms");
    }
    double sign = (series.alternating && (r & 1)) ? -1.0 : 1.0;
    double tp = nome_pow(exponent(r), nome);
    double tm = nome_pow(exponent(-r), nome);
    acc.add(sign * tm);
    acc.add(sign * tp);
    if (tp < trunc.abs_tol && tm < trunc.abs_tol) break;
  }
  return acc.value();
}

double cosine_bilateral_sum(double omega, Rational offset, const Nome& nome,
                            const Truncation& trunc) {
  trunc.validate();
  const auto exponent = [&](int64_t p) {
    // p^2/12 + offset, exact until the final division.
    int64_t den = 12 * offset.den;
    int64_t num = p * p * offset.den + 12 * offset.num;
    return static_cast<double>(num) / static_cast<double>(den);
  };

  Accumulator acc;
  acc.add(nome_pow(exponent(0), nome));
  for (int64_t p = 1;; ++p) {
    if (p > trunc.max_terms) {
      throw TruncationError("cosine_bilateral_sum did not converge within max_terms");
    }
    // cos is even in p, so the +-p pair shares one weight.
    double mag = nome_pow(exponent(p), nome);
    acc.add(2.0 * std::cos(omega * static_cast<double>(p)) * mag);
    if (mag < trunc.abs_tol) break;
  }
  return acc.value();
}

double euler_product(const Nome& nome, int step, const Truncation& trunc) {
  trunc.validate();
  if (step < 1) throw DomainError("euler_product requires step >= 1");

  double product = 1.0;
  double qs = nome_pow(static_cast<double>(step), nome);
  double factor_dev = qs;  // q^(step*n), the deviation of the factor from 1
  for (int64_t n = 1;; ++n) {
    if (n > trunc.max_terms) {
      throw TruncationError("euler_product did not converge within max_terms");
    }
    product *= (1.0 - factor_dev);
    if (factor_dev < trunc.abs_tol) break;
    factor_dev *= qs;
  }
  return product;
}

double log_euler_product(const Nome& nome, int step, const Truncation& trunc) {
  trunc.validate();
  if (step < 1) throw DomainError("log_euler_product requires step >= 1");

  Accumulator acc;
  double qs = nome_pow(static_cast<double>(step), nome);
  double factor_dev = qs;
  for (int64_t n = 1;; ++n) {
    if (n > trunc.max_terms) {
      throw TruncationError("log_euler_product did not converge within max_terms");
    }
    acc.add(std::log1p(-factor_dev));
    if (factor_dev < trunc.abs_tol) break;
    factor_dev *= qs;
  }
  return acc.value();
}

double dedekind_eta(const Nome& nome, const Truncation& trunc) {
  return nome_pow(1.0 / 24.0, nome) * euler_product(nome, 1, trunc);
}

}  // namespace annulus

#include "core/stats.hpp"

#include <cmath>
#include <numbers>

namespace annulus {

double inverse_normal_cdf(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("inverse_normal_cdf requires p in (0, 1)");
  }
  // Acklam's coefficients.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against the exact CDF.
  double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double confidence) {
  if (trials == 0 || successes > trials) {
    throw DomainError("wilson_interval requires 0 <= successes <= trials, trials > 0");
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw DomainError("confidence must lie in (0, 1)");
  }
  const double z = inverse_normal_cdf(0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  WilsonInterval w;
  w.center = (phat + z2n / 2.0) / denom;
  w.half_width = (z / denom) * std::sqrt(phat * (1.0 - phat) / n + z2n / (4.0 * n));
  return w;
}

ComparisonReport compare(const TrialStatistics& stats, int n_max,
                         double confidence, const Truncation& trunc) {
  if (stats.trials == 0) throw DomainError("compare requires nonempty statistics");
  if (n_max < 1) throw DomainError("compare requires n_max >= 1");

  const double n = static_cast<double>(stats.trials);
  const AnnulusModulus m = make_modulus(stats.geometry.rho_effective);

  ComparisonReport report;
  report.confidence = confidence;
  report.trials = stats.trials;
  report.rho_effective = stats.geometry.rho_effective;

  auto count_at = [&](int nc) -> std::uint64_t {
    auto it = stats.histogram.find(nc);
    return it == stats.histogram.end() ? 0 : it->second;
  };

  auto proportion_row = [&](std::string name, double exact, std::uint64_t hits) {
    ComparisonRow row;
    row.name = std::move(name);
    row.exact = exact;
    row.estimate = static_cast<double>(hits) / n;
    WilsonInterval w = wilson_interval(hits, stats.trials, confidence);
    row.half_width = w.half_width;
    // z under the exact null proportion, so empty cells stay finite.
    double se = std::sqrt(exact * (1.0 - exact) / n);
    row.z_score = se > 0.0 ? (row.estimate - exact) / se : 0.0;
    row.low_statistics = exact * n < 25.0;
    report.rows.push_back(std::move(row));
  };

  std::uint64_t crossing_hits = 0;
  for (const auto& [nc, count] : stats.histogram) {
    if (nc >= 1) crossing_hits += count;
  }
  proportion_row("crossing", crossing_probability(m, CrossingForm::Auto, trunc),
                 crossing_hits);
  for (int k = 1; k <= n_max; ++k) {
    proportion_row("P(" + std::to_string(k) + ")", p_exact(k, m, trunc).value,
                   count_at(k));
  }

  // E[N_c]: sample mean with a normal-theory interval.
  double sum = 0.0, sumsq = 0.0;
  for (const auto& [nc, count] : stats.histogram) {
    sum += static_cast<double>(nc) * static_cast<double>(count);
    sumsq += static_cast<double>(nc) * static_cast<double>(nc) *
             static_cast<double>(count);
  }
  ComparisonRow mean_row;
  mean_row.name = "E[Nc]";
  mean_row.exact = mean_spanning_clusters(m, trunc);
  mean_row.estimate = sum / n;
  double var = std::max(0.0, sumsq / n - mean_row.estimate * mean_row.estimate);
  double se = std::sqrt(var / n);
  mean_row.half_width = inverse_normal_cdf(0.5 + confidence / 2.0) * se;
  mean_row.z_score = se > 0.0 ? (mean_row.estimate - mean_row.exact) / se : 0.0;
  mean_row.low_statistics = mean_row.exact * n < 25.0;
  report.rows.push_back(std::move(mean_row));

  return report;
}

}  // namespace annulus

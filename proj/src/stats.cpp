#include "crowdnet/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "crowdnet/simd/kernels.hpp"

namespace crowdnet {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double step = d * c;
    h *= step;
    if (std::fabs(step - 1.0) < kEpsilon) break;
  }
  return h;
}

}  // namespace

Description describe(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("describe: empty input");
  const auto n = static_cast<double>(values.size());
  const double mean = simd::sum(values) / n;
  const double var = simd::sum_sq_dev(values, mean) / n;
  return {mean, std::sqrt(var), values.size()};
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double f_cdf(double x, double d1, double d2) {
  if (!(d1 >= 1.0) || !(d2 >= 1.0)) throw std::domain_error("f_cdf: degrees of freedom must be >= 1");
  if (std::isnan(x) || x < 0.0) throw std::domain_error("f_cdf: x must be >= 0");
  if (std::isinf(x)) return 1.0;
  if (x == 0.0) return 0.0;
  const double z = d1 * x / (d1 * x + d2);
  return regularized_incomplete_beta(z, d1 / 2.0, d2 / 2.0);
}

double f_survival(double x, double d1, double d2) {
  if (!(d1 >= 1.0) || !(d2 >= 1.0)) throw std::domain_error("f_survival: degrees of freedom must be >= 1");
  if (std::isnan(x) || x < 0.0) throw std::domain_error("f_survival: x must be >= 0");
  if (std::isinf(x)) return 0.0;
  if (x == 0.0) return 1.0;
  // Upper tail via the mirrored incomplete beta keeps small p-values exact.
  const double z = d2 / (d2 + d1 * x);
  return regularized_incomplete_beta(z, d2 / 2.0, d1 / 2.0);
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw std::invalid_argument("ANOVA needs at least two groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("ANOVA group without observations");
    total += g.size();
  }
  if (total <= groups.size()) throw std::invalid_argument("insufficient observations");

  AnovaResult r;
  r.df_between = groups.size() - 1;
  r.df_within = total - groups.size();
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    const double s = simd::sum(g);
    grand_sum += s;
    r.group_means.push_back(s / static_cast<double>(g.size()));
    r.group_sizes.push_back(static_cast<double>(g.size()));
  }
  r.grand_mean = grand_sum / static_cast<double>(total);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double dev = r.group_means[i] - r.grand_mean;
    r.ss_between += r.group_sizes[i] * dev * dev;
    r.ss_within += simd::sum_sq_dev(groups[i], r.group_means[i]);
  }

  // Treat sums of squares that are pure rounding noise relative to the data
  // scale as exact zeros.
  double scale = 0.0;
  for (const auto& g : groups) {
    for (double v : g) scale = std::max(scale, std::fabs(v));
  }
  const double noise = std::pow(scale * 1e-13, 2) * static_cast<double>(total);
  const bool no_between = r.ss_between <= noise;
  const bool no_within = r.ss_within <= noise;

  if (no_between) {
    r.f = 0.0;
    r.p_value = 1.0;
    r.ss_between = 0.0;
    return r;
  }
  if (no_within) {
    r.f = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    r.degenerate = true;
    return r;
  }
  const double msb = r.ss_between / static_cast<double>(r.df_between);
  const double msw = r.ss_within / static_cast<double>(r.df_within);
  r.f = msb / msw;
  r.p_value = f_survival(r.f, static_cast<double>(r.df_between), static_cast<double>(r.df_within));
  return r;
}

}  // namespace crowdnet

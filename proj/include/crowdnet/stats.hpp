#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace crowdnet {

struct Description {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t count = 0;
};

/// Throws std::invalid_argument on empty input.
Description describe(std::span<const double> values);

/// Regularized incomplete beta I_x(a, b) by Lentz continued fraction,
/// switching to the symmetric form for x > (a+1)/(a+b+2).
double regularized_incomplete_beta(double x, double a, double b);

/// CDF of the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double x, double d1, double d2);

/// 1 - f_cdf(x, d1, d2), evaluated without cancellation.
double f_survival(double x, double d1, double d2);

struct AnovaResult {
  double f = 0.0;  // +inf when degenerate
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  double p_value = 1.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  std::vector<double> group_means;
  std::vector<double> group_sizes;
  double grand_mean = 0.0;
  /// Zero within-group variance with nonzero between-group variance.
  bool degenerate = false;
};

/// One-way between-groups ANOVA. Needs at least two groups, each nonempty,
/// and more observations than groups.
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

}  // namespace crowdnet

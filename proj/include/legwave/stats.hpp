#pragma once

#include <span>

namespace legwave::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against N(mu, sigma), asymptotic p.
KsResult ks_normal(std::span<const double> x, double mu, double sigma);

/// Kolmogorov distribution survival function Q(lambda).
double kolmogorov_q(double lambda);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

/// P(X >= wins) for X ~ Binomial(trials, 1/2).
double sign_test_p(int wins, int trials);

}  // namespace legwave::stats

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rrb::stats {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool passes(double alpha) const { return p_value > alpha; }
};

/// Asymptotic Kolmogorov tail probability Q(lambda).
double kolmogorov_tail(double lambda);

/// One-sample KS against a continuous CDF.
KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);
KsResult ks_uniform(std::span<const double> samples, double lo, double hi);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Two-sided standard normal quantile z with P(|Z| > z) = alpha.
double normal_two_sided_quantile(double alpha);

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for n < 2.
double stddev(std::span<const double> x);

}  // namespace rrb::stats

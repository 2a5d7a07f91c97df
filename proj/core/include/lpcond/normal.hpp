#pragma once

#include <cstdint>

namespace lpcond {

/// Standard normal CDF, 0.5 erfc(-x / sqrt 2).
double normal_cdf(double x);
double normal_pdf(double x);

/// Half-width of the two-sided DKW band for an empirical CDF of n draws at
/// level alpha: sqrt(log(2 / alpha) / (2 n)).
double dkw_epsilon(std::int64_t n, double alpha);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for k successes in n trials at normal quantile z.
Interval wilson_interval(std::int64_t k, std::int64_t n, double z = 1.959963984540054);

}  // namespace lpcond

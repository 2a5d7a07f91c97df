#include "lpcond/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpcond/errors.hpp"

namespace lpcond {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double dkw_epsilon(std::int64_t n, double alpha) {
  if (n < 1 || !(alpha > 0.0 && alpha < 1.0)) throw InputError("dkw_epsilon needs n >= 1 and alpha in (0, 1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

Interval wilson_interval(std::int64_t k, std::int64_t n, double z) {
  if (n < 1 || k < 0 || k > n) throw InputError("wilson_interval needs 0 <= k <= n, n >= 1");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return Interval{std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace lpcond

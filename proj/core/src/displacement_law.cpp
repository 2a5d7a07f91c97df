#include "lpcond/displacement_law.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "lpcond/errors.hpp"

namespace lpcond {

namespace {

// Mixture weights w_{n,k}, k = 0..n, in probability scale.
std::vector<double> mixture_weights(std::int64_t n) {
  std::vector<double> w(static_cast<std::size_t>(n + 1));
  const double nd = static_cast<double>(n);
  for (std::int64_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    double lw = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) +
                kd * std::log(kd + 1.0) - nd * std::log(nd + 2.0);
    if (k < n) lw += (nd - kd - 1.0) * std::log(nd - kd + 1.0);
    w[static_cast<std::size_t>(k)] = std::exp(lw);
  }
  return w;
}

std::vector<double> weights(std::int64_t n) {
  static std::mutex mutex;
  static std::vector<std::vector<double>> rows;
  std::lock_guard<std::mutex> lock(mutex);
  while (static_cast<std::int64_t>(rows.size()) <= n) {
    rows.push_back(mixture_weights(static_cast<std::int64_t>(rows.size())));
  }
  return rows[static_cast<std::size_t>(n)];
}

// f_k * f_{n-k} * u_k, truncated to `cap` coefficients, accumulated into `out`
// with factor w.
void accumulate_term(const std::vector<double>& a, const std::vector<double>& b, std::int64_t k,
                     double w, std::size_t cap, std::vector<double>& out,
                     std::vector<double>& scratch) {
  const std::size_t prod_len = std::min(a.size() + b.size() - 1, cap);
  scratch.assign(prod_len, 0.0);
  for (std::size_t i = 0; i < a.size() && i < prod_len; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const std::size_t jmax = std::min(b.size(), prod_len - i);
    for (std::size_t j = 0; j < jmax; ++j) scratch[i + j] += ai * b[j];
  }
  const std::size_t width = static_cast<std::size_t>(k) + 1;
  const std::size_t len = std::min(prod_len + width - 1, cap);
  if (out.size() < len) out.resize(len, 0.0);
  const double scale = w / static_cast<double>(width);
  // out[j] += scale * (scratch[j - width + 1] + ... + scratch[j]) via prefix sums
  double running = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    if (j < prod_len) running += scratch[j];
    if (j >= width) running -= scratch[j - width];
    out[j] += scale * running;
  }
}

// Laws f_0..f_{max_n} truncated to cap coefficients.
std::vector<std::vector<double>> truncated_recursion(std::int64_t max_n, std::size_t cap) {
  std::vector<std::vector<double>> f(static_cast<std::size_t>(max_n + 1));
  if (max_n < 0) return f;
  f[0] = {1.0};
  std::vector<double> scratch;
  for (std::int64_t n = 0; n < max_n; ++n) {
    const auto w = weights(n);
    std::vector<double> next;
    for (std::int64_t k = 0; k <= n; ++k) {
      accumulate_term(f[static_cast<std::size_t>(k)], f[static_cast<std::size_t>(n - k)], k,
                      w[static_cast<std::size_t>(k)], cap, next, scratch);
    }
    f[static_cast<std::size_t>(n + 1)] = std::move(next);
  }
  return f;
}

std::mutex full_mutex;
std::vector<std::vector<double>> full_laws;  // f_n, untruncated

std::mutex moment_mutex;
std::vector<RawMoments> moment_table;  // indexed by n = l - 1

}  // namespace

Pmf displacement_law(std::int64_t l) {
  if (l < 1 || l > kMaxFullDisplacementLaw) {
    throw InfeasibleError("full law of d_{l,l-1} is materialized only for 1 <= l <= " +
                          std::to_string(kMaxFullDisplacementLaw) + ", got l=" + std::to_string(l));
  }
  std::vector<double> dense;
  {
    std::lock_guard<std::mutex> lock(full_mutex);
    if (static_cast<std::int64_t>(full_laws.size()) < l) {
      full_laws = truncated_recursion(kMaxFullDisplacementLaw - 1, static_cast<std::size_t>(-1));
    }
    dense = full_laws[static_cast<std::size_t>(l - 1)];
  }
  return Pmf::from_dense(0, dense);
}

std::vector<std::vector<double>> displacement_low_laws(std::int64_t max_l, std::size_t cap) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(std::max<std::int64_t>(max_l, 0) + 1));
  if (max_l < 1 || cap == 0) return out;
  auto f = truncated_recursion(max_l - 1, cap);
  for (std::int64_t l = 1; l <= max_l; ++l) out[static_cast<std::size_t>(l)] = std::move(f[static_cast<std::size_t>(l - 1)]);
  return out;
}

std::vector<std::complex<double>> displacement_cfs(std::int64_t max_l, double t) {
  std::vector<std::complex<double>> out(static_cast<std::size_t>(std::max<std::int64_t>(max_l, 0) + 1),
                                        std::complex<double>(1.0, 0.0));
  if (max_l < 2) return out;
  const std::int64_t max_n = max_l - 1;
  // uniform[k] = E z^U with U uniform on {0..k}, z = e^{it}
  std::vector<std::complex<double>> uniform(static_cast<std::size_t>(max_n));
  {
    std::complex<double> partial(0.0, 0.0);
    for (std::int64_t k = 0; k < max_n; ++k) {
      partial += std::polar(1.0, t * static_cast<double>(k));
      uniform[static_cast<std::size_t>(k)] = partial / static_cast<double>(k + 1);
    }
  }
  std::vector<std::complex<double>> f(static_cast<std::size_t>(max_n + 1));
  f[0] = 1.0;
  for (std::int64_t n = 0; n < max_n; ++n) {
    const auto w = weights(n);
    std::complex<double> acc(0.0, 0.0);
    for (std::int64_t k = 0; k <= n; ++k) {
      acc += w[static_cast<std::size_t>(k)] * f[static_cast<std::size_t>(k)] *
             f[static_cast<std::size_t>(n - k)] * uniform[static_cast<std::size_t>(k)];
    }
    f[static_cast<std::size_t>(n + 1)] = acc;
  }
  for (std::int64_t l = 1; l <= max_l; ++l) out[static_cast<std::size_t>(l)] = f[static_cast<std::size_t>(l - 1)];
  return out;
}

std::vector<RawMoments> displacement_moments(std::int64_t max_l) {
  std::lock_guard<std::mutex> lock(moment_mutex);
  if (moment_table.empty()) moment_table.push_back(RawMoments{});  // f_0 = point mass at 0
  while (static_cast<std::int64_t>(moment_table.size()) < max_l) {
    const std::int64_t n = static_cast<std::int64_t>(moment_table.size()) - 1;
    const auto w = weights(n);
    RawMoments next;
    for (std::int64_t k = 0; k <= n; ++k) {
      const RawMoments& a = moment_table[static_cast<std::size_t>(k)];
      const RawMoments& b = moment_table[static_cast<std::size_t>(n - k)];
      const double kd = static_cast<double>(k);
      const double u1 = kd / 2.0;
      const double u2 = kd * (2.0 * kd + 1.0) / 6.0;
      const double u3 = kd * kd * (kd + 1.0) / 4.0;
      // moments of a + b, then of (a + b) + u
      const double s1 = a.m1 + b.m1;
      const double s2 = a.m2 + 2.0 * a.m1 * b.m1 + b.m2;
      const double s3 = a.m3 + 3.0 * a.m2 * b.m1 + 3.0 * a.m1 * b.m2 + b.m3;
      const double wk = w[static_cast<std::size_t>(k)];
      next.m1 += wk * (s1 + u1);
      next.m2 += wk * (s2 + 2.0 * s1 * u1 + u2);
      next.m3 += wk * (s3 + 3.0 * s2 * u1 + 3.0 * s1 * u2 + u3);
    }
    moment_table.push_back(next);
  }
  std::vector<RawMoments> out(static_cast<std::size_t>(std::max<std::int64_t>(max_l, 0) + 1));
  for (std::int64_t l = 1; l <= max_l; ++l) out[static_cast<std::size_t>(l)] = moment_table[static_cast<std::size_t>(l - 1)];
  return out;
}

double displacement_abs_central3(const RawMoments& mom, const std::vector<double>& low, double c) {
  // E|D - c|^3 = E(D - c)^3 + 2 E[(c - D)^3; D < c]
  const double central3 = mom.m3 - 3.0 * c * mom.m2 + 3.0 * c * c * mom.m1 - c * c * c;
  double below = 0.0;
  for (std::size_t j = 0; j < low.size() && static_cast<double>(j) < c; ++j) {
    const double gap = c - static_cast<double>(j);
    below += low[j] * gap * gap * gap;
  }
  return central3 + 2.0 * below;
}

}  // namespace lpcond

#include "lpcond/exact_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lpcond/errors.hpp"
#include "lpcond/parallel.hpp"

namespace lpcond {

namespace {

using Int128 = __int128;

double multiset_count(std::int64_t m, std::int64_t n) {
  double c = 1.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    c = c * static_cast<double>(m - 1 + i) / static_cast<double>(i);
  }
  return c;
}

// Depth-first walk over nondecreasing address sequences with an incremental
// occupancy table. Leaves add the number of orderings of the multiset.
class MultisetWalker {
 public:
  MultisetWalker(std::int64_t m, std::int64_t n)
      : m_(m), n_(n), occupied_(static_cast<std::size_t>(m), 0),
        counts_(static_cast<std::size_t>(n * (n - 1) / 2 + 1), 0) {
    n_factorial_ = 1;
    for (std::int64_t i = 2; i <= n; ++i) n_factorial_ *= i;
  }

  void walk_from(std::int64_t first) {
    const std::int64_t landed = insert(first);
    descend(1, first, 1, 1, landed - first >= 0 ? landed - first : landed - first + m_);
    remove(landed);
  }

  const std::vector<Int128>& counts() const { return counts_; }

 private:
  std::int64_t insert(std::int64_t home) {
    std::int64_t u = home;
    while (occupied_[static_cast<std::size_t>(u)]) u = (u + 1 == m_) ? 0 : u + 1;
    occupied_[static_cast<std::size_t>(u)] = 1;
    return u;
  }
  void remove(std::int64_t urn) { occupied_[static_cast<std::size_t>(urn)] = 0; }

  void descend(std::int64_t depth, std::int64_t last, std::int64_t run, Int128 denom, std::int64_t disp) {
    if (depth == n_) {
      counts_[static_cast<std::size_t>(disp)] += n_factorial_ / denom;
      return;
    }
    for (std::int64_t a = last; a < m_; ++a) {
      const std::int64_t next_run = a == last ? run + 1 : 1;
      const std::int64_t landed = insert(a);
      const std::int64_t step = landed >= a ? landed - a : landed - a + m_;
      descend(depth + 1, a, next_run, denom * next_run, disp + step);
      remove(landed);
    }
  }

  std::int64_t m_;
  std::int64_t n_;
  std::vector<char> occupied_;
  std::vector<Int128> counts_;
  Int128 n_factorial_;
};

bool mul_checked(Int128 a, Int128 b, Int128& out) { return !__builtin_mul_overflow(a, b, &out); }
bool add_checked(Int128 a, Int128 b, Int128& out) { return !__builtin_add_overflow(a, b, &out); }

Int128 binomial128(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Int128 c = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    Int128 next;
    if (!mul_checked(c, n - k + i, next)) throw InfeasibleError("binomial coefficient overflows 128 bits");
    c = next / i;
  }
  return c;
}

Int128 power128(std::int64_t base, std::int64_t exp) {
  Int128 out = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    if (!mul_checked(out, base, out)) throw InfeasibleError("power overflows 128 bits");
  }
  return out;
}

// Dense P(X = x) on [0, hi] from the model's exact pmf.
std::vector<double> dense_x(const ModelSpec& model, std::int64_t lo, std::int64_t hi) {
  std::vector<double> out(static_cast<std::size_t>(hi + 1), 0.0);
  for (std::int64_t x = std::max<std::int64_t>(lo, 0); x <= hi; ++x) out[static_cast<std::size_t>(x)] = model.x_prob(x);
  return out;
}

// One more summand: next[s] = sum_x law[x] prev[s - x], s in [0, hi].
std::vector<double> convolve_clipped(const std::vector<double>& prev, const std::vector<double>& law,
                                     std::size_t hi) {
  std::vector<double> next(hi + 1, 0.0);
  std::size_t first = 0;
  while (first < law.size() && law[first] == 0.0) ++first;
  for (std::size_t s = 0; s <= hi; ++s) {
    KahanSum acc;
    const std::size_t top = std::min(s, law.size() - 1);
    for (std::size_t x = first; x <= top; ++x) {
      const double p = prev[s - x];
      if (p != 0.0) acc.add(law[x] * p);
    }
    next[s] = acc.value();
  }
  return next;
}

struct Window {
  std::int64_t x_lo;
  std::int64_t x_hi;
};

Window feasible_window(const ModelSpec& model, const ConditioningSpec& cond) {
  if (cond.N < 1) throw InputError("conditioning needs N >= 1");
  const std::int64_t xmin = model.x_min();
  return Window{xmin, cond.m - (cond.N - 1) * xmin};
}

[[noreturn]] void empty_event(const ConditioningSpec& cond) {
  throw ConditioningError("P(S=m)=0 for N=" + std::to_string(cond.N) + ", m=" + std::to_string(cond.m));
}

ConditionalLaw indicator_route(const ModelSpec& model, const ConditioningSpec& cond, std::int64_t k,
                               const Window& w) {
  const std::int64_t N = cond.N;
  const std::int64_t m = cond.m;
  const double p_hit = (k >= 0) ? model.x_prob(k) : 0.0;
  // X | X != k on the feasible window, normalized by 1 - p_hit.
  std::vector<double> other = dense_x(model, w.x_lo, w.x_hi);
  if (k >= 0 && k <= w.x_hi) other[static_cast<std::size_t>(k)] = 0.0;
  const double q = 1.0 - p_hit;
  if (q > 0.0) {
    for (double& p : other) p /= q;
  }

  // P(T = j, S = m) = Binom(N, j; p_hit) P(sum of N - j draws from `other` = m - j k)
  std::vector<double> joint(static_cast<std::size_t>(N + 1), 0.0);
  std::vector<double> power(static_cast<std::size_t>(m + 1), 0.0);
  power[0] = 1.0;
  const double lg_n = std::lgamma(static_cast<double>(N) + 1.0);
  for (std::int64_t i = 0; i <= N; ++i) {
    const std::int64_t j = N - i;
    const std::int64_t target = m - j * k;
    if (i > 0) power = convolve_clipped(power, other, static_cast<std::size_t>(m));
    if (target < 0 || target > m) continue;
    const double tail = power[static_cast<std::size_t>(target)];
    if (tail == 0.0) continue;
    double binom;
    if (p_hit == 0.0) {
      binom = j == 0 ? 1.0 : 0.0;
    } else if (q == 0.0) {
      binom = i == 0 ? 1.0 : 0.0;
    } else {
      binom = std::exp(lg_n - std::lgamma(static_cast<double>(j) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) +
                       static_cast<double>(j) * std::log(p_hit) + static_cast<double>(i) * std::log1p(-p_hit));
    }
    joint[static_cast<std::size_t>(j)] = binom * tail;
  }
  KahanSum total;
  for (double p : joint) total.add(p);
  ConditionalLaw out;
  out.p_sum = total.value();
  if (!(out.p_sum > 0.0)) empty_event(cond);
  for (double& p : joint) p /= out.p_sum;
  out.law = Pmf::from_dense(0, joint);
  return out;
}

ConditionalLaw dense_route(const ModelSpec& model, const ConditioningSpec& cond, const Window& w) {
  const std::int64_t N = cond.N;
  const std::int64_t m = cond.m;
  struct Term {
    std::int64_t x;
    double px;
    Pmf y;
  };
  std::vector<Term> terms;
  std::int64_t y_top = 0;
  for (std::int64_t x = w.x_lo; x <= w.x_hi; ++x) {
    const double px = model.x_prob(x);
    if (px == 0.0) continue;
    Pmf y = model.y().law(x);
    if (y.min_value() < 0) throw InputError("exact conditional law needs Y >= 0");
    y_top = std::max(y_top, y.max_value());
    terms.push_back(Term{x, px, std::move(y)});
  }
  const std::size_t s_len = static_cast<std::size_t>(m + 1);
  // layer[s * t_len + t] = P(S_i = s, T_i = t)
  std::size_t t_len = 1;
  std::vector<double> layer(s_len, 0.0);
  layer[0] = 1.0;
  for (std::int64_t i = 1; i <= N; ++i) {
    const std::size_t next_t_len = static_cast<std::size_t>(i * y_top + 1);
    const std::int64_t s_hi = m - (N - i) * w.x_lo;
    std::vector<double> next(s_len * next_t_len, 0.0);
    for (std::int64_t s = 0; s <= s_hi; ++s) {
      for (std::size_t t = 0; t < next_t_len; ++t) {
        KahanSum acc;
        for (const Term& term : terms) {
          const std::int64_t ps = s - term.x;
          if (ps < 0) break;
          for (std::size_t yi = 0; yi < term.y.size(); ++yi) {
            const auto y = static_cast<std::size_t>(term.y.support[yi]);
            if (y > t) break;
            const std::size_t pt = t - y;
            if (pt >= t_len) continue;
            const double prev = layer[static_cast<std::size_t>(ps) * t_len + pt];
            if (prev != 0.0) acc.add(prev * term.px * term.y.probs[yi]);
          }
        }
        next[static_cast<std::size_t>(s) * next_t_len + t] = acc.value();
      }
    }
    layer = std::move(next);
    t_len = next_t_len;
  }
  std::vector<double> law(layer.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(m) * t_len),
                          layer.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(m + 1) * t_len));
  KahanSum total;
  for (double p : law) total.add(p);
  ConditionalLaw out;
  out.p_sum = total.value();
  if (!(out.p_sum > 0.0)) empty_event(cond);
  for (double& p : law) p /= out.p_sum;
  out.law = Pmf::from_dense(0, law);
  return out;
}

// P(S_i = v) for v in [0, m] and i in {N - 2, N - 1, N}.
struct SumTables {
  std::vector<double> minus2;
  std::vector<double> minus1;
  std::vector<double> full;
};

SumTables sum_tables(const std::vector<double>& x, std::int64_t N, std::int64_t m) {
  SumTables out;
  std::vector<double> power(static_cast<std::size_t>(m + 1), 0.0);
  power[0] = 1.0;
  for (std::int64_t i = 0; i <= N; ++i) {
    if (i > 0) power = convolve_clipped(power, x, static_cast<std::size_t>(m));
    if (i == N - 2) out.minus2 = power;
    if (i == N - 1) out.minus1 = power;
    if (i == N) out.full = power;
  }
  return out;
}

}  // namespace

Pmf exact_displacement_pmf(std::int64_t m, std::int64_t n, unsigned threads) {
  if (m < 1 || n < 0) throw InputError("exact_displacement_pmf needs m >= 1 and n >= 0");
  if (n > m) throw CapacityError("more balls than urns");
  if (n == 0) return Pmf::point(0);
  if (multiset_count(m, n) > kMaxMultisets) {
    throw InfeasibleError("(m=" + std::to_string(m) + ", n=" + std::to_string(n) +
                          ") is too large for the exact oracle: more than 1e8 multisets");
  }
  std::vector<std::vector<Int128>> chunk_counts(static_cast<std::size_t>(m));
  parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t first) {
    MultisetWalker walker(m, n);
    walker.walk_from(static_cast<std::int64_t>(first));
    chunk_counts[first] = walker.counts();
  });
  std::vector<Int128> counts(chunk_counts.front().size(), 0);
  for (const auto& c : chunk_counts) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += c[i];
  }
  const long double total = static_cast<long double>(power128(m, n));
  std::vector<double> dense(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    dense[i] = static_cast<double>(static_cast<long double>(counts[i]) / total);
  }
  return Pmf::from_dense(0, dense);
}

Pmf exact_sum_pmf(const Pmf& x_law, std::int64_t N, std::int64_t lo, std::int64_t hi) {
  if (N < 1) throw InputError("exact_sum_pmf needs N >= 1");
  if (x_law.empty()) throw InputError("exact_sum_pmf needs a nonempty law");
  if (x_law.min_value() < 0) throw InputError("exact_sum_pmf needs a law on the non-negative integers");
  if (hi < lo) throw InputError("exact_sum_pmf: empty value range");
  const std::vector<double> dense_law = [&] {
    std::vector<double> d(static_cast<std::size_t>(x_law.max_value() + 1), 0.0);
    for (std::size_t i = 0; i < x_law.size(); ++i) d[static_cast<std::size_t>(x_law.support[i])] = x_law.probs[i];
    return d;
  }();
  const std::int64_t top = std::min(hi, N * x_law.max_value());
  if (top < 0) throw InputError("exact_sum_pmf: value range below the support");
  std::vector<double> power(static_cast<std::size_t>(top + 1), 0.0);
  power[0] = 1.0;
  for (std::int64_t i = 0; i < N; ++i) power = convolve_clipped(power, dense_law, static_cast<std::size_t>(top));
  std::vector<double> window;
  const std::int64_t start = std::max<std::int64_t>(lo, 0);
  for (std::int64_t v = start; v <= top; ++v) window.push_back(power[static_cast<std::size_t>(v)]);
  Pmf out = Pmf::from_dense(start, window);
  // Whatever is not listed: clipped sums plus the lost tail of x_law.
  const double listed = out.total_mass();
  const double x_mass = x_law.total_mass();
  const double full_mass = std::pow(x_mass, static_cast<double>(N));
  const double clipped = std::max(0.0, full_mass - listed);
  out.truncation_mass = clipped + std::max(0.0, 1.0 - full_mass);
  return out;
}

Pmf exact_sum_pmf(const Pmf& x_law, std::int64_t N) {
  return exact_sum_pmf(x_law, N, 0, N * x_law.max_value());
}

ConditionalLaw exact_conditional(const ModelSpec& model, const ConditioningSpec& cond) {
  const Window w = feasible_window(model, cond);
  if (w.x_hi < w.x_lo) empty_event(cond);
  if (const auto k = model.y().indicator_point()) return indicator_route(model, cond, *k, w);
  return dense_route(model, cond, w);
}

Pmf exact_conditional_law(const ModelSpec& model, const ConditioningSpec& cond) {
  return exact_conditional(model, cond).law;
}

double exact_sum_probability(const ModelSpec& model, const ConditioningSpec& cond) {
  const Window w = feasible_window(model, cond);
  if (w.x_hi < w.x_lo || cond.m < 0) return 0.0;
  const auto x = dense_x(model, w.x_lo, w.x_hi);
  std::vector<double> power(static_cast<std::size_t>(cond.m + 1), 0.0);
  power[0] = 1.0;
  for (std::int64_t i = 0; i < cond.N; ++i) power = convolve_clipped(power, x, static_cast<std::size_t>(cond.m));
  return power.back();
}

ConditionalMoments exact_conditional_moments(const ModelSpec& model, const ConditioningSpec& cond) {
  const Window w = feasible_window(model, cond);
  if (w.x_hi < w.x_lo || cond.m < 0) empty_event(cond);
  const std::int64_t N = cond.N;
  const std::int64_t m = cond.m;
  const auto x = dense_x(model, w.x_lo, w.x_hi);
  const auto raw = model.y().moments(w.x_hi);
  const SumTables sums = sum_tables(x, N, m);
  ConditionalMoments out;
  out.p_sum = sums.full[static_cast<std::size_t>(m)];
  if (!(out.p_sum > 0.0)) empty_event(cond);

  const double n = static_cast<double>(N);
  KahanSum first, second, cross;
  for (std::int64_t a = w.x_lo; a <= w.x_hi; ++a) {
    const double pa = x[static_cast<std::size_t>(a)];
    if (pa == 0.0) continue;
    const double rest = sums.minus1[static_cast<std::size_t>(m - a)];
    first.add(pa * raw[static_cast<std::size_t>(a)].m1 * rest);
    second.add(pa * raw[static_cast<std::size_t>(a)].m2 * rest);
    if (N < 2) continue;
    for (std::int64_t b = w.x_lo; a + b <= m && b <= w.x_hi; ++b) {
      const double pb = x[static_cast<std::size_t>(b)];
      if (pb == 0.0) continue;
      cross.add(pa * pb * raw[static_cast<std::size_t>(a)].m1 * raw[static_cast<std::size_t>(b)].m1 *
                sums.minus2[static_cast<std::size_t>(m - a - b)]);
    }
  }
  out.mean = n * first.value() / out.p_sum;
  const double moment2 = (n * second.value() + n * (n - 1.0) * cross.value()) / out.p_sum;
  out.variance = std::max(0.0, moment2 - out.mean * out.mean);
  return out;
}

std::int64_t conditional_t_max(const ModelSpec& model, const ConditioningSpec& cond) {
  const Window w = feasible_window(model, cond);
  if (w.x_hi < w.x_lo || cond.m < 0) empty_event(cond);
  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> best(static_cast<std::size_t>(cond.m + 1), kNone);
  best[0] = 0;
  for (std::int64_t i = 0; i < cond.N; ++i) {
    std::vector<std::int64_t> next(best.size(), kNone);
    for (std::int64_t s = 0; s <= cond.m; ++s) {
      if (best[static_cast<std::size_t>(s)] == kNone) continue;
      for (std::int64_t x = w.x_lo; x <= w.x_hi && s + x <= cond.m; ++x) {
        if (model.x_prob(x) == 0.0) continue;
        auto& slot = next[static_cast<std::size_t>(s + x)];
        slot = std::max(slot, best[static_cast<std::size_t>(s)] + model.y().max_value(x));
      }
    }
    best = std::move(next);
  }
  if (best.back() == kNone) empty_event(cond);
  return best.back();
}

Pmf occupancy_exact_pmf(std::int64_t m_balls, std::int64_t n_urns) {
  if (m_balls < 0 || n_urns < 0) throw InputError("occupancy_exact_pmf needs non-negative sizes");
  if (n_urns == 0) {
    if (m_balls > 0) throw InputError("balls need at least one urn");
    return Pmf::point(0);
  }
  const Int128 total = power128(n_urns, m_balls);
  std::vector<double> dense(static_cast<std::size_t>(n_urns + 1), 0.0);
  for (std::int64_t j = 0; j <= n_urns; ++j) {
    Int128 alt = 0;
    for (std::int64_t i = 0; i <= n_urns - j; ++i) {
      Int128 term;
      if (!mul_checked(binomial128(n_urns - j, i), power128(n_urns - j - i, m_balls), term)) {
        throw InfeasibleError("occupancy inclusion-exclusion overflows 128 bits");
      }
      if (!add_checked(alt, (i % 2 == 0) ? term : -term, alt)) {
        throw InfeasibleError("occupancy inclusion-exclusion overflows 128 bits");
      }
    }
    Int128 count;
    if (!mul_checked(binomial128(n_urns, j), alt, count)) {
      throw InfeasibleError("occupancy inclusion-exclusion overflows 128 bits");
    }
    dense[static_cast<std::size_t>(j)] =
        static_cast<double>(static_cast<long double>(count) / static_cast<long double>(total));
  }
  return Pmf::from_dense(0, dense);
}

}  // namespace lpcond

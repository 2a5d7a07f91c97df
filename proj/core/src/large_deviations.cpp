#include "lpcond/large_deviations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpcond/conditional_engine.hpp"
#include "lpcond/displacement_law.hpp"
#include "lpcond/distributions.hpp"
#include "lpcond/errors.hpp"
#include "lpcond/exact_oracles.hpp"

namespace lpcond {

namespace {

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log P(X >= l) and the relative size of the analytic remainder.
std::pair<double, double> borel_log_tail(double mu, std::int64_t l) {
  l = std::max<std::int64_t>(l, 1);
  double acc = -INFINITY;
  std::int64_t j = l;
  for (;; ++j) {
    const double term = borel_log_pmf(mu, j);
    acc = log_add(acc, term);
    if (term < acc - 40.0 && std::log(borel_tail_bound(mu, j)) < acc - 40.0) break;
  }
  const double remainder = borel_tail_bound(mu, j) / std::exp(acc);
  return {acc, remainder};
}

}  // namespace

Exponents exponents(double mu) {
  Exponents e;
  e.kappa = borel_kappa(mu);
  e.alpha_proof = e.kappa * std::numbers::sqrt2;
  e.alpha_stated = (1.0 + std::log(mu) - mu) * std::numbers::sqrt2;
  e.beta_stated = 4.0 + std::numbers::ln2 + 2.0 * std::log(mu) - 2.0 * mu;
  e.beta_rederived = 1.0 + std::numbers::ln2 + e.kappa;
  e.beta_corrected = 2.0 * mu - 2.0 * std::log(mu) + std::numbers::ln2;
  e.alpha_stated_negative = e.alpha_stated < 0.0;
  return e;
}

std::vector<XTailRow> x_tail_check(double mu, const std::vector<std::int64_t>& l_grid) {
  std::vector<XTailRow> rows;
  for (std::int64_t l : l_grid) {
    if (l < 1) throw InputError("x_tail_check grid points must be >= 1");
    XTailRow row;
    row.l = l;
    if (l == 1) {
      row.log_p = 0.0;
      row.remainder = 0.0;
    } else {
      const auto [log_p, remainder] = borel_log_tail(mu, l);
      row.log_p = log_p;
      row.remainder = remainder;
    }
    row.exponent = -row.log_p / static_cast<double>(l);
    rows.push_back(row);
  }
  return rows;
}

std::int64_t displacement_threshold(double u) {
  return static_cast<std::int64_t>(std::ceil(std::sqrt(2.0 * u + 0.25) + 1.5));
}

LowerTerm best_lower_term(double mu, double u) {
  LowerTerm best;
  if (!(u > 0.0)) throw InputError("best_lower_term needs u > 0");
  // Feasibility needs (l-1)^2 >= 4u. Past the first feasible l each step costs
  // at least 1 + kappa - log(2)/4 nats, so the scan stops 20 nats below the best.
  const auto first = std::max<std::int64_t>(3, static_cast<std::int64_t>(std::floor(2.0 * std::sqrt(u))));
  const auto top = static_cast<std::int64_t>(std::ceil(u)) + 2;
  for (std::int64_t l = first; l <= top; ++l) {
    const double span = static_cast<double>(l - 1);
    const double disc = span * span - 4.0 * u;
    if (disc < 0.0) continue;
    auto k = static_cast<std::int64_t>(std::ceil((span - std::sqrt(disc)) / 2.0 - 1e-12));
    k = std::max<std::int64_t>(k, 1);
    while (k * (l - 1 - k) < u && 2 * k <= l - 1) ++k;
    if (2 * k > l - 1 || static_cast<double>(k * (l - 1 - k)) < u) continue;
    const double lb = borel_log_pmf(mu, l) + std::lgamma(static_cast<double>(l)) -
                      static_cast<double>(k) * std::numbers::ln2 - span * std::log(static_cast<double>(l));
    if (lb > best.log_bound) best = LowerTerm{l, k, lb};
    if (lb < best.log_bound - 20.0) break;
  }
  return best;
}

std::vector<YTailRow> y_tail_bracket(double mu, const std::vector<double>& u_grid) {
  const Exponents e = exponents(mu);
  std::vector<YTailRow> rows;
  for (double u : u_grid) {
    if (!(u > 0.0)) throw InputError("y_tail_bracket grid points must be positive");
    YTailRow row;
    row.u = u;
    row.n_u = displacement_threshold(u);
    row.log_upper = borel_log_tail(mu, row.n_u).first;
    row.lower = best_lower_term(mu, u);
    row.kappa_sqrt2 = e.alpha_proof;
    const double root = std::sqrt(u);
    row.exp_upper = -row.log_upper / root;
    row.exp_lower = -row.lower.log_bound / root;
    if (row.n_u <= 12) {
      KahanSum p;
      for (std::int64_t l = row.n_u; l <= kMaxFullDisplacementLaw; ++l) {
        const Pmf d = displacement_law(l);
        KahanSum tail;
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (static_cast<double>(d.support[i]) >= u) tail.add(d.probs[i]);
        }
        p.add(borel_pmf(mu, l) * tail.value());
      }
      row.p_exact = p.value();
      row.p_exact_remainder = borel_tail_bound(mu, kMaxFullDisplacementLaw);
      row.exp_exact = -std::log(*row.p_exact) / root;
    }
    rows.push_back(row);
  }
  return rows;
}

HashLowerBound hash_lower_bound(double a) {
  if (!(a > 0.0)) throw InputError("hash_lower_bound needs a > 0");
  HashLowerBound out;
  const double root = std::sqrt(a);
  out.l = 1 + static_cast<std::int64_t>(std::ceil(root));
  out.k = static_cast<std::int64_t>(std::floor(root));
  out.log_bound = std::lgamma(static_cast<double>(out.l)) - static_cast<double>(out.k) * std::numbers::ln2 -
                  static_cast<double>(out.l - 1) * std::log(static_cast<double>(out.l));
  out.achieved = out.k * (out.l - 1 - out.k);
  return out;
}

TailMcReport tail_mc_decomposition(const ModelSpec& model, const ConditioningSpec& cond, double y, double mu,
                                   std::uint64_t seed, std::int64_t attempts, unsigned threads) {
  if (!(y > 0.0)) throw InputError("tail_mc_decomposition needs y > 0");
  if (attempts < 1) throw InputError("tail_mc_decomposition needs attempts >= 1");
  const Exponents e = exponents(mu);
  TailMcReport out;
  out.y = y;
  out.N = cond.N;
  out.m = cond.m;
  const double n = static_cast<double>(cond.N);
  const double root_y = std::sqrt(y);
  out.bracket_low = -e.beta_stated * root_y;
  out.bracket_high = -e.alpha_proof * root_y;
  out.conditional_mean = exact_conditional_moments(model, cond).mean;
  out.t_max = conditional_t_max(model, cond);
  const double threshold = out.conditional_mean + n * y;
  out.impossible = static_cast<double>(out.t_max) < threshold;

  RejectionOptions opts;
  opts.target = attempts;
  opts.budget = attempts;
  opts.seed = seed;
  opts.threads = threads;
  const SampleBatch batch = rejection_sample(model, cond, opts);
  out.attempts = batch.attempts;
  out.accepted = batch.accepted;
  for (std::size_t i = 0; i < batch.values.size(); ++i) {
    if (static_cast<double>(batch.values[i]) >= threshold) {
      ++out.exceedances;
      if (static_cast<double>(batch.max_y[i]) >= n * y) ++out.big_jumps;
    }
  }
  if (out.impossible) {
    out.p_hat = 0.0;
    out.p_interval = Interval{0.0, 0.0};
    return out;
  }
  if (out.accepted == 0) return out;
  out.p_hat = static_cast<double>(out.exceedances) / static_cast<double>(out.accepted);
  out.p_interval = wilson_interval(out.exceedances, out.accepted);
  const double root_n = std::sqrt(n);
  out.normalized_interval = Interval{std::log(out.p_interval.lo) / root_n, std::log(out.p_interval.hi) / root_n};
  if (out.exceedances > 0) {
    out.normalized = std::log(out.p_hat) / root_n;
    out.big_jump_fraction = static_cast<double>(out.big_jumps) / static_cast<double>(out.exceedances);
    out.big_jump_interval = wilson_interval(out.big_jumps, out.exceedances);
  }
  return out;
}

}  // namespace lpcond

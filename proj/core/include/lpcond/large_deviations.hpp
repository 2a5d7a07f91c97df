#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpcond/model.hpp"
#include "lpcond/normal.hpp"

namespace lpcond {

struct Exponents {
  double kappa = 0.0;           // mu - log mu - 1
  double alpha_proof = 0.0;     // kappa sqrt 2, the rate the upper-bound argument yields
  double alpha_stated = 0.0;    // (1 + log mu - mu) sqrt 2; negative on (0, 1)
  double beta_stated = 0.0;     // 4 + log 2 + 2 log mu - 2 mu
  double beta_rederived = 0.0;  // 1 + log 2 + kappa, from l + k log 2 + kappa l with l, k ~ sqrt(a)
  double beta_corrected = 0.0;  // 2 mu - 2 log mu + log 2, best single term at k ~ (l-1)/2
  bool alpha_stated_negative = false;
};

Exponents exponents(double mu);

struct XTailRow {
  std::int64_t l = 0;
  double log_p = 0.0;       // log P(X >= l)
  double remainder = 0.0;   // analytic bound on the neglected relative mass
  double exponent = 0.0;    // -log P(X >= l) / l
};

/// Exact Borel tails by log-space summation plus an analytic remainder.
std::vector<XTailRow> x_tail_check(double mu, const std::vector<std::int64_t>& l_grid);

/// ceil(sqrt(2u + 1/4) + 3/2): the smallest l with (l-1)(l-2)/2 >= u.
std::int64_t displacement_threshold(double u);

struct LowerTerm {
  std::int64_t l = 0;
  std::int64_t k = 0;
  double log_bound = -INFINITY;  // log of P(X = l) (l-1)! / (2^k l^{l-1})
};

/// Best single lower-bound term over (l, k) with 0 <= k <= (l-1)/2 and
/// k (l-1-k) >= u, using the permutations of (1,1,...,k,k,k+1,...,l-1-k).
LowerTerm best_lower_term(double mu, double u);

struct YTailRow {
  double u = 0.0;
  std::int64_t n_u = 0;
  std::optional<double> p_exact;   // sum over l <= 64, lower end
  double p_exact_remainder = 0.0;  // P(X > 64) bound
  double log_upper = 0.0;          // log P(X >= n_u)
  LowerTerm lower;
  double exp_exact = NAN;          // -log(p) / sqrt(u)
  double exp_upper = 0.0;
  double exp_lower = 0.0;
  double kappa_sqrt2 = 0.0;
};

/// Upper bound P(Y >= u) <= P(X >= n_u), single-term lower bound, and an
/// exact value when n_u <= 12.
std::vector<YTailRow> y_tail_bracket(double mu, const std::vector<double>& u_grid);

struct HashLowerBound {
  std::int64_t l = 0;
  std::int64_t k = 0;
  double log_bound = 0.0;            // log((l-1)! / (2^k l^{l-1}))
  std::int64_t achieved = 0;         // k (l-1-k), the threshold the construction reaches
};

/// Construction with l = 1 + ceil(sqrt a), k = floor(sqrt a).
HashLowerBound hash_lower_bound(double a);

struct TailMcReport {
  double y = 0.0;
  std::int64_t N = 0;
  std::int64_t m = 0;
  std::int64_t attempts = 0;
  std::int64_t accepted = 0;
  double conditional_mean = 0.0;  // exact E[T | S = m]
  std::int64_t t_max = 0;
  std::int64_t exceedances = 0;
  std::int64_t big_jumps = 0;     // exceedances with some Y_i >= N y
  bool impossible = false;        // N y beyond the support: probability exactly 0
  double p_hat = 0.0;
  Interval p_interval;            // Wilson 95%
  double big_jump_fraction = NAN;
  Interval big_jump_interval;
  double normalized = NAN;        // log(p_hat) / sqrt N
  Interval normalized_interval;   // from the Wilson endpoints
  double bracket_low = 0.0;       // -beta_stated sqrt y
  double bracket_high = 0.0;      // -alpha_proof sqrt y
};

/// Monte Carlo estimate of P(T - E[T | S = m] >= N y | S = m) with the
/// single-big-jump diagnostic. `mu` selects the bracket exponents.
TailMcReport tail_mc_decomposition(const ModelSpec& model, const ConditioningSpec& cond, double y, double mu,
                                   std::uint64_t seed, std::int64_t attempts, unsigned threads = 1);

}  // namespace lpcond

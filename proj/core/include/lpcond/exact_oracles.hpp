#pragma once

#include <cstdint>

#include "lpcond/model.hpp"
#include "lpcond/pmf.hpp"

namespace lpcond {

/// Largest multiset count C(m+n-1, n) accepted by exact_displacement_pmf.
inline constexpr double kMaxMultisets = 1e8;

/// Exact law of d_{m,n} under uniform addresses. Enumerates nondecreasing
/// address sequences, each weighted by its number of orderings, with integer
/// counts, so the result does not depend on `threads`.
/// Throws InfeasibleError past kMaxMultisets, CapacityError for n > m.
Pmf exact_displacement_pmf(std::int64_t m, std::int64_t n, unsigned threads = 1);

/// Law of the sum of N i.i.d. copies of x_law (x_law >= 0), restricted to
/// [lo, hi]. Mass outside the window plus the propagated truncation of x_law
/// goes to truncation_mass.
Pmf exact_sum_pmf(const Pmf& x_law, std::int64_t N, std::int64_t lo, std::int64_t hi);
Pmf exact_sum_pmf(const Pmf& x_law, std::int64_t N);

struct ConditionalLaw {
  Pmf law;          // law of T = sum Y_i given S = m, raw (identity affine) Y
  double p_sum = 0.0;  // P(S_N = m)
};

/// Exact law of T given S_N = m. Uses the model's exact X pmf on the feasible
/// window [x_min, m - (N-1) x_min]. Indicator responses take a two-class
/// route that stays accurate for N in the thousands; other responses use a
/// dense (S, T) dynamic programme.
/// Throws ConditioningError when P(S_N = m) = 0.
ConditionalLaw exact_conditional(const ModelSpec& model, const ConditioningSpec& cond);
Pmf exact_conditional_law(const ModelSpec& model, const ConditioningSpec& cond);

/// P(S_N = m) from the model's exact X pmf.
double exact_sum_probability(const ModelSpec& model, const ConditioningSpec& cond);

struct ConditionalMoments {
  double mean = 0.0;
  double variance = 0.0;
  double p_sum = 0.0;
};

/// E[T | S = m] and Var(T | S = m) for raw Y from exchangeability:
/// only P(S_{N-1} = .) and P(S_{N-2} = .) and the moments of Y | X are needed.
ConditionalMoments exact_conditional_moments(const ModelSpec& model, const ConditioningSpec& cond);

/// Largest value of T compatible with S_N = m (max-plus convolution of the
/// per-x maxima over the feasible window).
std::int64_t conditional_t_max(const ModelSpec& model, const ConditioningSpec& cond);

/// Law of the number of empty urns after m balls land uniformly in N urns,
/// by integer inclusion-exclusion. Throws InfeasibleError on 128-bit overflow.
Pmf occupancy_exact_pmf(std::int64_t m_balls, std::int64_t n_urns);

}  // namespace lpcond

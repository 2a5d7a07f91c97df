#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "lpcond/pmf.hpp"
#include "lpcond/rng.hpp"

namespace lpcond {

// Borel law P(X = l) = e^{-mu l} (mu l)^{l-1} / l!,  l >= 1,  0 < mu < 1.

/// kappa = mu - log(mu) - 1, the exponential decay rate of the Borel tail.
double borel_kappa(double mu);
double borel_log_pmf(double mu, std::int64_t l);
double borel_pmf(double mu, std::int64_t l);
double borel_mean(double mu);      // 1 / (1 - mu)
double borel_variance(double mu);  // mu / (1 - mu)^3

/// Analytic upper bound on P(X > last) from the Stirling envelope
/// P(X = l) <= e^{-kappa l} / (mu sqrt(2 pi) l^{3/2}).
double borel_tail_bound(double mu, std::int64_t last);
/// Smallest L with borel_tail_bound(mu, L) <= tol.
std::int64_t borel_truncation_point(double mu, double tol);
/// Table on [1, L] with truncation_mass = borel_tail_bound(mu, L).
Pmf borel_law(double mu, double tol = 1e-15);

struct Poisson {
  double lambda;
};
/// Geometric law on {0, 1, ...}: P(k) = p (1 - p)^k.
struct Geometric {
  double p;
};
using StandardLaw = std::variant<Poisson, Geometric>;

double standard_pmf(const StandardLaw& law, std::int64_t k);
/// Table truncated where the analytic tail (Chernoff for Poisson, exact for
/// geometric) drops below tol.
Pmf standard_law(const StandardLaw& law, double tol = 1e-16);

/// Inversion sampler over a finite table. The table's truncation mass is
/// folded into its last atom.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const Pmf& law);
  std::int64_t operator()(RngStream& rng) const;
  const std::vector<std::int64_t>& support() const noexcept { return support_; }

 private:
  std::vector<std::int64_t> support_;
  std::vector<double> cumulative_;
};

/// Borel sampler truncated where the tail bound is below 1e-12.
class BorelSampler {
 public:
  explicit BorelSampler(double mu);
  std::int64_t operator()(RngStream& rng) const { return sampler_(rng); }
  std::int64_t truncation_point() const noexcept { return sampler_.support().back(); }

 private:
  DiscreteSampler sampler_;
};

/// One Borel draw. Builds the inversion table; use BorelSampler in loops.
std::int64_t borel_sample(double mu, RngStream& rng);

/// Exact draw of d_{l,l-1}: l-1 uniform addresses in [1, l], linear probing.
std::int64_t displacement_sample(std::int64_t l, RngStream& rng);

}  // namespace lpcond

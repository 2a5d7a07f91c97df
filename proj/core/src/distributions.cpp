#include "lpcond/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/log1p.hpp>

#include "lpcond/errors.hpp"
#include "lpcond/probing.hpp"

namespace lpcond {

namespace {

void check_mu(double mu) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw ParameterError("Borel parameter mu must lie in (0, 1), got " + std::to_string(mu));
  }
}

// log(n!) - [(n + 1/2) log n - n + log(2 pi)/2]
double stirling_error(std::int64_t n) {
  const double x = static_cast<double>(n);
  if (n <= 15) {
    return std::lgamma(x + 1.0) - ((x + 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi));
  }
  const double x2 = x * x;
  return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * x2)) / x2) / x2) / x2) / x;
}

}  // namespace

double borel_kappa(double mu) {
  check_mu(mu);
  return -boost::math::log1pmx(mu - 1.0);
}

double borel_log_pmf(double mu, std::int64_t l) {
  check_mu(mu);
  if (l < 1) return -INFINITY;
  const double x = static_cast<double>(l);
  return -borel_kappa(mu) * x - std::log(mu) - 1.5 * std::log(x) -
         0.5 * std::log(2.0 * std::numbers::pi) - stirling_error(l);
}

double borel_pmf(double mu, std::int64_t l) { return std::exp(borel_log_pmf(mu, l)); }

double borel_mean(double mu) {
  check_mu(mu);
  return 1.0 / (1.0 - mu);
}

double borel_variance(double mu) {
  check_mu(mu);
  return mu / std::pow(1.0 - mu, 3);
}

double borel_tail_bound(double mu, std::int64_t last) {
  const double kappa = borel_kappa(mu);
  const double x = static_cast<double>(std::max<std::int64_t>(last, 0) + 1);
  return std::exp(-kappa * x) /
         (mu * std::sqrt(2.0 * std::numbers::pi) * std::pow(x, 1.5) * -std::expm1(-kappa));
}

std::int64_t borel_truncation_point(double mu, double tol) {
  std::int64_t last = 1;
  while (borel_tail_bound(mu, last) > tol) last = last < 64 ? last + 1 : last + last / 16;
  // refine back down to the smallest admissible point
  std::int64_t lo = std::max<std::int64_t>(1, last - last / 16 - 1);
  while (lo < last && borel_tail_bound(mu, lo) > tol) ++lo;
  return lo;
}

Pmf borel_law(double mu, double tol) {
  const std::int64_t last = borel_truncation_point(mu, tol);
  Pmf out;
  out.support.reserve(static_cast<std::size_t>(last));
  out.probs.reserve(static_cast<std::size_t>(last));
  for (std::int64_t l = 1; l <= last; ++l) {
    out.support.push_back(l);
    out.probs.push_back(borel_pmf(mu, l));
  }
  out.truncation_mass = borel_tail_bound(mu, last);
  return out;
}

double standard_pmf(const StandardLaw& law, std::int64_t k) {
  if (const auto* pois = std::get_if<Poisson>(&law)) {
    if (!(pois->lambda > 0.0)) throw ParameterError("Poisson rate must be positive");
    if (k < 0) return 0.0;
    return boost::math::pdf(boost::math::poisson_distribution<double>(pois->lambda),
                            static_cast<double>(k));
  }
  const auto& geo = std::get<Geometric>(law);
  if (!(geo.p > 0.0 && geo.p < 1.0)) throw ParameterError("geometric parameter must lie in (0, 1)");
  if (k < 0) return 0.0;
  return geo.p * std::exp(static_cast<double>(k) * std::log1p(-geo.p));
}

Pmf standard_law(const StandardLaw& law, double tol) {
  std::int64_t last = 0;
  double tail = 0.0;
  if (const auto* pois = std::get_if<Poisson>(&law)) {
    const double lambda = pois->lambda;
    if (!(lambda > 0.0)) throw ParameterError("Poisson rate must be positive");
    // Chernoff: P(X >= k) <= e^{-lambda} (e lambda / k)^k for k > lambda.
    auto chernoff = [lambda](std::int64_t k) {
      const double x = static_cast<double>(k);
      return std::exp(-lambda + x * (1.0 + std::log(lambda / x)));
    };
    last = static_cast<std::int64_t>(std::ceil(lambda));
    while (chernoff(last + 1) > tol) ++last;
    tail = chernoff(last + 1);
  } else {
    const double p = std::get<Geometric>(law).p;
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("geometric parameter must lie in (0, 1)");
    const double lq = std::log1p(-p);
    last = static_cast<std::int64_t>(std::ceil(std::log(tol) / lq));
    tail = std::exp(static_cast<double>(last + 1) * lq);
  }
  Pmf out;
  for (std::int64_t k = 0; k <= last; ++k) {
    out.support.push_back(k);
    out.probs.push_back(standard_pmf(law, k));
  }
  out.truncation_mass = tail;
  return out;
}

DiscreteSampler::DiscreteSampler(const Pmf& law) : support_(law.support) {
  if (law.empty()) throw InputError("cannot sample from an empty table");
  cumulative_.resize(law.size());
  KahanSum s;
  for (std::size_t i = 0; i < law.size(); ++i) {
    s.add(law.probs[i]);
    cumulative_[i] = s.value();
  }
  // Residual mass goes to the last atom.
  cumulative_.back() = INFINITY;
}

std::int64_t DiscreteSampler::operator()(RngStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return support_[static_cast<std::size_t>(it - cumulative_.begin())];
}

BorelSampler::BorelSampler(double mu) : sampler_(borel_law(mu, 1e-12)) {}

std::int64_t borel_sample(double mu, RngStream& rng) { return BorelSampler(mu)(rng); }

std::int64_t displacement_sample(std::int64_t l, RngStream& rng) {
  if (l < 1) throw InputError("displacement_sample: l must be >= 1");
  HashSequence seq;
  seq.m = l;
  seq.addresses.resize(static_cast<std::size_t>(l - 1));
  for (auto& h : seq.addresses) h = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(l)));
  return total_displacement(seq);
}

}  // namespace lpcond

#include "doctest.h"

#include <cmath>
#include <complex>

#include <boost/math/distributions/poisson.hpp>

#include "lpcond/berry_esseen.hpp"
#include "lpcond/distributions.hpp"
#include "lpcond/errors.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/fourier_llt.hpp"
#include "lpcond/models.hpp"
#include "lpcond/rng.hpp"

using namespace lpcond;

namespace {

ModelSpec fair_coin() {
  Pmf law;
  law.support = {0, 1};
  law.probs = {0.5, 0.5};
  return ModelSpec("coin", law, [](std::int64_t x) { return x == 0 || x == 1 ? 0.5 : 0.0; },
                   std::make_shared<IndicatorY>(1));
}

}  // namespace

TEST_CASE("joint cf basics") {
  const std::vector<ModelSpec> models = {hashing_model(0.5), occupancy_model(1.0), bose_einstein_model(0.3, 1),
                                         forest_model(0.6, 1)};
  RngStream rng(5, 0);
  for (const auto& model : models) {
    CHECK(std::abs(joint_cf(model, 0.0, 0.0) - 1.0) <= 1e-12);
    const CfEvaluator cf(model);
    for (int i = 0; i < 100; ++i) {
      const double s = (2.0 * rng.uniform() - 1.0) * M_PI;
      const double t = (2.0 * rng.uniform() - 1.0) * 3.0;
      const auto a = cf(s, t);
      const auto b = cf(-s, -t);
      CHECK(std::abs(a - std::conj(b)) <= 1e-12);
      CHECK(std::abs(a) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("Poisson characteristic function") {
  const ModelSpec occ = occupancy_model(1.0);
  for (double s : {0.3, 1.0, 2.0, M_PI}) {
    CHECK(std::abs(joint_cf(occ, s, 0.0)) == doctest::Approx(std::exp(std::cos(s) - 1.0)).epsilon(1e-12));
  }
  CHECK(std::abs(joint_cf(occ, M_PI, 0.0)) == doctest::Approx(0.13533528).epsilon(1e-8));
}

TEST_CASE("inversion at t = 0 recovers P(S = m)") {
  const ModelSpec occ = occupancy_model(1.0);
  const double pois = boost::math::pdf(boost::math::poisson_distribution<>(100.0), 100.0);
  const auto psi = psi_quadrature(occ, {100, 100}, 0.0);
  CHECK(psi.real() == doctest::Approx(2.0 * M_PI * pois).epsilon(1e-8));
  CHECK(std::abs(psi.imag()) <= 1e-10);

  const ModelSpec h = hashing_model(0.5);
  const double p = exact_sum_pmf(h.x_law(), 3).at(6);
  CHECK(psi_quadrature(h, {3, 6}, 0.0).real() == doctest::Approx(2.0 * M_PI * p).epsilon(1e-8));

  CHECK(std::abs(psi_quadrature(h, {3, 2}, 0.0)) <= 1e-10);

  for (auto [N, m] : {std::pair<std::int64_t, std::int64_t>{5, 12}, {10, 30}, {20, 35}}) {
    const double q = exact_sum_probability(h, {N, m});
    CHECK(psi_quadrature(h, {N, m}, 0.0).real() == doctest::Approx(2.0 * M_PI * q).epsilon(1e-8));
  }
}

TEST_CASE("inversion at t != 0 recovers the conditional cf") {
  // psi(t) = 2 pi P(S = m) E[exp(it(T - N EY)) | S = m]
  const std::vector<std::pair<ModelSpec, ConditioningSpec>> cases = {
      {hashing_model(0.5), {4, 9}},
      {occupancy_model(1.0), {30, 30}},
      {bose_einstein_model(0.5, 1), {10, 12}},
  };
  for (const auto& [model, cond] : cases) {
    const ConditionalLaw law = exact_conditional(model, cond);
    const double ey = model.moments().mean_y;
    for (double t : {0.4, 1.3}) {
      std::complex<double> expected(0.0, 0.0);
      for (std::size_t i = 0; i < law.law.size(); ++i) {
        const double centred = static_cast<double>(law.law.support[i]) - static_cast<double>(cond.N) * ey;
        expected += law.law.probs[i] * std::polar(1.0, t * centred);
      }
      expected *= 2.0 * M_PI * law.p_sum;
      CHECK(std::abs(psi_quadrature(model, cond, t) - expected) <= 1e-9);
    }
  }
}

TEST_CASE("quadrature reports an unreachable tolerance") {
  CHECK_THROWS_AS(psi_quadrature(occupancy_model(1.0), {400, 400}, 0.0, 1e-300), QuadratureError);
}

TEST_CASE("local limit ratios") {
  const ModelSpec occ = occupancy_model(1.0);
  const LltReport r = llt_check(occ, {200, 200});
  CHECK(r.v == 0.0);
  CHECK(r.ratio >= 0.95);
  CHECK(r.ratio <= 1.05);

  const LltReport shifted = llt_check(occ, {400, 420});
  CHECK(shifted.v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shifted.ratio >= 0.9);
  CHECK(shifted.ratio <= 1.1);

  // central binomial: C(N, N/2) 2^{-N} sqrt(pi N / 2) increases to 1
  const ModelSpec coin = fair_coin();
  double previous = 0.0;
  for (std::int64_t N : {50, 100, 200, 400}) {
    const LltReport c = llt_check(coin, {N, N / 2});
    const double binom = std::exp(std::lgamma(N + 1.0) - 2.0 * std::lgamma(N / 2 + 1.0) - N * std::log(2.0));
    CHECK(c.p_exact == doctest::Approx(binom).epsilon(1e-10));
    CHECK(c.ratio > previous);
    CHECK(c.ratio < 1.0);
    previous = c.ratio;
  }
  CHECK(previous > 0.99);
}

TEST_CASE("psi(0) sigma sqrt(N) e^{v^2/2} approaches sqrt(2 pi)") {
  const ModelSpec occ = occupancy_model(1.0);
  double previous_gap = INFINITY;
  for (std::int64_t N : {25, 50, 100, 200, 400}) {
    const auto m = N + static_cast<std::int64_t>(std::lround(0.5 * std::sqrt(static_cast<double>(N))));
    const LltReport r = llt_check(occ, {N, m});
    const double scaled =
        psi_quadrature(occ, {N, m}, 0.0).real() * r.sigma_x * std::sqrt(static_cast<double>(N)) * std::exp(r.v * r.v / 2);
    const double gap = std::abs(scaled - std::sqrt(2.0 * M_PI));
    CHECK(gap < previous_gap);
    previous_gap = gap;
  }
  CHECK(previous_gap / std::sqrt(2.0 * M_PI) <= 0.05);
}

TEST_CASE("cf envelope on the occupancy model") {
  const ModelSpec occ = occupancy_model(1.0);
  const ModelSpec prime = y_prime_transform(occ);
  const EnvelopeReport env = cf_envelope_check(prime);
  CHECK(env.positive);
  CHECK(env.c5_hat > 0.0);
  CHECK(env.grid.s_points == 101);

  // small (s, t): 1 - |phi| ~ (sigma_X^2 s^2 + sigma_Y'^2 t^2) / 2
  const double r = std::abs(occ.moments().r);
  CHECK(r == doctest::Approx(0.7628).epsilon(1e-3));
  const double near = envelope_ratio(prime, 1e-3, 1e-3);
  CHECK(near == doctest::Approx(0.5).epsilon(0.1));
  CHECK(near >= 0.9 * (1.0 - r) / 2.0);
  CHECK(env.c5_hat <= near);

  for (std::int64_t l : {0, 10, 50}) {
    CHECK(envelope_excess(prime, env.c5_hat, 100, l) <= 1e-12);
  }
}

TEST_CASE("cf envelope sees a lattice defect") {
  // X on the even integers only: |phi(pi, 0)| = 1
  Pmf law;
  law.support = {0, 2};
  law.probs = {0.5, 0.5};
  const ModelSpec even("even", law, [](std::int64_t x) { return x == 0 || x == 2 ? 0.5 : 0.0; },
                       std::make_shared<IndicatorY>(0));
  const EnvelopeReport env = cf_envelope_check(y_prime_transform(even));
  CHECK_FALSE(env.positive);
  CHECK(env.c5_hat <= 1e-12);
}

TEST_CASE("truncated tables are rejected") {
  CHECK_THROWS_AS(CfEvaluator(hashing_model(0.5, 1e-6)), InputError);
}

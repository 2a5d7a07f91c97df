#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lpcond/conditional_engine.hpp"
#include "lpcond/distributions.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/models.hpp"
#include "lpcond/normal.hpp"

using namespace lpcond;

namespace {

// sup over atoms of |F_emp - F_exact|, both as right-continuous CDFs.
double ks_against(const std::vector<std::int64_t>& values, const Pmf& law) {
  std::vector<std::int64_t> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    cum += law.probs[i];
    const auto upto = std::upper_bound(sorted.begin(), sorted.end(), law.support[i]) - sorted.begin();
    worst = std::max(worst, std::abs(static_cast<double>(upto) / n - cum));
  }
  return worst;
}

}  // namespace

TEST_CASE("forced event") {
  RejectionOptions opt;
  opt.target = 500;
  opt.seed = 1;
  const SampleBatch b = rejection_sample(occupancy_model(1.0), {2, 0}, opt);
  CHECK(b.accepted == 500);
  CHECK(b.values.size() == 500);
  CHECK(std::all_of(b.values.begin(), b.values.end(), [](std::int64_t v) { return v == 2; }));
  CHECK_FALSE(b.partial);
  CHECK(b.accepted <= b.attempts);
}

TEST_CASE("sampled hashing law within the DKW band of the exact law") {
  const ModelSpec model = hashing_model(0.5);
  const ConditioningSpec cond{2, 4};
  RejectionOptions opt;
  opt.target = 100000;
  opt.seed = 42;
  const SampleBatch b = rejection_sample(model, cond, opt);
  REQUIRE(b.accepted == 100000);
  const double eps = dkw_epsilon(b.accepted, 1e-3);
  CHECK(eps == doctest::Approx(0.0062).epsilon(0.01));
  CHECK(ks_against(b.values, exact_conditional_law(model, cond)) <= eps);
}

TEST_CASE("sampled laws within DKW bands on several fixtures") {
  const std::vector<std::pair<ModelSpec, ConditioningSpec>> cases = {
      {hashing_model(0.6), {4, 10}},
      {bose_einstein_model(0.5, 1), {6, 6}},
      {forest_model(0.4, 1), {5, 8}},
      {occupancy_model(1.0), {8, 8}},
  };
  std::uint64_t seed = 100;
  for (const auto& [model, cond] : cases) {
    RejectionOptions opt;
    opt.target = 20000;
    opt.seed = ++seed;
    const SampleBatch b = rejection_sample(model, cond, opt);
    REQUIRE(b.accepted == 20000);
    CHECK(ks_against(b.values, exact_conditional_law(model, cond)) <= dkw_epsilon(b.accepted, 1e-3));
  }
}

TEST_CASE("occupancy mean at N = 100") {
  const ModelSpec model = occupancy_model(1.0);
  const ConditioningSpec cond{100, 100};
  RejectionOptions opt;
  opt.target = 10000;
  opt.seed = 9;
  const SampleBatch b = rejection_sample(model, cond, opt);
  const Pmf exact = exact_conditional_law(model, cond);
  double sum = 0.0;
  for (auto v : b.values) sum += static_cast<double>(v);
  const double mean = sum / static_cast<double>(b.accepted);
  const double se = std::sqrt(exact.variance() / static_cast<double>(b.accepted));
  CHECK(std::abs(mean - exact.mean()) <= 3.0 * se);
}

TEST_CASE("acceptance audit") {
  RejectionOptions opt;
  opt.target = 2000;
  opt.seed = 3;
  const ModelSpec occ = occupancy_model(1.0);
  const SampleBatch b = rejection_sample(occ, {2, 0}, opt);
  const AcceptanceAudit a = acceptance_audit(b, occ, {2, 0});
  REQUIRE(a.p_exact.has_value());
  CHECK(*a.p_exact == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(*a.p_exact == doctest::Approx(0.13533528).epsilon(1e-8));
  CHECK(std::abs(a.rate - *a.p_exact) <= 4.0 * a.rate_se);

  const ModelSpec h = hashing_model(0.5);
  const SampleBatch one = rejection_sample(h, {1, 3}, opt);
  const AcceptanceAudit a1 = acceptance_audit(one, h, {1, 3});
  CHECK(*a1.p_exact == doctest::Approx(borel_pmf(0.5, 3)).epsilon(1e-12));

  RejectionOptions big;
  big.target = 4000;
  big.seed = 5;
  const SampleBatch b200 = rejection_sample(occ, {200, 200}, big);
  const AcceptanceAudit a200 = acceptance_audit(b200, occ, {200, 200});
  CHECK(a200.rate_times_sigma_sqrt2piN >= 0.9);
  CHECK(a200.rate_times_sigma_sqrt2piN <= 1.1);
  CHECK(a200.rate_times_2pi_sigma_sqrtN ==
        doctest::Approx(a200.rate_times_sigma_sqrt2piN * std::sqrt(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("batches are reproducible and independent of the thread count") {
  const ModelSpec h = hashing_model(0.5);
  RejectionOptions opt;
  opt.target = 3000;
  opt.seed = 77;
  opt.chunk_attempts = 1000;
  const SampleBatch a = rejection_sample(h, {10, 20}, opt);
  const SampleBatch b = rejection_sample(h, {10, 20}, opt);
  opt.threads = 4;
  const SampleBatch c = rejection_sample(h, {10, 20}, opt);
  CHECK(a.values == b.values);
  CHECK(a.values == c.values);
  CHECK(a.attempts == c.attempts);
  CHECK(a.max_y == c.max_y);
  opt.seed = 78;
  CHECK(rejection_sample(h, {10, 20}, opt).values != a.values);
}

TEST_CASE("budget exhaustion flags a partial batch") {
  RejectionOptions opt;
  opt.target = 1000;
  opt.budget = 50;
  opt.seed = 1;
  const SampleBatch b = rejection_sample(hashing_model(0.5), {10, 20}, opt);
  CHECK(b.partial);
  CHECK(b.attempts <= 50);
  CHECK(b.accepted < 1000);
  CHECK(static_cast<std::int64_t>(b.values.size()) == b.accepted);
}

TEST_CASE("batch csv") {
  SampleBatch b;
  b.values = {3, 1, 4};
  b.accepted = 3;
  std::ostringstream out;
  write_batch_csv(out, b);
  CHECK(out.str() == "value\n3\n1\n4\n");
}

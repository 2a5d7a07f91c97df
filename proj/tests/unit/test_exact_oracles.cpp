#include "doctest.h"

#include <cmath>
#include <map>

#include <boost/math/distributions/poisson.hpp>

#include "lpcond/distributions.hpp"
#include "lpcond/errors.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/models.hpp"
#include "lpcond/probing.hpp"

using namespace lpcond;

namespace {

// Every one of the m^n address sequences, probed one at a time.
Pmf brute_force_displacement(std::int64_t m, std::int64_t n) {
  std::map<std::int64_t, double> counts;
  std::int64_t total = 1;
  for (std::int64_t i = 0; i < n; ++i) total *= m;
  HashSequence seq{m, std::vector<std::int64_t>(static_cast<std::size_t>(n), 1)};
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t c = code;
    for (auto& a : seq.addresses) {
      a = 1 + c % m;
      c /= m;
    }
    counts[total_displacement(seq)] += 1.0;
  }
  Pmf out;
  for (const auto& [v, c] : counts) {
    out.support.push_back(v);
    out.probs.push_back(c / static_cast<double>(total));
  }
  return out;
}

// Conditional law by listing all compositions x_1 + ... + x_N = m with x_i >= x_min
// and convolving the per-summand Y laws directly.
Pmf conditional_by_compositions(const ModelSpec& model, std::int64_t N, std::int64_t m) {
  std::map<std::int64_t, double> acc;
  std::vector<std::int64_t> x(static_cast<std::size_t>(N), 0);
  const std::int64_t lo = model.x_min();
  double z = 0.0;
  auto visit = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
    if (i + 1 == x.size()) {
      if (left < lo) return;
      x[i] = left;
      double w = 1.0;
      std::map<std::int64_t, double> t{{0, 1.0}};
      for (auto xi : x) {
        w *= model.x_prob(xi);
        const Pmf yl = model.y().law(xi);
        std::map<std::int64_t, double> next;
        for (const auto& [tv, tp] : t) {
          for (std::size_t k = 0; k < yl.size(); ++k) next[tv + yl.support[k]] += tp * yl.probs[k];
        }
        t.swap(next);
      }
      z += w;
      for (const auto& [tv, tp] : t) acc[tv] += w * tp;
      return;
    }
    for (std::int64_t v = lo; v <= left; ++v) {
      x[i] = v;
      self(self, i + 1, left - v);
    }
  };
  visit(visit, 0, m);
  Pmf out;
  for (const auto& [v, p] : acc) {
    if (p <= 0.0) continue;
    out.support.push_back(v);
    out.probs.push_back(p / z);
  }
  return out;
}

}  // namespace

TEST_CASE("exact displacement law on small tables") {
  const Pmf a = exact_displacement_pmf(3, 2);
  CHECK(a.support == std::vector<std::int64_t>{0, 1});
  CHECK(a.at(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(a.at(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const Pmf b = exact_displacement_pmf(2, 1);
  CHECK(b.support == std::vector<std::int64_t>{0});
  CHECK(b.at(0) == 1.0);

  const Pmf c = exact_displacement_pmf(10, 8);
  CHECK(c.at(6) > 0.0);
  CHECK(c.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("multiset enumeration agrees with brute force over all m^n sequences") {
  for (std::int64_t m = 1; m <= 7; ++m) {
    for (std::int64_t n = 0; n <= m && n <= 6; ++n) {
      const Pmf fast = exact_displacement_pmf(m, n);
      const Pmf slow = brute_force_displacement(m, n);
      CHECK(total_variation(fast, slow) <= 1e-14);
    }
  }
}

TEST_CASE("enumeration result does not depend on the thread count") {
  const Pmf one = exact_displacement_pmf(11, 9, 1);
  const Pmf four = exact_displacement_pmf(11, 9, 4);
  CHECK(one.support == four.support);
  CHECK(one.probs == four.probs);
}

TEST_CASE("enumeration guards") {
  CHECK_THROWS_AS(exact_displacement_pmf(4, 5), CapacityError);
  CHECK_THROWS_AS(exact_displacement_pmf(40, 30), InfeasibleError);
}

TEST_CASE("N-fold convolution") {
  const Pmf borel = borel_law(0.5);
  const Pmf one = exact_sum_pmf(borel, 1);
  CHECK(total_variation(one, borel) <= 1e-15);

  const Pmf two = exact_sum_pmf(borel, 2);
  CHECK(two.at(2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(two.at(2) == doctest::Approx(0.36787944).epsilon(1e-8));
  CHECK(two.total_mass() + two.truncation_mass == doctest::Approx(1.0).epsilon(1e-12));

  const Pmf pois = standard_law(Poisson{1.0});
  const Pmf sum = exact_sum_pmf(pois, 100);
  const double expected = boost::math::pdf(boost::math::poisson_distribution<>(100.0), 100.0);
  CHECK(sum.at(100) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(sum.total_mass() + sum.truncation_mass == doctest::Approx(1.0).epsilon(1e-12));

  const Pmf window = exact_sum_pmf(pois, 100, 90, 110);
  CHECK(window.min_value() >= 90);
  CHECK(window.max_value() <= 110);
  CHECK(window.at(100) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(window.total_mass() + window.truncation_mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hand-checked conditional laws") {
  const Pmf h = exact_conditional_law(hashing_model(0.5), {2, 4});
  CHECK(h.support == std::vector<std::int64_t>{0, 1});
  // X in {(1,3), (3,1), (2,2)}; only d_{3,2} can be 1, with probability 1/3
  const double p13 = borel_pmf(0.5, 1) * borel_pmf(0.5, 3);
  const double p22 = borel_pmf(0.5, 2) * borel_pmf(0.5, 2);
  CHECK(h.at(1) == doctest::Approx((2.0 * p13 / 3.0) / (2.0 * p13 + p22)).epsilon(1e-13));
  CHECK(h.at(1) == doctest::Approx(0.25).epsilon(1e-13));

  const Pmf a = exact_conditional_law(hashing_model(0.3), {2, 6});
  const Pmf b = exact_conditional_law(hashing_model(0.5), {2, 6});
  CHECK(total_variation(a, b) <= 1e-10);

  const Pmf o = exact_conditional_law(occupancy_model(1.0), {2, 0});
  CHECK(o.support == std::vector<std::int64_t>{2});
  CHECK(o.at(2) == 1.0);
}

TEST_CASE("normalizing constant matches the convolution") {
  const ModelSpec model = hashing_model(0.6);
  const ConditioningSpec cond{5, 14};
  const ConditionalLaw law = exact_conditional(model, cond);
  const Pmf sum = exact_sum_pmf(model.x_law(), cond.N);
  CHECK(law.p_sum == doctest::Approx(sum.at(cond.m)).epsilon(1e-12));
  CHECK(exact_sum_probability(model, cond) == doctest::Approx(sum.at(cond.m)).epsilon(1e-12));
  CHECK(law.law.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conditional DP agrees with composition enumeration") {
  const ModelSpec h = hashing_model(0.45);
  for (auto [N, m] : {std::pair<std::int64_t, std::int64_t>{1, 5}, {2, 7}, {3, 9}, {4, 10}}) {
    CHECK(total_variation(exact_conditional_law(h, {N, m}), conditional_by_compositions(h, N, m)) <= 1e-12);
  }
  const ModelSpec be = bose_einstein_model(0.4, 1);
  for (auto [N, m] : {std::pair<std::int64_t, std::int64_t>{3, 4}, {4, 6}, {5, 3}}) {
    CHECK(total_variation(exact_conditional_law(be, {N, m}), conditional_by_compositions(be, N, m)) <= 1e-12);
  }
}

TEST_CASE("indicator fast route agrees with the dense route") {
  // the same Y = 1{X = 1} written as an explicit table takes the dense DP
  std::vector<Pmf> table;
  for (std::int64_t x = 0; x <= 40; ++x) table.push_back(Pmf::point(x == 1 ? 1 : 0));
  const Pmf pois = standard_law(Poisson{1.3});
  const ModelSpec fast("fast", pois, [](std::int64_t x) { return standard_pmf(Poisson{1.3}, x); },
                       std::make_shared<IndicatorY>(1));
  const ModelSpec dense("dense", pois, [](std::int64_t x) { return standard_pmf(Poisson{1.3}, x); },
                        std::make_shared<TableY>(table));
  for (auto [N, m] : {std::pair<std::int64_t, std::int64_t>{6, 5}, {12, 15}, {20, 26}}) {
    CHECK(total_variation(exact_conditional_law(fast, {N, m}), exact_conditional_law(dense, {N, m})) <= 1e-12);
  }
}

TEST_CASE("displacement law equals the conditioned hashing sum") {
  for (auto [m, n] : {std::pair<std::int64_t, std::int64_t>{4, 2}, {5, 3}, {6, 4}, {7, 5}}) {
    const Pmf direct = exact_displacement_pmf(m, n);
    const Pmf cond = exact_conditional_law(hashing_model(static_cast<double>(n) / static_cast<double>(m)), {m - n, m});
    CHECK(total_variation(direct, cond) <= 1e-10);
  }
  for (auto [m, n] : {std::pair<std::int64_t, std::int64_t>{10, 8}, {12, 7}}) {
    const Pmf direct = exact_displacement_pmf(m, n);
    const Pmf cond = exact_conditional_law(hashing_model(0.5), {m - n, m});
    CHECK(total_variation(direct, cond) <= 1e-10);
  }
}

TEST_CASE("occupancy formula") {
  const Pmf a = occupancy_exact_pmf(1, 2);
  CHECK(a.support == std::vector<std::int64_t>{1});
  const Pmf b = occupancy_exact_pmf(2, 2);
  CHECK(b.at(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.at(1) == doctest::Approx(0.5).epsilon(1e-15));
  const Pmf c = occupancy_exact_pmf(3, 3);
  CHECK(c.at(0) == doctest::Approx(6.0 / 27).epsilon(1e-15));
  CHECK(c.at(1) == doctest::Approx(18.0 / 27).epsilon(1e-15));
  CHECK(c.at(2) == doctest::Approx(3.0 / 27).epsilon(1e-15));
}

TEST_CASE("occupancy formula equals the conditioned Poisson sum") {
  for (std::int64_t m = 0; m <= 8; ++m) {
    for (std::int64_t N = 1; N <= 8; ++N) {
      for (double lambda : {0.4, 1.0, 2.7}) {
        const Pmf cond = exact_conditional_law(occupancy_model(lambda), {N, m});
        CHECK(total_variation(cond, occupancy_exact_pmf(m, N)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("conditional law does not depend on the free parameter") {
  const Pmf h1 = exact_conditional_law(hashing_model(0.2), {6, 20});
  const Pmf h2 = exact_conditional_law(hashing_model(0.8), {6, 20});
  CHECK(total_variation(h1, h2) <= 1e-10);
  const Pmf o1 = exact_conditional_law(occupancy_model(0.3), {30, 25});
  const Pmf o2 = exact_conditional_law(occupancy_model(3.0), {30, 25});
  CHECK(total_variation(o1, o2) <= 1e-10);
  const Pmf b1 = exact_conditional_law(bose_einstein_model(0.2, 2), {15, 30});
  const Pmf b2 = exact_conditional_law(bose_einstein_model(0.7, 2), {15, 30});
  CHECK(total_variation(b1, b2) <= 1e-10);
  const Pmf f1 = exact_conditional_law(forest_model(0.3, 1), {10, 25});
  const Pmf f2 = exact_conditional_law(forest_model(0.9, 1), {10, 25});
  CHECK(total_variation(f1, f2) <= 1e-10);
}

TEST_CASE("empty conditioning event") {
  CHECK_THROWS_AS(exact_conditional_law(hashing_model(0.5), {3, 2}), ConditioningError);
  CHECK_THROWS_AS(exact_conditional_law(occupancy_model(1.0), {2, -1}), ConditioningError);
}

TEST_CASE("exchangeability moments agree with the full conditional law") {
  const std::vector<std::pair<ModelSpec, ConditioningSpec>> cases = {
      {hashing_model(0.5), {4, 11}},
      {hashing_model(0.7), {3, 12}},
      {occupancy_model(1.0), {50, 50}},
      {bose_einstein_model(0.5, 0), {20, 20}},
      {forest_model(0.4, 1), {12, 20}},
  };
  for (const auto& [model, cond] : cases) {
    const Pmf law = exact_conditional_law(model, cond);
    const ConditionalMoments mom = exact_conditional_moments(model, cond);
    CHECK(mom.mean == doctest::Approx(law.mean()).epsilon(1e-10));
    CHECK(mom.variance == doctest::Approx(law.variance()).epsilon(1e-8));
  }
}

TEST_CASE("largest feasible total") {
  // all n balls on one address: n(n-1)/2
  for (std::int64_t n = 1; n <= 9; ++n) {
    const std::int64_t m = n + 2;
    CHECK(conditional_t_max(hashing_model(0.5), {m - n, m}) == n * (n - 1) / 2);
    CHECK(exact_displacement_pmf(m, n).max_value() == n * (n - 1) / 2);
  }
  CHECK(conditional_t_max(occupancy_model(1.0), {10, 4}) == 9);
}

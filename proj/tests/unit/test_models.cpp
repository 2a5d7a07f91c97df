#include "doctest.h"

#include <cmath>

#include "lpcond/distributions.hpp"
#include "lpcond/errors.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/models.hpp"

using namespace lpcond;

TEST_CASE("hashing scheme parameters") {
  ModelConfig cfg;
  cfg.kind = ModelKind::hashing;
  cfg.n = 8;
  cfg.m = 10;
  const BuiltModel b = build_model(cfg);
  CHECK(b.parameter == doctest::Approx(0.8));
  CHECK(b.cond.N == 2);
  CHECK(b.cond.m == 10);
  CHECK(b.model.moments().mean_x == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("occupancy scheme parameters") {
  ModelConfig cfg;
  cfg.kind = ModelKind::occupancy;
  cfg.m = 100;
  cfg.N = 100;
  const BuiltModel b = build_model(cfg);
  CHECK(b.parameter == doctest::Approx(1.0));
  CHECK(b.model.moments().mean_x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("factory outputs are centred at m / N") {
  std::vector<ModelConfig> configs;
  {
    ModelConfig c;
    c.kind = ModelKind::hashing;
    c.n = 37;
    c.m = 100;
    configs.push_back(c);
  }
  {
    ModelConfig c;
    c.kind = ModelKind::occupancy;
    c.m = 31;
    c.N = 17;
    configs.push_back(c);
  }
  {
    ModelConfig c;
    c.kind = ModelKind::bose_einstein;
    c.n = 40;
    c.N = 25;
    configs.push_back(c);
  }
  {
    ModelConfig c;
    c.kind = ModelKind::branching;
    c.n = 30;
    configs.push_back(c);
  }
  {
    ModelConfig c;
    c.kind = ModelKind::random_forest;
    c.m = 50;
    c.N = 20;
    configs.push_back(c);
  }
  for (const auto& c : configs) {
    const BuiltModel b = build_model(c);
    CAPTURE(to_string(c.kind));
    const double target = static_cast<double>(b.cond.m) / static_cast<double>(b.cond.N);
    if (c.kind == ModelKind::branching) {
      // S = n - 1 against mean 1: centred up to one unit
      CHECK(b.model.moments().mean_x == doctest::Approx(1.0).epsilon(1e-12));
    } else {
      CHECK(b.model.moments().mean_x == doctest::Approx(target).epsilon(1e-10));
    }
  }
}

TEST_CASE("hashing moments match closed forms") {
  for (double mu : {0.1, 0.5, 0.8, 0.9}) {
    const Moments mom = hashing_model(mu).moments();
    CHECK(mom.mean_x == doctest::Approx(1.0 / (1.0 - mu)).epsilon(1e-9));
    CHECK(mom.sigma_x * mom.sigma_x == doctest::Approx(mu / std::pow(1.0 - mu, 3)).epsilon(1e-9));
  }
}

TEST_CASE("forest parameter inversion") {
  const double mu = forest_mu_from_lambda(0.25);
  CHECK(mu == doctest::Approx(0.35740).epsilon(1e-4));
  CHECK(std::abs(mu * std::exp(-mu) - 0.25) <= 1e-10);
  CHECK_THROWS_AS(forest_mu_from_lambda(std::exp(-1.0)), ParameterError);
  CHECK_THROWS_AS(forest_mu_from_lambda(0.5), ParameterError);
  CHECK_THROWS_AS(forest_mu_from_lambda(0.0), ParameterError);

  ModelConfig c;
  c.kind = ModelKind::random_forest;
  c.m = 40;
  c.N = 10;
  c.lambda = 0.25;
  CHECK(build_model(c).parameter == doctest::Approx(mu).epsilon(1e-12));
}

TEST_CASE("parameter range errors") {
  CHECK_THROWS_AS(hashing_model(1.0), ParameterError);
  CHECK_THROWS_AS(occupancy_model(0.0), ParameterError);
  CHECK_THROWS_AS(bose_einstein_model(1.0), ParameterError);
  ModelConfig c;
  c.kind = ModelKind::hashing;
  c.n = 10;
  c.m = 10;
  CHECK_THROWS_AS(build_model(c), ParameterError);
  CHECK_THROWS_AS(parse_model_kind("cuckoo"), InputError);
  for (auto k : {ModelKind::hashing, ModelKind::occupancy, ModelKind::bose_einstein, ModelKind::branching,
                 ModelKind::random_forest}) {
    CHECK(parse_model_kind(to_string(k)) == k);
  }
}

TEST_CASE("branching defaults") {
  ModelConfig c;
  c.kind = ModelKind::branching;
  c.n = 12;
  const BuiltModel b = build_model(c);
  CHECK(b.cond.N == 12);
  CHECK(b.cond.m == 11);
  REQUIRE(b.model.y().indicator_point().has_value());
  CHECK(*b.model.y().indicator_point() == 3);
  CHECK(b.model.moments().sigma_x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Bose-Einstein conditioning counts balls") {
  ModelConfig c;
  c.kind = ModelKind::bose_einstein;
  c.n = 7;
  c.N = 4;
  const BuiltModel b = build_model(c);
  CHECK(b.cond.m == 7);
  CHECK(b.cond.N == 4);
  CHECK(b.parameter == doctest::Approx(4.0 / 11.0));
  // the number of empty urns among 4 when 7 indistinguishable balls are placed:
  // C(4,j) C(6, 3-j) / C(10, 3)
  const Pmf law = exact_conditional_law(b.model, b.cond);
  CHECK(law.at(0) == doctest::Approx(20.0 / 120.0).epsilon(1e-12));
  CHECK(law.at(1) == doctest::Approx(60.0 / 120.0).epsilon(1e-12));
  CHECK(law.at(2) == doctest::Approx(36.0 / 120.0).epsilon(1e-12));
  CHECK(law.at(3) == doctest::Approx(4.0 / 120.0).epsilon(1e-12));
}

TEST_CASE("total progeny: walk event vs direct simulation") {
  const Pmf pois = standard_law(Poisson{1.0});
  const ProgenyCheck one = branching_total_progeny_check(pois, 1, 5, 20000);
  CHECK(one.p_exact == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  // P(X1 = 1, X2 = 0) = e^{-2}
  const ProgenyCheck two = branching_total_progeny_check(pois, 2, 6, 200000);
  CHECK(two.p_exact == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  const ProgenyCheck three = branching_total_progeny_check(pois, 3, 7, 400000, 2);
  CHECK(three.p_exact == doctest::Approx(std::exp(-3.0) * 9.0 / 6.0).epsilon(1e-12));
  CHECK(three.p_exact == doctest::Approx(0.0746806).epsilon(1e-6));
  for (const auto& r : {one, two, three}) {
    CHECK(std::abs(r.z_walk_vs_tree) <= 4.0);
    CHECK(std::abs(r.z_tree_vs_exact) <= 4.0);
    CHECK(std::abs(r.p_walk - r.p_exact) <= 4.0 * r.p_walk_se + 1e-12);
  }
}

#include "lpcond/models.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "lpcond/distributions.hpp"
#include "lpcond/errors.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/parallel.hpp"
#include "lpcond/rng.hpp"

namespace lpcond {

namespace {

std::string fmt(double x) { return format_double(x); }

}  // namespace

ModelSpec hashing_model(double mu, double tol) {
  Pmf x = borel_law(mu, tol);
  return ModelSpec("hashing(mu=" + fmt(mu) + ")", std::move(x),
                   [mu](std::int64_t l) { return borel_pmf(mu, l); }, std::make_shared<DisplacementY>());
}

ModelSpec occupancy_model(double lambda, double tol) {
  const StandardLaw law = Poisson{lambda};
  Pmf x = standard_law(law, tol);
  return ModelSpec("occupancy(lambda=" + fmt(lambda) + ")", std::move(x),
                   [law](std::int64_t k) { return standard_pmf(law, k); }, std::make_shared<IndicatorY>(0));
}

ModelSpec bose_einstein_model(double p, std::int64_t k, double tol) {
  const StandardLaw law = Geometric{p};
  Pmf x = standard_law(law, tol);
  return ModelSpec("bose_einstein(p=" + fmt(p) + ")", std::move(x),
                   [law](std::int64_t v) { return standard_pmf(law, v); }, std::make_shared<IndicatorY>(k));
}

ModelSpec branching_model(const Pmf& offspring, std::int64_t k) {
  if (offspring.empty() || offspring.min_value() < 0) {
    throw ParameterError("offspring law must be a nonempty law on the non-negative integers");
  }
  KahanSum mean;
  for (std::size_t i = 0; i < offspring.size(); ++i) mean.add(offspring.probs[i] * static_cast<double>(offspring.support[i]));
  if (std::abs(mean.value() - 1.0) > 1e-9) {
    throw ParameterError("offspring law must have mean 1, got " + fmt(mean.value()));
  }
  return ModelSpec("branching", offspring, nullptr, std::make_shared<IndicatorY>(k));
}

ModelSpec forest_model(double mu, std::int64_t k, double tol) {
  Pmf x = borel_law(mu, tol);
  return ModelSpec("random_forest(mu=" + fmt(mu) + ")", std::move(x),
                   [mu](std::int64_t l) { return borel_pmf(mu, l); }, std::make_shared<IndicatorY>(k));
}

double forest_mu_from_lambda(double lambda) {
  const double top = std::exp(-1.0);
  if (!(lambda > 0.0 && lambda < top)) {
    throw ParameterError("forest lambda must lie in (0, e^-1); e^-1 corresponds to mu = 1");
  }
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(-mid) < lambda) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::hashing: return "hashing";
    case ModelKind::occupancy: return "occupancy";
    case ModelKind::bose_einstein: return "bose_einstein";
    case ModelKind::branching: return "branching";
    case ModelKind::random_forest: return "random_forest";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  for (ModelKind k : {ModelKind::hashing, ModelKind::occupancy, ModelKind::bose_einstein, ModelKind::branching,
                      ModelKind::random_forest}) {
    if (name == to_string(k)) return k;
  }
  if (name == "bose-einstein") return ModelKind::bose_einstein;
  if (name == "random-forest" || name == "forest") return ModelKind::random_forest;
  throw InputError("unknown model kind '" + name + "'");
}

BuiltModel build_model(const ModelConfig& c) {
  switch (c.kind) {
    case ModelKind::hashing: {
      if (c.m < 1 || c.n < 1 || c.n >= c.m) throw ParameterError("hashing needs 1 <= n < m");
      const double mu = c.parameter.value_or(static_cast<double>(c.n) / static_cast<double>(c.m));
      return BuiltModel{hashing_model(mu), ConditioningSpec{c.m - c.n, c.m}, mu};
    }
    case ModelKind::occupancy: {
      if (c.N < 1 || c.m < 0) throw ParameterError("occupancy needs N >= 1 urns and m >= 0 balls");
      const double lambda = c.parameter.value_or(static_cast<double>(c.m) / static_cast<double>(c.N));
      return BuiltModel{occupancy_model(lambda), ConditioningSpec{c.N, c.m}, lambda};
    }
    case ModelKind::bose_einstein: {
      if (c.N < 1 || c.n < 0) throw ParameterError("bose_einstein needs N >= 1 urns and n >= 0 balls");
      const double p =
          c.parameter.value_or(static_cast<double>(c.N) / static_cast<double>(c.n + c.N));
      return BuiltModel{bose_einstein_model(p, c.y_point.value_or(0)), ConditioningSpec{c.N, c.n}, p};
    }
    case ModelKind::branching: {
      if (c.n < 1) throw ParameterError("branching needs total progeny n >= 1");
      const Pmf offspring = c.offspring ? *c.offspring : standard_law(Poisson{1.0});
      return BuiltModel{branching_model(offspring, c.y_point.value_or(3)), ConditioningSpec{c.n, c.n - 1}, 1.0};
    }
    case ModelKind::random_forest: {
      if (c.N < 1 || c.m <= c.N) throw ParameterError("random_forest needs m > N >= 1");
      double mu;
      if (c.lambda) {
        mu = forest_mu_from_lambda(*c.lambda);
      } else {
        mu = c.parameter.value_or(1.0 - static_cast<double>(c.N) / static_cast<double>(c.m));
      }
      return BuiltModel{forest_model(mu, c.y_point.value_or(1)), ConditioningSpec{c.N, c.m}, mu};
    }
  }
  throw InputError("unknown model kind");
}

ProgenyCheck branching_total_progeny_check(const Pmf& offspring, std::int64_t n, std::uint64_t seed,
                                           std::int64_t samples, unsigned threads) {
  if (n < 1) throw InputError("total progeny check needs n >= 1");
  if (samples < 1) throw InputError("total progeny check needs samples >= 1");
  const DiscreteSampler draw(offspring);

  ProgenyCheck out;
  out.n = n;
  out.samples = samples;
  out.p_exact = exact_sum_pmf(offspring, n, n - 1, n - 1).at(n - 1) / static_cast<double>(n);

  constexpr std::int64_t kChunk = 1 << 16;
  const std::size_t chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  std::vector<std::int64_t> walk_hits(chunks, 0);
  std::vector<std::int64_t> tree_hits(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    RngStream rng(seed, c);
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t count = std::min(kChunk, samples - begin);
    for (std::int64_t s = 0; s < count; ++s) {
      // walk: S_k >= k for k < n and S_n = n - 1
      std::int64_t partial = 0;
      bool ok = true;
      for (std::int64_t k = 1; k <= n; ++k) {
        partial += draw(rng);
        if (k < n && partial < k) {
          ok = false;
          break;
        }
      }
      if (ok && partial == n - 1) ++walk_hits[c];
      // direct tree: explore individuals until none are pending or the size passes n
      std::int64_t pending = 1;
      std::int64_t size = 0;
      while (pending > 0 && size <= n) {
        --pending;
        ++size;
        pending += draw(rng);
      }
      if (pending == 0 && size == n) ++tree_hits[c];
    }
  });
  std::int64_t walk = 0;
  std::int64_t tree = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    walk += walk_hits[c];
    tree += tree_hits[c];
  }
  const double total = static_cast<double>(samples);
  out.p_walk = static_cast<double>(walk) / total;
  out.p_tree = static_cast<double>(tree) / total;
  out.p_walk_se = std::sqrt(out.p_walk * (1.0 - out.p_walk) / total);
  out.p_tree_se = std::sqrt(out.p_tree * (1.0 - out.p_tree) / total);
  const double se_pair = std::hypot(out.p_walk_se, out.p_tree_se);
  out.z_walk_vs_tree = se_pair > 0.0 ? (out.p_walk - out.p_tree) / se_pair : 0.0;
  out.z_tree_vs_exact = out.p_tree_se > 0.0 ? (out.p_tree - out.p_exact) / out.p_tree_se : 0.0;
  return out;
}

}  // namespace lpcond

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lpcond/model.hpp"
#include "lpcond/pmf.hpp"

namespace lpcond {

// Single-law constructors. X tables are truncated at `tol` with the analytic
// tail recorded in truncation_mass; x_prob stays exact beyond the table.

/// X ~ Borel(mu), Y | X = l ~ d_{l,l-1}.
ModelSpec hashing_model(double mu, double tol = 1e-15);
/// X ~ Poisson(lambda), Y = 1{X = 0}.
ModelSpec occupancy_model(double lambda, double tol = 1e-16);
/// X ~ Geometric(p) on {0, 1, ...}, Y = 1{X = k}.
ModelSpec bose_einstein_model(double p, std::int64_t k = 0, double tol = 1e-16);
/// X ~ offspring law (mean 1), Y = 1{X = k}.
ModelSpec branching_model(const Pmf& offspring, std::int64_t k = 3);
/// X ~ Borel(mu), Y = 1{X = k}.
ModelSpec forest_model(double mu, std::int64_t k = 1, double tol = 1e-15);

/// Solves mu e^{-mu} = lambda on (0, 1) by bisection to 1e-12.
/// Throws ParameterError unless 0 < lambda < e^{-1}.
double forest_mu_from_lambda(double lambda);

enum class ModelKind { hashing, occupancy, bose_einstein, branching, random_forest };

std::string to_string(ModelKind kind);
/// Throws InputError for unknown names.
ModelKind parse_model_kind(const std::string& name);

/// Scheme parameters. Which fields are read depends on `kind`:
///  hashing        n balls in m urns; N = m - n, condition S = m, mu = n/m
///  occupancy      m balls in N urns; lambda = m/N
///  bose_einstein  n balls in N urns; condition S = n, p = N/(n + N)
///  branching      total progeny n; N = n, condition S = n - 1
///  random_forest  m vertices in N trees; mu = 1 - N/m, or from `lambda`
/// `parameter` overrides the scheme's free parameter (mu, lambda or p).
struct ModelConfig {
  ModelKind kind = ModelKind::hashing;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t N = 0;
  std::optional<double> parameter;
  std::optional<double> lambda;        // random_forest only
  std::optional<std::int64_t> y_point;  // k in Y = 1{X = k}
  std::optional<Pmf> offspring;         // branching; default Poisson(1)
};

struct BuiltModel {
  ModelSpec model;
  ConditioningSpec cond;
  double parameter = 0.0;  // mu, lambda or p actually used
};

BuiltModel build_model(const ModelConfig& config);

struct ProgenyCheck {
  std::int64_t n = 0;
  std::int64_t samples = 0;
  double p_exact = 0.0;       // P(S_n = n - 1) / n
  double p_walk = 0.0;        // MC frequency of the walk event S_k >= k (k < n), S_n = n - 1
  double p_walk_se = 0.0;
  double p_tree = 0.0;        // MC frequency of total progeny n by direct simulation
  double p_tree_se = 0.0;
  double z_walk_vs_tree = 0.0;
  double z_tree_vs_exact = 0.0;
};

/// Compares the walk characterization of total progeny with direct
/// Galton-Watson simulation and with the exact value.
ProgenyCheck branching_total_progeny_check(const Pmf& offspring, std::int64_t n, std::uint64_t seed,
                                           std::int64_t samples, unsigned threads = 1);

}  // namespace lpcond

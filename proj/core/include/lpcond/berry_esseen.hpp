#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpcond/fourier_llt.hpp"
#include "lpcond/model.hpp"
#include "lpcond/pmf.hpp"

namespace lpcond {

/// Replaces Y by Y' = Y - EY - (Cov(X,Y) / sigma_X^2)(X - EX), composing with
/// any affine map already present. Throws DegenerateModelError if sigma_X = 0.
ModelSpec y_prime_transform(const ModelSpec& model);

struct PredictedMoments {
  double mean = 0.0;      // N EY + r (sigma_Y / sigma_X)(m - N EX)
  double variance = 0.0;  // N tau^2
};

PredictedMoments predicted_moments(const ModelSpec& model, const ConditioningSpec& cond);

struct KolmogorovResult {
  double distance = 0.0;
  double at = 0.0;             // atom where the supremum is reached
  std::optional<double> band;  // DKW half-width for sampled input
};

/// sup_x |P((U - mean) / sd <= x) - Phi(x)| over an exact law, checking the
/// CDF and its left limit at every atom.
KolmogorovResult kolmogorov_distance(const Pmf& law, double mean, double sd);
/// Same for an empirical law, with a DKW band at level alpha.
KolmogorovResult kolmogorov_distance(const std::vector<std::int64_t>& values, double mean, double sd,
                                     double alpha = 1e-3);

/// Hypothesis bounds feeding the constant pipeline.
struct Bounds {
  double c1_lower = 0.0;  // lower bound on sigma_X
  double c1 = 0.0;        // upper bound on sigma_X
  double c2 = 0.0;        // rho_X <= c2^3 sigma_X^3
  double c3_lower = 0.0;  // lower bound on sigma_Y
  double c3 = 0.0;        // upper bound on sigma_Y
  double c4 = 0.0;        // rho_Y <= c4^3 sigma_Y^3
  double c5 = 0.0;        // CF envelope
  double c5_lower = 0.0;  // P(S = m) >= c5_lower / (2 pi sigma_X sqrt N)
  double c6 = 0.0;        // |r| <= c6 < 1
  double eta0 = 1.0;
};

struct ConstantSet {
  Bounds bounds;
  double eta = 0.0;
  double epsilon = 0.0;
  double C0 = 98.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double C = 0.0;
  double c7 = 0.0;
  double c8_second = 0.0;  // c8''
  double c8_third = 0.0;   // c8'''
  double c8 = 0.0;
  std::int64_t N0 = 0;
  std::int64_t N0_tilde = 0;
};

// Closed-form Gaussian integrals over the real line.
double gauss_second_moment_integral(double c);  // int s^2 e^{-c s^2/2} ds
double gauss_fourth_moment_integral(double c);  // int s^4 e^{-c s^2/3} ds
double gauss_abs_moment_integral(double c);     // int |s| e^{-c s^2/2} ds
/// int int (|s| + |u| + 1)^3 e^{-(s^2 + u^2)/24} ds du by 2-D quadrature.
double cubic_gaussian_integral();

/// Throws HypothesisError for nonpositive bounds or c6 >= 1.
ConstantSet constant_set(const Bounds& bounds);

struct AuditReport {
  Moments moments;        // of (X, Y)
  Moments prime_moments;  // of (X, Y')
  Bounds bounds;
  double p_sum = 0.0;
  double K = 0.0;                   // |m - N EX| / (sigma_X sqrt N)
  double sigma_x_floor = 0.0;       // (4 c2^3)^{-1}
  double tau_floor_c3 = 0.0;        // c~3^2 (1 - c6^2), reading c~2 as c~3
  double tau_floor_c1 = 0.0;        // c~1^2 (1 - c6^2), reading c~2 as c~1
  EnvelopeReport envelope;
  std::optional<ConstantSet> constants;
  std::vector<std::string> violations;
};

/// Tightest single-model bounds: c~1 = c1 = sigma_X, c2 = rho_X^{1/3} / sigma_X,
/// c~3 = c3 = sigma_Y, c4 = rho_Y^{1/3} / sigma_Y, c6 = |r|, c5 from the CF
/// grid on the Y' model, c~5 = 2 pi sigma_X sqrt N P(S = m).
AuditReport hypothesis_audit(const ModelSpec& model, const ConditioningSpec& cond, const GridSpec& grid = {});

}  // namespace lpcond

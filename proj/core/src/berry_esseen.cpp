#include "lpcond/berry_esseen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "lpcond/errors.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/normal.hpp"

namespace lpcond {

namespace {

std::string fmt(double x) { return format_double(x); }

}  // namespace

ModelSpec y_prime_transform(const ModelSpec& model) {
  const Moments& mom = model.moments();
  if (!(mom.sigma_x > 0.0)) throw DegenerateModelError("Y' projection needs sigma_X > 0");
  const AffineY& old = model.affine();
  AffineY next;
  next.x_centre = mom.mean_x;
  next.x_slope = old.x_slope + mom.cov_xy / (mom.sigma_x * mom.sigma_x);
  next.offset = old.offset + old.x_slope * (mom.mean_x - old.x_centre) + mom.mean_y;
  return model.with_affine(next);
}

PredictedMoments predicted_moments(const ModelSpec& model, const ConditioningSpec& cond) {
  const Moments& mom = model.moments();
  if (!(mom.sigma_x > 0.0)) throw DegenerateModelError("predicted moments need sigma_X > 0");
  const double n = static_cast<double>(cond.N);
  PredictedMoments out;
  out.mean = n * mom.mean_y +
             mom.cov_xy / (mom.sigma_x * mom.sigma_x) * (static_cast<double>(cond.m) - n * mom.mean_x);
  out.variance = n * mom.tau * mom.tau;
  return out;
}

KolmogorovResult kolmogorov_distance(const Pmf& law, double mean, double sd) {
  if (!(sd > 0.0)) throw InputError("kolmogorov_distance needs sd > 0");
  if (law.empty()) throw InputError("kolmogorov_distance needs a nonempty law");
  const double mass = law.total_mass();
  KolmogorovResult out;
  KahanSum cdf;
  for (std::size_t i = 0; i < law.size(); ++i) {
    const double x = static_cast<double>(law.support[i]);
    const double phi = normal_cdf((x - mean) / sd);
    const double before = cdf.value();
    cdf.add(law.probs[i] / mass);
    const double after = i + 1 == law.size() ? 1.0 : cdf.value();
    const double gap = std::max(std::abs(after - phi), std::abs(before - phi));
    if (gap > out.distance) {
      out.distance = gap;
      out.at = x;
    }
  }
  return out;
}

KolmogorovResult kolmogorov_distance(const std::vector<std::int64_t>& values, double mean, double sd,
                                     double alpha) {
  if (values.empty()) throw InputError("kolmogorov_distance needs at least one value");
  std::map<std::int64_t, std::int64_t> counts;
  for (std::int64_t v : values) ++counts[v];
  Pmf law;
  for (const auto& [v, c] : counts) {
    law.support.push_back(v);
    law.probs.push_back(static_cast<double>(c) / static_cast<double>(values.size()));
  }
  KolmogorovResult out = kolmogorov_distance(law, mean, sd);
  out.band = dkw_epsilon(static_cast<std::int64_t>(values.size()), alpha);
  return out;
}

double gauss_second_moment_integral(double c) { return std::sqrt(2.0 * std::numbers::pi) * std::pow(c, -1.5); }

double gauss_fourth_moment_integral(double c) {
  return 0.75 * std::sqrt(std::numbers::pi) * std::pow(3.0 / c, 2.5);
}

double gauss_abs_moment_integral(double c) { return 2.0 / c; }

double cubic_gaussian_integral() {
  using Rule = boost::math::quadrature::gauss<double, 32>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  // Nodes on [0, 48] in six panels; the weight e^{-s^2/24} is below e^{-96} beyond.
  std::vector<double> nodes;
  std::vector<double> weights;
  for (int p = 0; p < 6; ++p) {
    const double c = 8.0 * p + 4.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        nodes.push_back(c + sign * 4.0 * x[i]);
        weights.push_back(4.0 * w[i]);
      }
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double gs = weights[i] * std::exp(-nodes[i] * nodes[i] / 24.0);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double base = nodes[i] + nodes[j] + 1.0;
      sum += gs * weights[j] * std::exp(-nodes[j] * nodes[j] / 24.0) * base * base * base;
    }
  }
  return 4.0 * sum;  // four quadrants
}

ConstantSet constant_set(const Bounds& b) {
  const std::pair<const char*, double> named[] = {
      {"c~1", b.c1_lower}, {"c1", b.c1}, {"c2", b.c2}, {"c~3", b.c3_lower}, {"c3", b.c3},
      {"c4", b.c4},        {"c5", b.c5}, {"c~5", b.c5_lower}, {"c6", b.c6}, {"eta0", b.eta0}};
  for (const auto& [name, value] : named) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw HypothesisError(std::string("bound ") + name + " must be positive and finite, got " + fmt(value));
    }
  }
  if (b.c6 >= 1.0) throw HypothesisError("c6 must be < 1, got " + fmt(b.c6));

  ConstantSet k;
  k.bounds = b;
  const double c2_3 = b.c2 * b.c2 * b.c2;
  const double c4_3 = b.c4 * b.c4 * b.c4;
  k.eta = std::min(2.0 / 9.0 * b.c3 * c4_3, b.eta0);
  k.epsilon = std::min(2.0 / 9.0 * b.c1 * c2_3, std::numbers::pi);
  k.C0 = 98.0;
  k.C1 = k.C0 * (c2_3 + c4_3) * cubic_gaussian_integral() / b.c5_lower;
  const double low5 = std::min(1.0, b.c5);
  k.C2 = 2.0 / (b.c5_lower * b.c5) *
         (std::sqrt(2.0 * std::numbers::pi) / std::sqrt(low5) + 2.0 / (low5 * k.epsilon * b.c1_lower));
  k.C3 = b.c5 * k.epsilon * k.epsilon * b.c1_lower * b.c1_lower / 2.0;
  k.C = k.C1 + k.C2 / std::sqrt(k.C3) * std::sqrt(0.5) * std::exp(-0.5) +
        24.0 / (b.c3_lower * std::numbers::pi * std::sqrt(2.0 * std::numbers::pi)) / k.eta;
  k.c7 = b.c2 * b.c2 * b.c3 * b.c4 / (2.0 * b.c5_lower) * gauss_second_moment_integral(b.c5);
  k.c8_second = std::pow(b.c2, 4) * b.c3 * b.c3 * b.c4 * b.c4 / (4.0 * b.c5_lower) * gauss_fourth_moment_integral(b.c5);
  k.c8_third = b.c3 / b.c5_lower * (1.0 + b.c2 * b.c4 * b.c4) * gauss_abs_moment_integral(b.c5);
  k.c8 = k.c7 + k.c8_second + k.c8_third;
  k.N0 = static_cast<std::int64_t>(std::ceil(std::max({3.0, std::pow(b.c2, 6), std::pow(b.c4, 6)})));
  k.N0_tilde = std::max(k.N0, static_cast<std::int64_t>(std::ceil(4.0 * k.c8 * k.c8 / (b.c3_lower * b.c3_lower))));
  for (double v : {k.eta, k.epsilon, k.C1, k.C2, k.C3, k.C, k.c7, k.c8}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw HypothesisError("constant pipeline produced a non-positive value");
  }
  return k;
}

AuditReport hypothesis_audit(const ModelSpec& model, const ConditioningSpec& cond, const GridSpec& grid) {
  AuditReport out;
  out.moments = model.moments();
  const Moments& mom = out.moments;
  if (!(mom.sigma_x > 0.0)) throw DegenerateModelError("audit needs sigma_X > 0");
  const ModelSpec prime = y_prime_transform(model);
  out.prime_moments = prime.moments();

  const double n = static_cast<double>(cond.N);
  Bounds& b = out.bounds;
  b.c1_lower = mom.sigma_x;
  b.c1 = mom.sigma_x;
  b.c2 = std::cbrt(mom.rho_x) / mom.sigma_x;
  b.c3_lower = mom.sigma_y;
  b.c3 = mom.sigma_y;
  b.c4 = mom.sigma_y > 0.0 ? std::cbrt(mom.rho_y) / mom.sigma_y : 0.0;
  b.c6 = std::abs(mom.r);
  b.eta0 = grid.eta0;
  out.envelope = cf_envelope_check(prime, grid);
  b.c5 = out.envelope.c5_hat;
  out.p_sum = exact_sum_probability(model, cond);
  b.c5_lower = 2.0 * std::numbers::pi * mom.sigma_x * std::sqrt(n) * out.p_sum;

  out.K = std::abs(static_cast<double>(cond.m) - n * mom.mean_x) / (mom.sigma_x * std::sqrt(n));
  out.sigma_x_floor = 1.0 / (4.0 * b.c2 * b.c2 * b.c2);
  out.tau_floor_c3 = b.c3_lower * b.c3_lower * (1.0 - b.c6 * b.c6);
  out.tau_floor_c1 = b.c1_lower * b.c1_lower * (1.0 - b.c6 * b.c6);

  auto& v = out.violations;
  if (mom.sigma_x < out.sigma_x_floor) v.push_back("sigma_X below (4 c2^3)^-1");
  if (mom.sigma_x * mom.sigma_x > 4.0 * mom.rho_x) v.push_back("sigma_X^2 exceeds 4 rho_X");
  if (!out.envelope.positive) v.push_back("CF envelope: c5 grid minimum is not positive");
  if (!(mom.sigma_y > 0.0)) v.push_back("sigma_Y is zero");
  if (b.c6 >= 1.0) v.push_back("|r| is not below 1");
  const double tau2 = mom.tau * mom.tau;
  if (tau2 < out.tau_floor_c3 * (1.0 - 1e-12)) v.push_back("tau^2 below c~3^2 (1 - c6^2)");
  if (tau2 < out.tau_floor_c1 * (1.0 - 1e-12)) v.push_back("tau^2 below c~1^2 (1 - c6^2) (alternative reading)");
  if (!(out.p_sum > 0.0)) v.push_back("P(S = m) is zero");
  try {
    out.constants = constant_set(b);
    if (cond.N < out.constants->N0) v.push_back("N below N0 = " + std::to_string(out.constants->N0));
  } catch (const HypothesisError& e) {
    v.push_back(std::string("constant pipeline: ") + e.what());
  }
  return out;
}

}  // namespace lpcond

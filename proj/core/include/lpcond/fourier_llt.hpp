#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "lpcond/model.hpp"

namespace lpcond {

/// Joint characteristic function of the centred pair (X - EX, Y_eff - EY_eff)
/// over the model's truncated X table.
class CfEvaluator {
 public:
  /// Throws InputError if the X table drops more than 1e-10 of mass.
  explicit CfEvaluator(const ModelSpec& model);

  /// Per-x weights P(x) E[e^{it(Y_eff - EY_eff)} | x] for a fixed t.
  struct Slice {
    double t = 0.0;
    std::vector<double> x_centred;
    std::vector<std::complex<double>> weight;
  };
  Slice slice(double t) const;
  static std::complex<double> at(const Slice& slice, double s);

  std::complex<double> operator()(double s, double t) const { return at(slice(t), s); }
  /// Upper bound on |error| from the dropped X mass.
  double truncation_error() const noexcept { return truncation_; }

 private:
  const ModelSpec* model_;
  double truncation_;
};

std::complex<double> joint_cf(const ModelSpec& model, double s, double t);

/// psi(t) = int_{-pi}^{pi} e^{-is(m - N EX)} phi(s, t)^N ds by adaptive
/// Gauss-Legendre panels (order 32). Throws QuadratureError carrying the
/// achieved estimate when the absolute tolerance cannot be met.
std::complex<double> psi_quadrature(const ModelSpec& model, const ConditioningSpec& cond, double t,
                                    double abs_tol = 1e-10, unsigned threads = 1);

struct LltReport {
  double p_exact = 0.0;
  double p_gaussian = 0.0;  // e^{-v^2/2} / (sigma_X sqrt(2 pi N))
  double ratio = 0.0;
  double v = 0.0;           // (m - N EX) / (sigma_X sqrt N)
  double sigma_x = 0.0;
};

LltReport llt_check(const ModelSpec& model, const ConditioningSpec& cond);

struct GridSpec {
  std::int64_t s_points = 101;  // uniform on [-pi, pi]
  std::int64_t t_points = 101;  // uniform on [0, eta0]
  double eta0 = 1.0;
};

struct EnvelopeReport {
  double c5_hat = 0.0;  // grid minimum, not a certified infimum
  double s_at_min = 0.0;
  double t_at_min = 0.0;
  bool positive = false;
  GridSpec grid;
};

/// Grid minimum of (1 - |phi(s,t)|) / (sigma_X^2 s^2 + sigma_Y^2 t^2), (0,0)
/// excluded. Meant for a model already projected to Y'.
EnvelopeReport cf_envelope_check(const ModelSpec& model, const GridSpec& grid = {});

/// (1 - |phi(s,t)|) / (sigma_X^2 s^2 + sigma_Y^2 t^2) at one point.
double envelope_ratio(const ModelSpec& model, double s, double t);

/// Largest excess of |phi(s/(sigma_X sqrt N), t/(sigma_Y sqrt N))|^{N-l} over
/// exp(-(s^2 + t^2) c5 (N - l) / N) on a deterministic point set inside the
/// grid domain. Non-positive means the envelope held everywhere tested.
double envelope_excess(const ModelSpec& model, double c5, std::int64_t N, std::int64_t l,
                       const GridSpec& grid = {});

}  // namespace lpcond

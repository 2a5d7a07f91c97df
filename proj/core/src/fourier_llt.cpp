#include "lpcond/fourier_llt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "lpcond/errors.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/parallel.hpp"

namespace lpcond {

namespace {

using Complex = std::complex<double>;
using Rule = boost::math::quadrature::gauss<double, 32>;

constexpr int kMaxSplitsPerPanel = 256;

template <typename F>
Complex panel(const F& f, double a, double b) {
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * (f(c + h * x[i]) + f(c - h * x[i]));
  return sum * h;
}

struct PanelResult {
  Complex value;
  double error = 0.0;
  bool converged = true;
};

template <typename F>
PanelResult refine(const F& f, double a, double b, Complex whole, double tol, int depth, int& splits) {
  const double mid = 0.5 * (a + b);
  const Complex left = panel(f, a, mid);
  const Complex right = panel(f, mid, b);
  const double err = std::abs(left + right - whole);
  if (err <= tol) return PanelResult{left + right, err, true};
  if (depth >= 40 || --splits < 0) return PanelResult{left + right, err, false};
  const PanelResult l = refine(f, a, mid, left, 0.5 * tol, depth + 1, splits);
  const PanelResult r = refine(f, mid, b, right, 0.5 * tol, depth + 1, splits);
  return PanelResult{l.value + r.value, l.error + r.error, l.converged && r.converged};
}

}  // namespace

CfEvaluator::CfEvaluator(const ModelSpec& model) : model_(&model) {
  const Pmf& x = model.x_law();
  truncation_ = std::max(x.truncation_mass, std::abs(1.0 - x.total_mass()));
  if (truncation_ > 1e-10) {
    throw InputError("characteristic functions need an X table with at most 1e-10 dropped mass");
  }
}

CfEvaluator::Slice CfEvaluator::slice(double t) const {
  const Pmf& x = model_->x_law();
  const Moments& mom = model_->moments();
  const auto cond_cf = model_->y().cf(x.max_value(), t);
  Slice out;
  out.t = t;
  out.x_centred.resize(x.size());
  out.weight.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::int64_t v = x.support[i];
    const double centre = model_->affine().shift(v) + mom.mean_y;
    out.x_centred[i] = static_cast<double>(v) - mom.mean_x;
    out.weight[i] = x.probs[i] * cond_cf[static_cast<std::size_t>(v)] * std::polar(1.0, -t * centre);
  }
  return out;
}

Complex CfEvaluator::at(const Slice& slice, double s) {
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < slice.weight.size(); ++i) {
    sum += slice.weight[i] * std::polar(1.0, s * slice.x_centred[i]);
  }
  return sum;
}

Complex joint_cf(const ModelSpec& model, double s, double t) { return CfEvaluator(model)(s, t); }

Complex psi_quadrature(const ModelSpec& model, const ConditioningSpec& cond, double t, double abs_tol,
                       unsigned threads) {
  if (cond.N < 1) throw InputError("psi_quadrature needs N >= 1");
  const CfEvaluator cf(model);
  const CfEvaluator::Slice slice = cf.slice(t);
  const Moments& mom = model.moments();
  const double n = static_cast<double>(cond.N);
  const double drift = static_cast<double>(cond.m) - n * mom.mean_x;
  auto integrand = [&](double s) {
    const Complex phi = CfEvaluator::at(slice, s);
    if (phi == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
    return std::polar(1.0, -s * drift) * std::exp(n * std::log(phi));
  };
  // Panels sized to the peak width 1/(sigma sqrt N) and the oscillation rate |drift|.
  const auto panels = static_cast<std::size_t>(
      16.0 + std::ceil(4.0 * mom.sigma_x * std::sqrt(n)) + std::ceil(std::abs(drift) / 2.0));
  const double width = 2.0 * std::numbers::pi / static_cast<double>(panels);
  const double panel_tol = abs_tol / static_cast<double>(panels);
  std::vector<PanelResult> results(panels);
  parallel_for(panels, threads, [&](std::size_t i) {
    const double a = -std::numbers::pi + width * static_cast<double>(i);
    const double b = i + 1 == panels ? std::numbers::pi : a + width;
    int splits = kMaxSplitsPerPanel;
    results[i] = refine(integrand, a, b, panel(integrand, a, b), panel_tol, 0, splits);
  });
  Complex total(0.0, 0.0);
  double error = 0.0;
  bool converged = true;
  for (const PanelResult& r : results) {
    total += r.value;
    error += r.error;
    converged = converged && r.converged;
  }
  if (!converged || error > abs_tol) {
    throw QuadratureError("psi quadrature missed its tolerance", std::abs(total), error);
  }
  return total;
}

LltReport llt_check(const ModelSpec& model, const ConditioningSpec& cond) {
  const Moments& mom = model.moments();
  if (!(mom.sigma_x > 0.0)) throw DegenerateModelError("llt_check needs sigma_X > 0");
  LltReport out;
  const double n = static_cast<double>(cond.N);
  out.sigma_x = mom.sigma_x;
  out.p_exact = exact_sum_probability(model, cond);
  out.v = (static_cast<double>(cond.m) - n * mom.mean_x) / (mom.sigma_x * std::sqrt(n));
  out.p_gaussian = std::exp(-0.5 * out.v * out.v) / (mom.sigma_x * std::sqrt(2.0 * std::numbers::pi * n));
  out.ratio = out.p_exact / out.p_gaussian;
  return out;
}

double envelope_ratio(const ModelSpec& model, double s, double t) {
  const Moments& mom = model.moments();
  const double q = mom.sigma_x * mom.sigma_x * s * s + mom.sigma_y * mom.sigma_y * t * t;
  return (1.0 - std::abs(joint_cf(model, s, t))) / q;
}

EnvelopeReport cf_envelope_check(const ModelSpec& model, const GridSpec& grid) {
  if (grid.s_points < 2 || grid.t_points < 2 || !(grid.eta0 > 0.0)) {
    throw InputError("envelope grid needs at least 2 points per axis and eta0 > 0");
  }
  const CfEvaluator cf(model);
  const Moments& mom = model.moments();
  const double vx = mom.sigma_x * mom.sigma_x;
  const double vy = mom.sigma_y * mom.sigma_y;
  EnvelopeReport out;
  out.grid = grid;
  out.c5_hat = INFINITY;
  for (std::int64_t j = 0; j < grid.t_points; ++j) {
    const double t = grid.eta0 * static_cast<double>(j) / static_cast<double>(grid.t_points - 1);
    const auto slice = cf.slice(t);
    for (std::int64_t i = 0; i < grid.s_points; ++i) {
      const double s = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                               static_cast<double>(grid.s_points - 1);
      const double q = vx * s * s + vy * t * t;
      if (q == 0.0) continue;
      const double ratio = (1.0 - std::abs(CfEvaluator::at(slice, s))) / q;
      if (ratio < out.c5_hat) {
        out.c5_hat = ratio;
        out.s_at_min = s;
        out.t_at_min = t;
      }
    }
  }
  out.positive = out.c5_hat > 0.0;
  return out;
}

double envelope_excess(const ModelSpec& model, double c5, std::int64_t N, std::int64_t l, const GridSpec& grid) {
  if (l < 0 || l >= N) throw InputError("envelope_excess needs 0 <= l < N");
  const CfEvaluator cf(model);
  const Moments& mom = model.moments();
  const double vx = mom.sigma_x * mom.sigma_x;
  const double vy = mom.sigma_y * mom.sigma_y;
  const double power = static_cast<double>(N - l);
  double worst = -INFINITY;
  // Midpoints of the c5 grid cells, so the points differ from those that fixed c5.
  for (std::int64_t j = 0; j + 1 < grid.t_points; ++j) {
    const double t = grid.eta0 * (static_cast<double>(j) + 0.5) / static_cast<double>(grid.t_points - 1);
    const auto slice = cf.slice(t);
    for (std::int64_t i = 0; i + 1 < grid.s_points; ++i) {
      const double s = -std::numbers::pi + 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                               static_cast<double>(grid.s_points - 1);
      const double lhs = std::pow(std::abs(CfEvaluator::at(slice, s)), power);
      const double rhs = std::exp(-c5 * (vx * s * s + vy * t * t) * power);
      worst = std::max(worst, lhs - rhs);
    }
  }
  return worst;
}

}  // namespace lpcond

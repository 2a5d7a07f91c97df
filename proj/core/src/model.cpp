#include "lpcond/model.hpp"

#include <algorithm>
#include <cmath>

#include "lpcond/distributions.hpp"
#include "lpcond/errors.hpp"

namespace lpcond {

namespace {

std::size_t slots(std::int64_t max_x) { return static_cast<std::size_t>(std::max<std::int64_t>(max_x, 0) + 1); }

double cube(double x) { return x * x * x; }

RawMoments pmf_moments(const Pmf& law) {
  RawMoments out;
  for (std::size_t i = 0; i < law.size(); ++i) {
    const double v = static_cast<double>(law.support[i]);
    out.m1 += law.probs[i] * v;
    out.m2 += law.probs[i] * v * v;
    out.m3 += law.probs[i] * v * v * v;
  }
  return out;
}

double pmf_abs_central3(const Pmf& law, double c) {
  double out = 0.0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    out += law.probs[i] * std::abs(cube(static_cast<double>(law.support[i]) - c));
  }
  return out;
}

std::complex<double> pmf_cf(const Pmf& law, double t) {
  std::complex<double> out(0.0, 0.0);
  for (std::size_t i = 0; i < law.size(); ++i) {
    out += law.probs[i] * std::polar(1.0, t * static_cast<double>(law.support[i]));
  }
  return out;
}

}  // namespace

std::string IndicatorY::name() const { return "indicator(X=" + std::to_string(k_) + ")"; }

Pmf IndicatorY::law(std::int64_t x) const { return Pmf::point(x == k_ ? 1 : 0); }

std::vector<RawMoments> IndicatorY::moments(std::int64_t max_x) const {
  std::vector<RawMoments> out(slots(max_x));
  if (k_ >= 0 && k_ <= max_x) out[static_cast<std::size_t>(k_)] = RawMoments{1.0, 1.0, 1.0};
  return out;
}

std::vector<double> IndicatorY::abs_central3(const std::vector<double>& centre) const {
  std::vector<double> out(centre.size());
  for (std::size_t x = 0; x < centre.size(); ++x) {
    const double y = static_cast<std::int64_t>(x) == k_ ? 1.0 : 0.0;
    out[x] = std::abs(cube(y - centre[x]));
  }
  return out;
}

std::vector<std::complex<double>> IndicatorY::cf(std::int64_t max_x, double t) const {
  std::vector<std::complex<double>> out(slots(max_x), std::complex<double>(1.0, 0.0));
  if (k_ >= 0 && k_ <= max_x) out[static_cast<std::size_t>(k_)] = std::polar(1.0, t);
  return out;
}

Pmf DisplacementY::law(std::int64_t x) const {
  if (x <= 0) return Pmf::point(0);
  return displacement_law(x);
}

std::vector<RawMoments> DisplacementY::moments(std::int64_t max_x) const {
  auto out = displacement_moments(max_x);
  if (!out.empty()) out[0] = RawMoments{};
  return out;
}

std::vector<double> DisplacementY::abs_central3(const std::vector<double>& centre) const {
  std::vector<double> out(centre.size());
  if (centre.empty()) return out;
  const std::int64_t max_x = static_cast<std::int64_t>(centre.size()) - 1;
  const auto mom = displacement_moments(max_x);
  out[0] = std::abs(cube(centre[0]));
  for (std::int64_t l = 1; l <= max_x; ++l) {
    const auto i = static_cast<std::size_t>(l);
    const double c = centre[i];
    if (l <= kMaxFullDisplacementLaw) {
      out[i] = pmf_abs_central3(displacement_law(l), c);
      continue;
    }
    // E|Y - c|^3 = E(Y - c)^3 + 2 E[(c - Y)^3; Y < c], and Y >= 0 bounds the
    // second term by c E(Y - c)^2, so beyond the full laws this is an upper bound.
    const RawMoments& m = mom[i];
    const double third = m.m3 - 3.0 * c * m.m2 + 3.0 * c * c * m.m1 - c * c * c;
    const double second = m.m2 - 2.0 * c * m.m1 + c * c;
    out[i] = c <= 0.0 ? third : third + 2.0 * c * second;
  }
  return out;
}

std::vector<std::complex<double>> DisplacementY::cf(std::int64_t max_x, double t) const {
  return displacement_cfs(max_x, t);
}

std::int64_t DisplacementY::sample(std::int64_t x, RngStream& rng) const {
  return x <= 0 ? 0 : displacement_sample(x, rng);
}

Pmf TableY::law(std::int64_t x) const {
  if (x < 0 || x >= static_cast<std::int64_t>(laws_.size())) return Pmf::point(0);
  return laws_[static_cast<std::size_t>(x)];
}

std::vector<RawMoments> TableY::moments(std::int64_t max_x) const {
  std::vector<RawMoments> out(slots(max_x));
  for (std::int64_t x = 0; x <= max_x; ++x) out[static_cast<std::size_t>(x)] = pmf_moments(law(x));
  return out;
}

std::vector<double> TableY::abs_central3(const std::vector<double>& centre) const {
  std::vector<double> out(centre.size());
  for (std::size_t x = 0; x < centre.size(); ++x) {
    out[x] = pmf_abs_central3(law(static_cast<std::int64_t>(x)), centre[x]);
  }
  return out;
}

std::vector<std::complex<double>> TableY::cf(std::int64_t max_x, double t) const {
  std::vector<std::complex<double>> out(slots(max_x));
  for (std::int64_t x = 0; x <= max_x; ++x) out[static_cast<std::size_t>(x)] = pmf_cf(law(x), t);
  return out;
}

std::int64_t TableY::sample(std::int64_t x, RngStream& rng) const {
  if (x < 0 || x >= static_cast<std::int64_t>(laws_.size())) return 0;
  return DiscreteSampler(laws_[static_cast<std::size_t>(x)])(rng);
}

Moments compute_moments(const Pmf& x_law, const ConditionalY& y, const AffineY& affine) {
  if (x_law.empty()) throw InputError("model X law is empty");
  if (x_law.min_value() < 0) throw InputError("model X law must live on the non-negative integers");
  const double mass = x_law.total_mass();
  const std::int64_t max_x = x_law.max_value();
  const auto raw = y.moments(max_x);

  Moments out;
  KahanSum ex;
  for (std::size_t i = 0; i < x_law.size(); ++i) ex.add(x_law.probs[i] * static_cast<double>(x_law.support[i]));
  out.mean_x = ex.value() / mass;

  KahanSum vx, rx, ey, ey2, exy;
  for (std::size_t i = 0; i < x_law.size(); ++i) {
    const std::int64_t x = x_law.support[i];
    const double p = x_law.probs[i] / mass;
    const double dx = static_cast<double>(x) - out.mean_x;
    vx.add(p * dx * dx);
    rx.add(p * std::abs(dx * dx * dx));
    const RawMoments& m = raw[static_cast<std::size_t>(x)];
    const double c = affine.shift(x);
    const double e1 = m.m1 - c;
    const double e2 = m.m2 - 2.0 * c * m.m1 + c * c;
    ey.add(p * e1);
    ey2.add(p * e2);
    exy.add(p * dx * e1);
  }
  out.sigma_x = std::sqrt(vx.value());
  out.rho_x = rx.value();
  out.mean_y = ey.value();
  out.sigma_y = std::sqrt(std::max(0.0, ey2.value() - out.mean_y * out.mean_y));
  out.cov_xy = exy.value();

  std::vector<double> centre(static_cast<std::size_t>(max_x) + 1, 0.0);
  for (std::int64_t x = 0; x <= max_x; ++x) centre[static_cast<std::size_t>(x)] = affine.shift(x) + out.mean_y;
  const auto abs3 = y.abs_central3(centre);
  KahanSum ry;
  for (std::size_t i = 0; i < x_law.size(); ++i) {
    ry.add(x_law.probs[i] / mass * abs3[static_cast<std::size_t>(x_law.support[i])]);
  }
  out.rho_y = ry.value();

  if (out.sigma_x > 0.0 && out.sigma_y > 0.0) {
    out.r = std::clamp(out.cov_xy / (out.sigma_x * out.sigma_y), -1.0, 1.0);
  }
  out.tau = out.sigma_y * std::sqrt(std::max(0.0, 1.0 - out.r * out.r));
  return out;
}

ModelSpec::ModelSpec(std::string label, Pmf x_law, XProb x_prob, std::shared_ptr<const ConditionalY> y,
                     AffineY affine)
    : label_(std::move(label)),
      x_law_(std::move(x_law)),
      x_prob_(std::move(x_prob)),
      y_(std::move(y)),
      affine_(affine) {
  if (!y_) throw InputError("model needs a conditional Y law");
  if (!x_prob_) {
    x_prob_ = [law = x_law_](std::int64_t x) { return law.at(x); };
  }
  moments_ = compute_moments(x_law_, *y_, affine_);
}

ModelSpec ModelSpec::with_affine(const AffineY& affine) const {
  return ModelSpec(label_, x_law_, x_prob_, y_, affine);
}

ModelSpec ModelSpec::with_label(std::string label) const {
  ModelSpec out = *this;
  out.label_ = std::move(label);
  return out;
}

}  // namespace lpcond

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lpcond/displacement_law.hpp"
#include "lpcond/pmf.hpp"
#include "lpcond/rng.hpp"

namespace lpcond {

/// Conditional law of an integer Y given X = x (x >= 0).
class ConditionalY {
 public:
  virtual ~ConditionalY() = default;

  virtual std::string name() const = 0;
  /// Exact law. May throw InfeasibleError for large x.
  virtual Pmf law(std::int64_t x) const = 0;
  /// Raw moments for x in [0, max_x].
  virtual std::vector<RawMoments> moments(std::int64_t max_x) const = 0;
  /// E|Y - centre[x]|^3 given X = x, for x in [0, centre.size()). May be an
  /// upper bound where the exact value is impractical.
  virtual std::vector<double> abs_central3(const std::vector<double>& centre) const = 0;
  /// E exp(itY) given X = x, for x in [0, max_x].
  virtual std::vector<std::complex<double>> cf(std::int64_t max_x, double t) const = 0;
  virtual std::int64_t sample(std::int64_t x, RngStream& rng) const = 0;
  /// Largest value Y can take given X = x.
  virtual std::int64_t max_value(std::int64_t x) const = 0;
  /// Set when Y = 1{X = k}; enables the two-class fast paths.
  virtual std::optional<std::int64_t> indicator_point() const { return std::nullopt; }
};

/// Y = 1{X = k}.
class IndicatorY final : public ConditionalY {
 public:
  explicit IndicatorY(std::int64_t k) : k_(k) {}
  std::string name() const override;
  Pmf law(std::int64_t x) const override;
  std::vector<RawMoments> moments(std::int64_t max_x) const override;
  std::vector<double> abs_central3(const std::vector<double>& centre) const override;
  std::vector<std::complex<double>> cf(std::int64_t max_x, double t) const override;
  std::int64_t sample(std::int64_t x, RngStream&) const override { return x == k_ ? 1 : 0; }
  std::int64_t max_value(std::int64_t x) const override { return x == k_ ? 1 : 0; }
  std::optional<std::int64_t> indicator_point() const override { return k_; }

 private:
  std::int64_t k_;
};

/// Y | X = l distributed as d_{l,l-1}; Y = 0 when X = 0. abs_central3 is exact
/// up to kMaxFullDisplacementLaw and an upper bound beyond.
class DisplacementY final : public ConditionalY {
 public:
  std::string name() const override { return "displacement"; }
  Pmf law(std::int64_t x) const override;
  std::vector<RawMoments> moments(std::int64_t max_x) const override;
  std::vector<double> abs_central3(const std::vector<double>& centre) const override;
  std::vector<std::complex<double>> cf(std::int64_t max_x, double t) const override;
  std::int64_t sample(std::int64_t x, RngStream& rng) const override;
  std::int64_t max_value(std::int64_t x) const override { return x <= 2 ? 0 : (x - 1) * (x - 2) / 2; }
};

/// Explicit laws per x; x beyond the table gives Y = 0.
class TableY final : public ConditionalY {
 public:
  explicit TableY(std::vector<Pmf> laws) : laws_(std::move(laws)) {}
  std::string name() const override { return "table"; }
  Pmf law(std::int64_t x) const override;
  std::vector<RawMoments> moments(std::int64_t max_x) const override;
  std::vector<double> abs_central3(const std::vector<double>& centre) const override;
  std::vector<std::complex<double>> cf(std::int64_t max_x, double t) const override;
  std::int64_t sample(std::int64_t x, RngStream& rng) const override;
  std::int64_t max_value(std::int64_t x) const override { return law(x).max_value(); }

 private:
  std::vector<Pmf> laws_;
};

/// Effective response Y_eff = Y - offset - x_slope (X - x_centre). The
/// identity map leaves Y unchanged.
struct AffineY {
  double offset = 0.0;
  double x_slope = 0.0;
  double x_centre = 0.0;

  double shift(std::int64_t x) const noexcept {
    return offset + x_slope * (static_cast<double>(x) - x_centre);
  }
  bool identity() const noexcept { return offset == 0.0 && x_slope == 0.0; }
};

struct Moments {
  double mean_x = 0.0;
  double sigma_x = 0.0;
  double rho_x = 0.0;  // E|X - EX|^3
  double mean_y = 0.0;
  double sigma_y = 0.0;
  double rho_y = 0.0;  // E|Y - EY|^3
  double cov_xy = 0.0;
  double r = 0.0;      // correlation, 0 when sigma_y = 0
  double tau = 0.0;    // sigma_y sqrt(1 - r^2)
};

/// The conditioning event S_N = m.
struct ConditioningSpec {
  std::int64_t N = 1;
  std::int64_t m = 0;
};

/// Joint law of (X, Y_eff): an integer X >= 0 and Y_eff built from an integer
/// Y | X plus an affine correction. Moments are computed on construction from
/// the truncated X table.
class ModelSpec {
 public:
  using XProb = std::function<double(std::int64_t)>;

  ModelSpec(std::string label, Pmf x_law, XProb x_prob, std::shared_ptr<const ConditionalY> y,
            AffineY affine = {});

  const std::string& label() const noexcept { return label_; }
  const Pmf& x_law() const noexcept { return x_law_; }
  /// Exact P(X = x), valid beyond the truncated table.
  double x_prob(std::int64_t x) const { return x_prob_(x); }
  const ConditionalY& y() const noexcept { return *y_; }
  std::shared_ptr<const ConditionalY> y_ptr() const noexcept { return y_; }
  const AffineY& affine() const noexcept { return affine_; }
  const Moments& moments() const noexcept { return moments_; }
  std::int64_t x_min() const { return x_law_.min_value(); }

  ModelSpec with_affine(const AffineY& affine) const;
  ModelSpec with_label(std::string label) const;

 private:
  std::string label_;
  Pmf x_law_;
  XProb x_prob_;
  std::shared_ptr<const ConditionalY> y_;
  AffineY affine_;
  Moments moments_;
};

Moments compute_moments(const Pmf& x_law, const ConditionalY& y, const AffineY& affine);

}  // namespace lpcond

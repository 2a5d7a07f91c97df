#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lpcond {

/// Finite-support probability table on the integers.
///
/// `truncation_mass` is an upper bound on the probability that lies outside
/// the listed support. For a full law, sum(probs) + truncation_mass is 1 up to
/// rounding; for a sub-probability table the listed mass may be smaller.
struct Pmf {
  std::vector<std::int64_t> support;  // strictly increasing
  std::vector<double> probs;
  double truncation_mass = 0.0;

  std::size_t size() const noexcept { return support.size(); }
  bool empty() const noexcept { return support.empty(); }

  /// Probability of `value`, or 0 if it is not listed.
  double at(std::int64_t value) const;
  double total_mass() const;  // compensated sum of probs
  std::int64_t min_value() const { return support.front(); }
  std::int64_t max_value() const { return support.back(); }

  double mean() const;
  double variance() const;

  /// Builds a table from a dense vector indexed from `offset`, dropping
  /// exact zeros.
  static Pmf from_dense(std::int64_t offset, const std::vector<double>& dense,
                        double truncation_mass = 0.0);
  /// Dense copy over [min_value, max_value].
  std::vector<double> to_dense() const;
  /// Point mass at `value`.
  static Pmf point(std::int64_t value);
  /// Rescales the listed probabilities so they sum to one.
  Pmf normalized() const;
};

/// Total-variation distance sup_A |P(A) - Q(A)| between two tables.
double total_variation(const Pmf& p, const Pmf& q);

/// Writes `value,prob` rows plus a `# truncation_mass=<x>` footer line.
void write_pmf_csv(std::ostream& out, const Pmf& pmf);
std::string pmf_to_csv(const Pmf& pmf);
/// Inverse of write_pmf_csv. Throws InputError on malformed content.
Pmf read_pmf_csv(std::istream& in);

/// Formats a double with 17 significant digits.
std::string format_double(double x);

/// Neumaier-compensated accumulator.
class KahanSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace lpcond

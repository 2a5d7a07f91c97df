#pragma once

#include <cstdint>
#include <random>

namespace lpcond {

/// Reproducible random stream.
///
/// A stream is identified by (master_seed, stream_index). The underlying
/// mt19937_64 engine is seeded through std::seed_seq with the four 32-bit
/// halves of the pair, so distinct indices give decorrelated engines and the
/// same pair always reproduces the same draws. Parallel work takes one stream
/// per task, indexed by task number.
class RngStream {
 public:
  using result_type = std::mt19937_64::result_type;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

/// Default master seed: $LPCOND_SEED if set and numeric, else 20240611.
std::uint64_t default_seed();

}  // namespace lpcond

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lpcond/model.hpp"

namespace lpcond {

struct SampleBatch {
  std::vector<std::int64_t> values;  // accepted T = sum Y_i, raw Y
  std::vector<std::int64_t> max_y;   // largest Y_i of each accepted vector
  std::int64_t attempts = 0;
  std::int64_t accepted = 0;
  std::uint64_t seed = 0;
  std::int64_t chunk_attempts = 0;
  bool partial = false;  // budget ran out before the target
};

struct RejectionOptions {
  std::int64_t target = 1;
  std::int64_t budget = 0;  // 0 means 10^4 * target
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::int64_t chunk_attempts = 1 << 14;
};

/// Plain rejection sampler for T given S_N = m. X vectors are drawn first and
/// dropped as soon as the partial sum cannot end at m; Y is drawn only for
/// accepted vectors. Attempts are split into fixed chunks, each with its own
/// RngStream(seed, chunk index), and merged in chunk order, so the batch
/// depends on the seed and chunk size but not on the thread count.
SampleBatch rejection_sample(const ModelSpec& model, const ConditioningSpec& cond, const RejectionOptions& options);

struct AcceptanceAudit {
  double rate = 0.0;
  double rate_se = 0.0;
  std::optional<double> p_exact;      // P(S_N = m), when the convolution is affordable
  double sigma_x = 0.0;
  double rate_times_2pi_sigma_sqrtN = 0.0;   // compare with the LLT floor c~5
  double rate_times_sigma_sqrt2piN = 0.0;    // tends to e^{-v^2/2}
};

AcceptanceAudit acceptance_audit(const SampleBatch& batch, const ModelSpec& model, const ConditioningSpec& cond);

/// CSV with a single `value` column.
void write_batch_csv(std::ostream& out, const SampleBatch& batch);

}  // namespace lpcond

#include "lpcond/conditional_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "lpcond/distributions.hpp"
#include "lpcond/errors.hpp"
#include "lpcond/exact_oracles.hpp"
#include "lpcond/parallel.hpp"
#include "lpcond/rng.hpp"

namespace lpcond {

namespace {

struct ChunkResult {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> max_y;
  std::vector<std::int64_t> attempt_index;  // position of each acceptance within the chunk
  std::int64_t attempts = 0;
};

ChunkResult run_chunk(const ModelSpec& model, const ConditioningSpec& cond, const DiscreteSampler& draw_x,
                      std::uint64_t seed, std::uint64_t chunk, std::int64_t attempts) {
  RngStream rng(seed, chunk);
  const std::int64_t N = cond.N;
  const std::int64_t m = cond.m;
  const std::int64_t x_lo = model.x_min();
  const std::int64_t x_hi = model.x_law().max_value();
  std::vector<std::int64_t> xs(static_cast<std::size_t>(N));
  ChunkResult out;
  out.attempts = attempts;
  for (std::int64_t a = 0; a < attempts; ++a) {
    std::int64_t partial = 0;
    bool alive = true;
    for (std::int64_t i = 0; i < N; ++i) {
      const std::int64_t x = draw_x(rng);
      xs[static_cast<std::size_t>(i)] = x;
      partial += x;
      const std::int64_t left = N - 1 - i;
      if (partial + left * x_lo > m || partial + left * x_hi < m) {
        alive = false;
        break;
      }
    }
    if (!alive || partial != m) continue;
    std::int64_t total = 0;
    std::int64_t top = 0;
    for (std::int64_t i = 0; i < N; ++i) {
      const std::int64_t y = model.y().sample(xs[static_cast<std::size_t>(i)], rng);
      total += y;
      top = i == 0 ? y : std::max(top, y);
    }
    out.values.push_back(total);
    out.max_y.push_back(top);
    out.attempt_index.push_back(a);
  }
  return out;
}

}  // namespace

SampleBatch rejection_sample(const ModelSpec& model, const ConditioningSpec& cond, const RejectionOptions& options) {
  if (options.target < 1) throw InputError("rejection_sample needs target >= 1");
  if (cond.N < 1) throw InputError("rejection_sample needs N >= 1");
  if (options.chunk_attempts < 1) throw InputError("rejection_sample needs chunk_attempts >= 1");
  const std::int64_t budget = options.budget > 0 ? options.budget : 10000 * options.target;
  const DiscreteSampler draw_x(model.x_law());

  SampleBatch batch;
  batch.seed = options.seed;
  batch.chunk_attempts = options.chunk_attempts;
  const std::int64_t total_chunks = (budget + options.chunk_attempts - 1) / options.chunk_attempts;
  const std::int64_t wave = std::max<std::int64_t>(1, 4 * static_cast<std::int64_t>(std::max(1u, options.threads)));
  std::int64_t next_chunk = 0;
  bool done = false;
  while (!done && next_chunk < total_chunks) {
    const std::int64_t count = std::min(wave, total_chunks - next_chunk);
    std::vector<ChunkResult> results(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), options.threads, [&](std::size_t i) {
      const std::int64_t chunk = next_chunk + static_cast<std::int64_t>(i);
      const std::int64_t attempts = std::min(options.chunk_attempts, budget - chunk * options.chunk_attempts);
      results[i] = run_chunk(model, cond, draw_x, options.seed, static_cast<std::uint64_t>(chunk), attempts);
    });
    for (const ChunkResult& r : results) {
      const std::int64_t need = options.target - batch.accepted;
      if (static_cast<std::int64_t>(r.values.size()) >= need) {
        batch.values.insert(batch.values.end(), r.values.begin(), r.values.begin() + need);
        batch.max_y.insert(batch.max_y.end(), r.max_y.begin(), r.max_y.begin() + need);
        batch.attempts += r.attempt_index[static_cast<std::size_t>(need - 1)] + 1;
        batch.accepted += need;
        done = true;
        break;
      }
      batch.values.insert(batch.values.end(), r.values.begin(), r.values.end());
      batch.max_y.insert(batch.max_y.end(), r.max_y.begin(), r.max_y.end());
      batch.attempts += r.attempts;
      batch.accepted += static_cast<std::int64_t>(r.values.size());
    }
    next_chunk += count;
  }
  batch.partial = batch.accepted < options.target;
  return batch;
}

AcceptanceAudit acceptance_audit(const SampleBatch& batch, const ModelSpec& model, const ConditioningSpec& cond) {
  if (batch.attempts < 1) throw InputError("acceptance_audit needs a nonempty batch");
  AcceptanceAudit out;
  const double attempts = static_cast<double>(batch.attempts);
  out.rate = static_cast<double>(batch.accepted) / attempts;
  out.rate_se = std::sqrt(out.rate * (1.0 - out.rate) / attempts);
  out.sigma_x = model.moments().sigma_x;
  // The convolution costs about N m |support|; skip it when that is large.
  const double cost = static_cast<double>(cond.N) * static_cast<double>(std::max<std::int64_t>(cond.m, 1)) *
                      static_cast<double>(model.x_law().size());
  if (cost <= 5e9) out.p_exact = exact_sum_probability(model, cond);
  const double root_n = std::sqrt(static_cast<double>(cond.N));
  out.rate_times_2pi_sigma_sqrtN = out.rate * 2.0 * std::numbers::pi * out.sigma_x * root_n;
  out.rate_times_sigma_sqrt2piN = out.rate * out.sigma_x * std::sqrt(2.0 * std::numbers::pi) * root_n;
  return out;
}

void write_batch_csv(std::ostream& out, const SampleBatch& batch) {
  out << "value\n";
  for (std::int64_t v : batch.values) out << v << '\n';
}

}  // namespace lpcond

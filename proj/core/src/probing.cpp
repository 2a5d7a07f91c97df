#include "lpcond/probing.hpp"

#include <string>

#include "lpcond/errors.hpp"

namespace lpcond {

void validate(const HashSequence& seq) {
  if (seq.m < 1) throw InputError("hash sequence: table size m must be >= 1");
  if (seq.n() > seq.m) {
    throw CapacityError("hash sequence: " + std::to_string(seq.n()) + " balls exceed " +
                        std::to_string(seq.m) + " urns");
  }
  for (std::size_t i = 0; i < seq.addresses.size(); ++i) {
    const auto h = seq.addresses[i];
    if (h < 1 || h > seq.m) {
      throw InputError("hash sequence: address " + std::to_string(h) + " of ball " +
                       std::to_string(i + 1) + " is outside [1, " + std::to_string(seq.m) + "]");
    }
  }
}

InsertTrace insert_trace(const HashSequence& seq) {
  validate(seq);
  const auto m = static_cast<std::size_t>(seq.m);
  std::vector<char> taken(m, 0);
  InsertTrace trace;
  trace.displacements.reserve(seq.addresses.size());
  trace.final_urns.reserve(seq.addresses.size());
  for (auto h : seq.addresses) {
    auto pos = static_cast<std::size_t>(h - 1);
    std::int64_t d = 0;
    while (taken[pos]) {
      pos = (pos + 1 == m) ? 0 : pos + 1;
      ++d;
    }
    taken[pos] = 1;
    trace.displacements.push_back(d);
    trace.final_urns.push_back(static_cast<std::int64_t>(pos) + 1);
    trace.total += d;
  }
  for (std::size_t u = 0; u < m; ++u) {
    if (taken[u]) trace.occupied.push_back(static_cast<std::int64_t>(u) + 1);
  }
  return trace;
}

std::int64_t total_displacement(const HashSequence& seq) { return insert_trace(seq).total; }

BlockDecomposition block_decomposition(const HashSequence& seq) {
  validate(seq);
  if (seq.n() == seq.m) {
    throw CapacityError("block decomposition: table is full, no empty urn delimits a block");
  }
  const InsertTrace trace = insert_trace(seq);
  const auto m = static_cast<std::size_t>(seq.m);

  std::vector<char> taken(m, 0);
  std::vector<std::int64_t> disp_at(m, 0);
  for (std::size_t i = 0; i < trace.final_urns.size(); ++i) {
    const auto u = static_cast<std::size_t>(trace.final_urns[i] - 1);
    taken[u] = 1;
    disp_at[u] = trace.displacements[i];
  }

  BlockDecomposition out;
  for (std::size_t e = 0; e < m; ++e) {
    if (taken[e]) continue;
    // Walk counter-clockwise from the empty urn to the start of its run.
    std::size_t start = e;
    while (true) {
      const std::size_t prev = (start == 0) ? m - 1 : start - 1;
      if (!taken[prev]) break;
      start = prev;
    }
    Block b;
    for (std::size_t u = start;; u = (u + 1 == m) ? 0 : u + 1) {
      b.urns.push_back(static_cast<std::int64_t>(u) + 1);
      b.disp_sum += disp_at[u];
      if (u == e) break;
    }
    b.length = static_cast<std::int64_t>(b.urns.size());
    out.blocks.push_back(std::move(b));
  }
  return out;
}

}  // namespace lpcond

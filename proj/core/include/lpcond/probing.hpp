#pragma once

#include <cstdint>
#include <vector>

namespace lpcond {

/// Ordered home addresses of n balls thrown into m circular urns.
/// Urns are numbered 1..m clockwise.
struct HashSequence {
  std::int64_t m = 0;
  std::vector<std::int64_t> addresses;

  std::int64_t n() const noexcept { return static_cast<std::int64_t>(addresses.size()); }
};

struct InsertTrace {
  std::vector<std::int64_t> displacements;  // per ball, in insertion order
  std::vector<std::int64_t> final_urns;     // per ball, 1-based
  std::vector<std::int64_t> occupied;       // sorted 1-based urn indices
  std::int64_t total = 0;
};

struct Block {
  std::int64_t length = 0;    // occupied run plus its trailing empty urn
  std::int64_t disp_sum = 0;  // displacement of balls that ended in the block
  std::vector<std::int64_t> urns;  // clockwise, trailing empty urn last
};

/// One block per empty urn, ordered by the index of that trailing empty urn.
struct BlockDecomposition {
  std::vector<Block> blocks;
};

/// Throws InputError for bad addresses or m < 1, CapacityError when n > m.
void validate(const HashSequence& seq);

/// Linear probing with clockwise wraparound from urn m to urn 1.
InsertTrace insert_trace(const HashSequence& seq);
std::int64_t total_displacement(const HashSequence& seq);
/// Requires n < m; throws CapacityError when the table is full.
BlockDecomposition block_decomposition(const HashSequence& seq);

}  // namespace lpcond

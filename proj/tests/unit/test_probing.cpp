#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "lpcond/errors.hpp"
#include "lpcond/probing.hpp"

using namespace lpcond;

namespace {

HashSequence seq(std::int64_t m, std::vector<std::int64_t> a) { return HashSequence{m, std::move(a)}; }

void check_invariants(const HashSequence& s) {
  const InsertTrace trace = insert_trace(s);
  const std::int64_t n = s.n();
  std::int64_t sum = 0;
  for (auto d : trace.displacements) {
    CHECK(d >= 0);
    sum += d;
  }
  CHECK(trace.total == sum);
  CHECK(trace.total <= n * (n - 1) / 2);
  CHECK(static_cast<std::int64_t>(trace.occupied.size()) == n);
  CHECK(total_displacement(s) == trace.total);
  if (n < s.m) {
    const BlockDecomposition dec = block_decomposition(s);
    CHECK(static_cast<std::int64_t>(dec.blocks.size()) == s.m - n);
    std::int64_t lengths = 0;
    std::int64_t disp = 0;
    for (const Block& b : dec.blocks) {
      lengths += b.length;
      disp += b.disp_sum;
      CHECK(static_cast<std::int64_t>(b.urns.size()) == b.length);
    }
    CHECK(lengths == s.m);
    CHECK(disp == trace.total);
  }
}

}  // namespace

TEST_CASE("worked example: displacements, total and blocks") {
  const auto s = seq(10, {6, 9, 1, 9, 9, 6, 2, 5});
  const InsertTrace trace = insert_trace(s);
  CHECK(trace.displacements == std::vector<std::int64_t>{0, 0, 0, 1, 3, 1, 1, 0});
  CHECK(trace.total == 6);

  const BlockDecomposition dec = block_decomposition(s);
  REQUIRE(dec.blocks.size() == 2);
  CHECK(dec.blocks[0].length == 6);
  CHECK(dec.blocks[0].urns == std::vector<std::int64_t>{9, 10, 1, 2, 3, 4});
  CHECK(dec.blocks[0].disp_sum == 5);
  CHECK(dec.blocks[1].length == 4);
  CHECK(dec.blocks[1].urns == std::vector<std::int64_t>{5, 6, 7, 8});
  CHECK(dec.blocks[1].disp_sum == 1);
}

TEST_CASE("small totals") {
  CHECK(total_displacement(seq(4, {1, 2, 3})) == 0);
  CHECK(total_displacement(seq(5, {1, 1, 1, 1})) == 6);
  CHECK(total_displacement(seq(10, {5, 2, 6, 9, 9, 1, 6, 9})) == 6);
  CHECK(total_displacement(seq(2, {1})) == 0);
}

TEST_CASE("an empty urn with no run before it is a block of length one") {
  const BlockDecomposition dec = block_decomposition(seq(3, {1}));
  REQUIRE(dec.blocks.size() == 2);
  CHECK(dec.blocks[0].length == 2);
  CHECK(dec.blocks[1].length == 1);
  CHECK(dec.blocks[0].disp_sum == 0);
  CHECK(dec.blocks[1].disp_sum == 0);
}

TEST_CASE("wraparound from the last urn to the first") {
  const InsertTrace trace = insert_trace(seq(3, {3, 3, 3}));
  CHECK(trace.displacements == std::vector<std::int64_t>{0, 1, 2});
  CHECK(trace.final_urns == std::vector<std::int64_t>{3, 1, 2});
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(insert_trace(seq(10, {0})), InputError);
  CHECK_THROWS_AS(insert_trace(seq(10, {11})), InputError);
  CHECK_THROWS_AS(insert_trace(seq(0, {})), InputError);
  CHECK_THROWS_AS(insert_trace(seq(2, {1, 1, 2})), CapacityError);
  CHECK_THROWS_AS(total_displacement(seq(1, {1, 1})), CapacityError);
  CHECK_NOTHROW(insert_trace(seq(3, {1, 1, 1})));
  CHECK_THROWS_AS(block_decomposition(seq(3, {1, 1, 1})), CapacityError);
}

TEST_CASE("total displacement is invariant under permutation") {
  std::mt19937_64 gen(12345);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::int64_t m = 1 + static_cast<std::int64_t>(gen() % 30);
    const std::int64_t n = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(m + 1));
    HashSequence s{m, {}};
    for (std::int64_t i = 0; i < n; ++i) s.addresses.push_back(1 + static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(m)));
    HashSequence p = s;
    std::shuffle(p.addresses.begin(), p.addresses.end(), gen);
    REQUIRE(total_displacement(s) == total_displacement(p));
    check_invariants(s);
  }
}

TEST_CASE("exhaustive invariants for m <= 5") {
  std::int64_t checked = 0;
  for (std::int64_t m = 1; m <= 5; ++m) {
    for (std::int64_t n = 0; n < m; ++n) {
      std::vector<std::int64_t> a(static_cast<std::size_t>(n), 1);
      while (true) {
        check_invariants(seq(m, a));
        ++checked;
        std::size_t i = 0;
        while (i < a.size() && a[i] == m) a[i++] = 1;
        if (i == a.size()) break;
        ++a[i];
      }
    }
  }
  CHECK(checked == 1 + (1 + 2) + (1 + 3 + 9) + (1 + 4 + 16 + 64) + (1 + 5 + 25 + 125 + 625));
}

TEST_CASE("pairs then singletons reach k (l-1-k)") {
  // (1,1,2,2,...,k,k,k+1,...,l-1-k) in l urns
  for (std::int64_t l = 2; l <= 15; ++l) {
    for (std::int64_t k = 0; 2 * k <= l - 1; ++k) {
      HashSequence s{l, {}};
      for (std::int64_t q = 1; q <= k; ++q) s.addresses.insert(s.addresses.end(), {q, q});
      for (std::int64_t q = k + 1; q <= l - 1 - k; ++q) s.addresses.push_back(q);
      REQUIRE(s.n() == l - 1);
      CHECK(total_displacement(s) == k * (l - 1 - k));
    }
  }
}

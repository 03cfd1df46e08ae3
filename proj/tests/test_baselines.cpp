#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "amann/baselines.hpp"
#include "amann/error.hpp"
#include "amann/generate.hpp"
#include "support.hpp"

using namespace amann;

namespace {

// Position of the anchor most similar to x, lowest position on ties.
template <class P>
std::uint32_t brute_anchor(const std::vector<P>& pats, const std::vector<std::uint32_t>& anchors,
                           const P& x) {
  std::uint32_t best = 0;
  auto best_value = testing::naive_dot(pats[anchors[0]], x);
  for (std::uint32_t a = 1; a < anchors.size(); ++a) {
    const auto v = testing::naive_dot(pats[anchors[a]], x);
    if (v > best_value) {
      best_value = v;
      best = a;
    }
  }
  return best;
}

template <class P>
void check_attachments(const std::vector<P>& pats, const AnchorIndex& idx) {
  std::vector<std::uint32_t> members(pats.size());
  std::iota(members.begin(), members.end(), 0u);
  REQUIRE_NOTHROW(validate_anchor_index(idx, members));
  for (std::uint32_t a = 0; a < idx.r(); ++a) {
    REQUIRE(std::is_sorted(idx.attachments[a].begin(), idx.attachments[a].end()));
    for (auto id : idx.attachments[a]) REQUIRE(brute_anchor(pats, idx.anchor_ids, pats[id]) == a);
  }
}

}  // namespace

TEST_CASE("exhaustive_search examples") {
  const auto pats = gen_dense_patterns({24, 0, 30, 4});
  const std::span<const DensePattern> all(pats);
  const auto hit = exhaustive_search(all, pats[9]);
  CHECK(hit.id == 9);
  CHECK(hit.similarity == 24);
  CHECK(exhaustive_search(all.first(1), pats[3]).id == 0);
  const std::vector<SparsePattern> ties{SparsePattern(4, {0}), SparsePattern(4, {1}),
                                        SparsePattern(4, {0, 2})};
  CHECK(exhaustive_search(std::span<const SparsePattern>(ties), SparsePattern(4, {0, 1})).id == 0);
}

TEST_CASE("rs_build examples") {
  const auto pats = gen_dense_patterns({40, 0, 100, 9});
  const std::span<const DensePattern> all(pats);
  const auto one = rs_build(all, 1, 3);
  CHECK(one.r() == 1);
  CHECK(one.attachments[0].size() == 100);
  const auto every = rs_build(all, 100, 3);
  for (std::uint32_t a = 0; a < 100; ++a) {
    CHECK(every.attachments[a] == std::vector<std::uint32_t>{every.anchor_ids[a]});
  }
  check_attachments(pats, rs_build(all, 12, 5));
  CHECK(rs_build(all, 12, 5) == rs_build(all, 12, 5));
  CHECK_THROWS_AS(rs_build(all, 0, 1), ParameterError);
  CHECK_THROWS_AS(rs_build(all, 101, 1), ParameterError);
}

TEST_CASE("rs_build over a member subset") {
  const auto pats = gen_sparse_patterns({32, 4.0, 80, 6});
  std::vector<std::uint32_t> members;
  for (std::uint32_t i = 0; i < 80; i += 3) members.push_back(i);
  const auto idx = rs_build(std::span<const SparsePattern>(pats), members, 5, 2);
  CHECK_NOTHROW(validate_anchor_index(idx, members));
  for (auto id : idx.anchor_ids) CHECK(std::binary_search(members.begin(), members.end(), id));
}

TEST_CASE("validate_anchor_index rejects broken indexes") {
  const std::vector<std::uint32_t> members{0, 1, 2, 3};
  CHECK_THROWS_AS(validate_anchor_index({{0, 0}, {{0, 1}, {2, 3}}}, members), DataError);
  CHECK_THROWS_AS(validate_anchor_index({{0, 7}, {{0, 1}, {2, 3}}}, members), DataError);
  CHECK_THROWS_AS(validate_anchor_index({{0, 2}, {{0, 1}, {2}}}, members), DataError);
  CHECK_THROWS_AS(validate_anchor_index({{0}, {{0, 1}, {2, 3}}}, members), DataError);
  CHECK_NOTHROW(validate_anchor_index({{1, 2}, {{0, 1}, {2, 3}}}, members));
}

TEST_CASE("rs_search examples and cost") {
  const auto pats = gen_dense_patterns({20, 0, 90, 1});
  const std::span<const DensePattern> all(pats);
  const auto one = rs_build(all, 1, 3);
  testing::Engine eng(3);
  for (int t = 0; t < 20; ++t) {
    const auto x = testing::random_dense(eng, 20);
    const auto exact = exhaustive_search(all, x);
    const auto r1 = rs_search(one, all, x, 1);
    CHECK(r1.nn_id == exact.id);
    CHECK(r1.op_count == 20 * 1 + 20 * 90);
  }
  const auto idx = rs_build(all, 9, 4);
  for (int t = 0; t < 20; ++t) {
    const auto x = testing::random_dense(eng, 20);
    const auto order = rank_anchors(idx, all, x);
    CHECK(order.size() == 9);
    for (std::uint32_t a = 1; a <= 9; ++a) {
      std::uint64_t probed = 0;
      for (std::uint32_t i = 0; i < a; ++i) probed += idx.attachments[order[i]].size();
      CHECK(rs_search(idx, all, x, a).op_count == 20 * 9 + 20 * probed);
    }
    CHECK(rs_search(idx, all, x, 9).nn_id == exhaustive_search(all, x).id);
  }
  CHECK_THROWS_AS(rs_search(idx, all, pats[0], 0), ParameterError);
  CHECK_THROWS_AS(rs_search(idx, all, pats[0], 10), ParameterError);
}

TEST_CASE("rs recall is nondecreasing in a") {
  const auto pats = gen_sparse_patterns({64, 6.0, 300, 8});
  const auto queries = gen_sparse_patterns({64, 6.0, 60, 9});
  const std::span<const SparsePattern> all(pats);
  const auto idx = rs_build(all, 16, 1);
  std::vector<int> hits(17, 0);
  for (const auto& x : queries) {
    const auto truth = exhaustive_search(all, x).id;
    for (std::uint32_t a = 1; a <= 16; ++a) hits[a] += rs_search(idx, all, x, a).nn_id == truth;
  }
  for (std::uint32_t a = 2; a <= 16; ++a) CHECK(hits[a] >= hits[a - 1]);
  CHECK(hits[16] == 60);
}

TEST_CASE("hybrid degenerate cases") {
  const auto pats = gen_dense_patterns({16, 0, 120, 12});
  const std::span<const DensePattern> all(pats);
  testing::Engine eng(12);

  // One class: hybrid search is RS over the whole collection.
  const auto h1 = hybrid_build(all, allocate_random(120, 1, 4), Rule::kSum, 10, 6);
  const auto rs = rs_build(all, 10, derive_seed(6, 0));
  CHECK(h1.inner[0] == rs);
  for (int t = 0; t < 10; ++t) {
    const auto x = testing::random_dense(eng, 16);
    for (std::uint32_t a : {1u, 3u, 10u}) {
      const auto h = hybrid_search(h1, all, x, 1, a);
      const auto r = rs_search(rs, all, x, a);
      CHECK(h.nn_id == r.nn_id);
      CHECK(h.op_count == 16 * 16 * 1 + r.op_count);
    }
  }

  // r equal to the class size: hybrid with a = r is the plain filter.
  const auto alloc = allocate_random(120, 4, 8);
  const auto full = hybrid_build(all, alloc, Rule::kSum, 30, 2);
  const auto plain = build_index(all, alloc, Rule::kSum);
  for (int t = 0; t < 10; ++t) {
    const auto x = testing::random_dense(eng, 16);
    for (std::uint32_t p = 1; p <= 4; ++p) {
      CHECK(hybrid_search(full, all, x, p, 30).nn_id == search_top_p(plain, all, x, p).nn_id);
    }
  }
  CHECK_THROWS_AS(hybrid_build(all, alloc, Rule::kSum, 31, 2), ParameterError);
  CHECK_THROWS_AS(hybrid_search(full, all, pats[0], 5, 1), ParameterError);
}

TEST_CASE("hybrid op_count on a random instance") {
  const auto pats = gen_dense_patterns({32, 0, 1000, 13});
  const std::span<const DensePattern> all(pats);
  const auto h = hybrid_build(all, allocate_random(1000, 8, 1), Rule::kSum, 8, 3);
  for (std::uint32_t c = 0; c < 8; ++c) CHECK_NOTHROW(validate_anchor_index(h.inner[c], h.outer.classes()[c]));
  testing::Engine eng(14);
  int hits = 0;
  for (int t = 0; t < 50; ++t) {
    const auto x = testing::random_dense(eng, 32);
    const auto res = hybrid_search(h, all, x, 2, 2);
    const auto ranking = rank_classes(h.outer, x);
    std::uint64_t expect = 32ull * 32 * 8;
    for (std::uint32_t i = 0; i < 2; ++i) {
      const auto& inner = h.inner[ranking[i].class_id];
      const auto order = rank_anchors(inner, all, x);
      expect += 32ull * inner.r();
      for (std::uint32_t j = 0; j < 2; ++j) expect += 32ull * inner.attachments[order[j]].size();
    }
    CHECK(res.op_count == expect);
    hits += res.nn_id == exhaustive_search(all, x).id;
  }
  MESSAGE("hybrid recall@1 (p=2, a=2): " << hits / 50.0);
}

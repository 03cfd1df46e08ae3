#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "amann/error.hpp"
#include "amann/generate.hpp"
#include "amann/index.hpp"
#include "support.hpp"

using namespace amann;

namespace {

std::vector<std::size_t> sorted_sizes(const Allocation& a) {
  std::vector<std::size_t> s;
  for (const auto& c : a) s.push_back(c.size());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST_CASE("allocate_random examples") {
  const auto a = allocate_random(6, 3, 1);
  CHECK(sorted_sizes(a) == std::vector<std::size_t>{2, 2, 2});
  CHECK_NOTHROW(validate_allocation(a, 6));
  const auto b = allocate_random(7, 3, 1);
  CHECK(sorted_sizes(b) == std::vector<std::size_t>{2, 2, 3});
  CHECK(b[0].size() == 3);
  CHECK(allocate_random(100, 7, 9) == allocate_random(100, 7, 9));
  CHECK(allocate_random(100, 7, 9) != allocate_random(100, 7, 10));
  CHECK_THROWS_AS(allocate_random(2, 3, 1), ParameterError);
  CHECK_THROWS_AS(allocate_random(2, 0, 1), ParameterError);
}

TEST_CASE("validate_allocation rejects broken partitions") {
  CHECK_THROWS_AS(validate_allocation({{0, 1}, {1, 2}}, 3), DataError);
  CHECK_THROWS_AS(validate_allocation({{0}, {2}}, 3), DataError);
  CHECK_THROWS_AS(validate_allocation({{0, 1}, {}}, 2), DataError);
  CHECK_THROWS_AS(validate_allocation({{0, 5}}, 2), DataError);
}

TEST_CASE("allocators partition every random input") {
  testing::Engine eng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t n = 5 + eng() % 80;
    const std::uint32_t q = 1 + eng() % std::min<std::uint32_t>(n, 9);
    std::vector<SparsePattern> pats;
    for (std::uint32_t i = 0; i < n; ++i) pats.push_back(testing::random_sparse(eng, 24, 0.2));
    const auto r = allocate_random(n, q, trial);
    REQUIRE_NOTHROW(validate_allocation(r, n));
    const auto sizes = sorted_sizes(r);
    REQUIRE(sizes.back() - sizes.front() <= 1);
    for (auto rule : {Rule::kSum, Rule::kMax}) {
      const auto g = allocate_greedy(std::span<const SparsePattern>(pats), q, rule, trial);
      REQUIRE(g.size() == q);
      REQUIRE_NOTHROW(validate_allocation(g, n));
    }
  }
}

TEST_CASE("allocate_greedy follows the normalized score") {
  // p2 equals p0 and is orthogonal to p1: unless p0 and p2 both seed a class,
  // the non-seed joins its copy. If they do, p1 scores 0 everywhere and joins class 0.
  const std::vector<SparsePattern> pats{SparsePattern(8, {0, 1, 2}), SparsePattern(8, {4, 5}),
                                        SparsePattern(8, {0, 1, 2})};
  bool copies_joined = false;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = allocate_greedy(std::span<const SparsePattern>(pats), 2, Rule::kSum, seed);
    std::vector<int> class_of(3, -1);
    for (int c = 0; c < 2; ++c) {
      for (auto id : g[c]) class_of[id] = c;
    }
    if (class_of[0] == class_of[2]) {
      CHECK(class_of[1] != class_of[0]);
      copies_joined = true;
    } else {
      CHECK(class_of[1] == 0);
    }
  }
  CHECK(copies_joined);

  // Mutually orthogonal patterns: every score is 0, so the non-seed joins class 0.
  const std::vector<SparsePattern> orth{SparsePattern(8, {0}), SparsePattern(8, {1}),
                                        SparsePattern(8, {6})};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = allocate_greedy(std::span<const SparsePattern>(orth), 2, Rule::kSum, seed);
    CHECK(g[0].size() == 2);
    CHECK(g[1].size() == 1);
  }
}

TEST_CASE("allocate_greedy respects the size cap") {
  const auto pats = gen_sparse_patterns({32, 4.0, 60, 4});
  const auto g = allocate_greedy(std::span<const SparsePattern>(pats), 6, Rule::kSum, 2, 10);
  for (const auto& c : g) CHECK(c.size() <= 10);
  CHECK_NOTHROW(validate_allocation(g, 60));
  CHECK_THROWS_AS(allocate_greedy(std::span<const SparsePattern>(pats), 6, Rule::kSum, 2, 9),
                  ParameterError);
}

TEST_CASE("build_index keeps memories consistent with classes") {
  const auto pats = gen_dense_patterns({16, 0, 40, 5});
  const std::span<const DensePattern> all(pats);
  const auto idx = build_index(all, allocate_random(40, 4, 1), Rule::kSum);
  CHECK(idx.num_classes() == 4);
  CHECK(idx.size() == 40);
  const auto class_of = idx.class_of();
  for (std::uint32_t c = 0; c < 4; ++c) {
    CHECK(idx.memories()[c].stored_count() == idx.classes()[c].size());
    CHECK(idx.memories()[c] == build_memory(16, all, idx.classes()[c], Rule::kSum));
    for (auto id : idx.classes()[c]) CHECK(class_of[id] == c);
  }
}

TEST_CASE("rank_classes orders by value then class id") {
  const std::vector<std::int64_t> values{5, 9, 5, 1};
  const auto order = order_scores(std::span<const std::int64_t>(values));
  REQUIRE(order.size() == 4);
  CHECK(order[0].class_id == 1);
  CHECK(order[1].class_id == 0);
  CHECK(order[2].class_id == 2);
  CHECK(order[3].class_id == 3);

  const auto pats = gen_sparse_patterns({16, 3.0, 10, 3});
  const auto single = build_index(std::span<const SparsePattern>(pats), allocate_random(10, 1, 0), Rule::kSum);
  CHECK(rank_classes(single, pats[0]).size() == 1);
}

TEST_CASE("ranking is a permutation and invariant under positive scaling") {
  testing::Engine eng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t q = 1 + eng() % 12;
    std::vector<std::int64_t> v(q);
    for (auto& x : v) x = eng() % 5;
    const auto a = order_scores(std::span<const std::int64_t>(v));
    std::set<std::uint32_t> ids;
    for (const auto& s : a) ids.insert(s.class_id);
    REQUIRE(ids.size() == q);
    for (std::size_t i = 1; i < q; ++i) {
      REQUIRE((a[i - 1].value > a[i].value ||
               (a[i - 1].value == a[i].value && a[i - 1].class_id < a[i].class_id)));
    }
    auto scaled = v;
    for (auto& x : scaled) x *= 7;
    const auto b = order_scores(std::span<const std::int64_t>(scaled));
    std::vector<double> real(v.begin(), v.end());
    for (auto& x : real) x *= 0.37;
    const auto c = order_scores(std::span<const double>(real));
    for (std::size_t i = 0; i < q; ++i) {
      REQUIRE(a[i].class_id == b[i].class_id);
      REQUIRE(a[i].class_id == c[i].class_id);
    }
  }
}

TEST_CASE("search_top_p examples") {
  const auto pats = gen_dense_patterns({32, 0, 60, 11});
  const std::span<const DensePattern> all(pats);
  const auto idx = build_index(all, allocate_random(60, 6, 2), Rule::kSum);
  for (std::uint32_t j = 0; j < 60; ++j) {
    const auto full = search_top_p(idx, all, pats[j], 6);
    CHECK(full.nn_id == j);
    CHECK(full.nn_similarity == 32);
    CHECK(full.probed_classes.size() == 6);
    CHECK(full.ranking.size() == 6);
  }
  CHECK_THROWS_AS(search_top_p(idx, all, pats[0], 0), ParameterError);
  CHECK_THROWS_AS(search_top_p(idx, all, pats[0], 7), ParameterError);
}

TEST_CASE("search_top_p returns the best member of the probed classes") {
  testing::Engine eng(21);
  const auto pats = gen_sparse_patterns({32, 5.0, 200, 12});
  const std::span<const SparsePattern> all(pats);
  const auto idx = build_index(all, allocate_random(200, 10, 3), Rule::kSum);
  const auto class_of = idx.class_of();
  for (int t = 0; t < 100; ++t) {
    const auto x = testing::random_sparse(eng, 32, 5.0 / 32);
    const auto r = search_top_p(idx, all, x, 2);
    REQUIRE(r.probed_classes.size() == 2);
    REQUIRE(std::find(r.probed_classes.begin(), r.probed_classes.end(), class_of[r.nn_id]) !=
            r.probed_classes.end());
    // Brute force over the probed members.
    std::uint32_t best = 0;
    std::int64_t best_value = -1;
    for (std::uint32_t id = 0; id < 200; ++id) {
      if (std::find(r.probed_classes.begin(), r.probed_classes.end(), class_of[id]) ==
          r.probed_classes.end()) {
        continue;
      }
      const auto v = testing::naive_dot(pats[id], x);
      if (v > best_value) {
        best_value = v;
        best = id;
      }
    }
    REQUIRE(r.nn_id == best);
    REQUIRE(r.nn_similarity == best_value);
  }
}

TEST_CASE("cost model worked examples") {
  CostModel dense{128, std::nullopt, 10, {100, 100}};
  CHECK(cost_model(dense) == 189440);
  CostModel sparse{128, 8, 10, {64}};
  CHECK(cost_model(sparse) == 1152);
  CHECK(exhaustive_cost(128, 16384) == 2097152);
  CHECK_THROWS_AS(cost_model({128, std::nullopt, 1, {1, 1}}), ParameterError);
}

TEST_CASE("search_top_p op_count follows the cost model") {
  const auto pats = gen_sparse_patterns({64, 6.0, 120, 2});
  const std::span<const SparsePattern> all(pats);
  const auto idx = build_index(all, allocate_random(120, 6, 5), Rule::kSum);
  for (std::uint32_t p = 1; p <= 6; ++p) {
    const auto r = search_top_p(idx, all, pats[17], p);
    const std::uint64_t c = pats[17].active_count();
    CHECK(r.op_count == c * c * 6 + c * 20 * p);
  }
}

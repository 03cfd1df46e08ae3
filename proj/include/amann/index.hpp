#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "amann/kernels.hpp"
#include "amann/memory.hpp"
#include "amann/pattern.hpp"

namespace amann {

/// Member ids of each class.
using Allocation = std::vector<std::vector<std::uint32_t>>;

/// Checks that the classes are non-empty, disjoint and cover [0, n).
void validate_allocation(const Allocation& allocation, std::uint64_t n);

/// Uniform random permutation of [0, n) cut into q contiguous blocks. The
/// first n mod q classes hold one extra element. Members are sorted.
Allocation allocate_random(std::uint64_t n, std::uint32_t q, std::uint64_t seed);

/// Greedy allocation: q distinct seed patterns open the classes, then every
/// other pattern, in input order, joins the class maximizing
/// score(W_i, x) / |class_i| (lowest class on ties) and W_i absorbs it.
/// `max_class_size` removes full classes from the competition.
template <Pattern P>
Allocation allocate_greedy(std::span<const P> patterns, std::uint32_t q, Rule rule,
                           std::uint64_t seed,
                           std::optional<std::uint64_t> max_class_size = std::nullopt);

/// q disjoint classes over n stored patterns, each with its own memory.
template <Pattern P>
class PartitionedIndex {
 public:
  /// Validates the partition and that every memory matches its class.
  PartitionedIndex(std::uint32_t dim, Rule rule, Allocation classes,
                   std::vector<MemoryMatrix<P>> memories);

  std::uint32_t dim() const { return dim_; }
  Rule rule() const { return rule_; }
  std::uint32_t num_classes() const { return static_cast<std::uint32_t>(classes_.size()); }
  std::uint64_t size() const { return n_; }
  const Allocation& classes() const { return classes_; }
  std::span<const MemoryMatrix<P>> memories() const { return memories_; }

  /// class_of()[id] is the class holding stored pattern `id`.
  std::vector<std::uint32_t> class_of() const;

  friend bool operator==(const PartitionedIndex&, const PartitionedIndex&) = default;

 private:
  std::uint32_t dim_;
  Rule rule_;
  std::uint64_t n_ = 0;
  Allocation classes_;
  std::vector<MemoryMatrix<P>> memories_;
};

/// One memory per class; members are absorbed in ascending id order.
template <Pattern P>
PartitionedIndex<P> build_index(std::span<const P> patterns, Allocation allocation, Rule rule);

template <class V>
struct ClassScore {
  std::uint32_t class_id = 0;
  V value{};

  friend bool operator==(const ClassScore&, const ClassScore&) = default;
};

/// Sorts scores by value descending, class id ascending on ties.
template <class V>
std::vector<ClassScore<V>> order_scores(std::span<const V> values);

template <Pattern P>
std::vector<ClassScore<Value<P>>> rank_classes(const PartitionedIndex<P>& index, const P& query);

template <Pattern P>
struct QueryResult {
  std::vector<ClassScore<Value<P>>> ranking;
  std::vector<std::uint32_t> probed_classes;
  std::uint32_t nn_id = 0;
  Value<P> nn_similarity{};
  std::uint64_t op_count = 0;
};

/// Exhaustive search restricted to the members of the p best-ranked classes.
template <Pattern P>
QueryResult<P> search_top_p(const PartitionedIndex<P>& index, std::span<const P> patterns,
                            const P& query, std::uint32_t p);

/// Elementary-operation count of one filtered search.
///
/// With width w (d, or the query's active count c~ for sparse data): w^2 per
/// class score plus w per candidate in the probed classes. Ordering the q
/// scores is not counted.
struct CostModel {
  std::uint64_t dim = 0;
  std::optional<std::uint64_t> active;  // sparse data only
  std::uint64_t classes = 0;
  std::vector<std::uint64_t> probed_sizes;

  std::uint64_t width() const { return active.value_or(dim); }
};

std::uint64_t cost_model(const CostModel& cm);

/// Cost of the exhaustive reference: w * n.
constexpr std::uint64_t exhaustive_cost(std::uint64_t width, std::uint64_t n) { return width * n; }

}  // namespace amann

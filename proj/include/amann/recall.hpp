#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "amann/baselines.hpp"
#include "amann/index.hpp"
#include "amann/pattern.hpp"

namespace amann {

/// One point of a recall@1 versus relative complexity curve.
struct RecallPoint {
  std::string method;
  std::uint32_t p = 0;
  std::uint32_t a = 0;
  std::uint32_t r = 0;
  std::uint64_t queries = 0;
  std::uint64_t hits = 0;
  double recall = 0;
  double std_error = 0;
  double mean_op_count = 0;
  /// Total op count over the query set divided by the total exhaustive
  /// count (w n per query).
  double relative_complexity = 0;
};

/// Exhaustive nearest neighbor of every query (ties to the lowest id).
template <Pattern P>
std::vector<std::uint32_t> ground_truth(std::span<const P> base, std::span<const P> queries);

/// Recall of the associative-memory filter for each p. A query is a hit for
/// p when the class holding its true nearest neighbor ranks among the first
/// p, which is exactly when search_top_p returns that neighbor.
template <Pattern P>
std::vector<RecallPoint> am_recall_curve(const PartitionedIndex<P>& index,
                                         std::span<const P> queries,
                                         std::span<const std::uint32_t> truth,
                                         std::span<const std::uint32_t> p_values,
                                         const std::string& method);

/// Recall of rs_search for each a: a hit when the true nearest neighbor is
/// attached to one of the a anchors closest to the query.
template <Pattern P>
std::vector<RecallPoint> rs_recall_curve(const AnchorIndex& index, std::span<const P> base,
                                         std::span<const P> queries,
                                         std::span<const std::uint32_t> truth,
                                         std::span<const std::uint32_t> a_values);

/// Recall of hybrid_search for each p at fixed a.
template <Pattern P>
std::vector<RecallPoint> hybrid_recall_curve(const HybridIndex<P>& index, std::span<const P> base,
                                             std::span<const P> queries,
                                             std::span<const std::uint32_t> truth,
                                             std::span<const std::uint32_t> p_values,
                                             std::uint32_t a);

}  // namespace amann

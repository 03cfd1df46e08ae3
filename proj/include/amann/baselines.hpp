#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amann/index.hpp"
#include "amann/pattern.hpp"

namespace amann {

template <Pattern P>
struct SearchHit {
  std::uint32_t nn_id = 0;
  Value<P> similarity{};
  std::uint64_t op_count = 0;
};

/// Exhaustive scan of the whole collection. Ground truth for recall@1.
template <Pattern P>
NearestHit<P> exhaustive_search(std::span<const P> patterns, const P& query);

/// Random-sampling baseline: r anchor points, every element attached to its
/// most similar anchor (lowest anchor position on ties).
struct AnchorIndex {
  std::vector<std::uint32_t> anchor_ids;
  /// attachments[a] lists the members attached to anchor a, ascending.
  std::vector<std::vector<std::uint32_t>> attachments;

  std::uint32_t r() const { return static_cast<std::uint32_t>(anchor_ids.size()); }

  friend bool operator==(const AnchorIndex&, const AnchorIndex&) = default;
};

/// Checks anchor ids are distinct members and attachments partition `members`.
void validate_anchor_index(const AnchorIndex& index, std::span<const std::uint32_t> members);

template <Pattern P>
AnchorIndex rs_build(std::span<const P> patterns, std::uint32_t r, std::uint64_t seed);

/// rs_build over a subset of the collection (anchors drawn from `members`).
template <Pattern P>
AnchorIndex rs_build(std::span<const P> patterns, std::span<const std::uint32_t> members,
                     std::uint32_t r, std::uint64_t seed);

/// Scores all r anchors (cost w r), then scans the attachments of the `a`
/// most similar ones (cost w per candidate).
template <Pattern P>
SearchHit<P> rs_search(const AnchorIndex& index, std::span<const P> patterns, const P& query,
                       std::uint32_t a);

/// Anchor positions ordered by similarity to the query (descending,
/// lowest position on ties).
template <Pattern P>
std::vector<std::uint32_t> rank_anchors(const AnchorIndex& index, std::span<const P> patterns,
                                        const P& query);

/// Associative-memory filter over q classes with an RS index inside each.
template <Pattern P>
struct HybridIndex {
  PartitionedIndex<P> outer;
  std::vector<AnchorIndex> inner;
};

/// Anchor sampling inside class i uses derive_seed(seed, i).
template <Pattern P>
HybridIndex<P> hybrid_build(std::span<const P> patterns, Allocation allocation, Rule rule,
                            std::uint32_t r_per_class, std::uint64_t seed);

/// Ranks classes by memory score, runs rs_search inside each of the top p,
/// returns the best candidate overall. op_count = w^2 q + sum over probed
/// classes of (w r_i + w * probed attachments).
template <Pattern P>
SearchHit<P> hybrid_search(const HybridIndex<P>& index, std::span<const P> patterns,
                           const P& query, std::uint32_t p, std::uint32_t a);

}  // namespace amann

#include "amann/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "amann/error.hpp"
#include "amann/rng.hpp"

namespace amann {

template <Pattern P>
NearestHit<P> exhaustive_search(std::span<const P> patterns, const P& query) {
  return parallel::scan_all(patterns, query);
}

void validate_anchor_index(const AnchorIndex& index, std::span<const std::uint32_t> members) {
  if (index.anchor_ids.empty()) throw DataError("anchor index has no anchors");
  if (index.attachments.size() != index.anchor_ids.size()) {
    throw DataError("anchor index has " + std::to_string(index.anchor_ids.size()) +
                    " anchors but " + std::to_string(index.attachments.size()) +
                    " attachment lists");
  }
  std::vector<std::uint32_t> sorted_members(members.begin(), members.end());
  std::sort(sorted_members.begin(), sorted_members.end());
  std::vector<std::uint32_t> attached;
  for (const auto& list : index.attachments) attached.insert(attached.end(), list.begin(), list.end());
  std::sort(attached.begin(), attached.end());
  if (attached != sorted_members) {
    throw DataError("anchor attachments do not partition the indexed members");
  }
  std::vector<std::uint32_t> anchors = index.anchor_ids;
  std::sort(anchors.begin(), anchors.end());
  if (std::adjacent_find(anchors.begin(), anchors.end()) != anchors.end()) {
    throw DataError("anchor ids repeat");
  }
  for (std::uint32_t id : anchors) {
    if (!std::binary_search(sorted_members.begin(), sorted_members.end(), id)) {
      throw DataError("anchor " + std::to_string(id) + " is not an indexed member");
    }
  }
}

template <Pattern P>
AnchorIndex rs_build(std::span<const P> patterns, std::span<const std::uint32_t> members,
                     std::uint32_t r, std::uint64_t seed) {
  if (r < 1 || r > members.size()) {
    throw ParameterError("anchor count r=" + std::to_string(r) + " outside [1, " +
                         std::to_string(members.size()) + "]");
  }
  Rng rng(seed);
  AnchorIndex index;
  for (std::uint32_t pos :
       sample_without_replacement(static_cast<std::uint32_t>(members.size()), r, rng)) {
    index.anchor_ids.push_back(members[pos]);
  }
  const auto nearest =
      parallel::nearest_anchor(patterns, members, std::span<const std::uint32_t>(index.anchor_ids));
  index.attachments.resize(r);
  for (std::size_t i = 0; i < members.size(); ++i) index.attachments[nearest[i]].push_back(members[i]);
  for (auto& list : index.attachments) std::sort(list.begin(), list.end());
  return index;
}

template <Pattern P>
AnchorIndex rs_build(std::span<const P> patterns, std::uint32_t r, std::uint64_t seed) {
  std::vector<std::uint32_t> all(patterns.size());
  std::iota(all.begin(), all.end(), 0u);
  return rs_build(patterns, std::span<const std::uint32_t>(all), r, seed);
}

template <Pattern P>
std::vector<std::uint32_t> rank_anchors(const AnchorIndex& index, std::span<const P> patterns,
                                        const P& query) {
  std::vector<Value<P>> sims(index.r());
  for (std::uint32_t a = 0; a < index.r(); ++a) sims[a] = dot(query, patterns[index.anchor_ids[a]]);
  std::vector<std::uint32_t> order(index.r());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return ranks_before(sims[x], x, sims[y], y);
  });
  return order;
}

namespace {

template <Pattern P>
std::uint64_t width_of(const P& query) {
  return cost_width(query);
}

// Search inside one anchor index; fills candidates and returns probed count.
template <Pattern P>
std::uint64_t collect_rs_candidates(const AnchorIndex& index, std::span<const P> patterns,
                                    const P& query, std::uint32_t a,
                                    std::vector<std::uint32_t>& candidates) {
  if (a < 1 || a > index.r()) {
    throw ParameterError("probed anchor count a=" + std::to_string(a) + " outside [1, " +
                         std::to_string(index.r()) + "]");
  }
  const auto order = rank_anchors(index, patterns, query);
  std::uint64_t probed = 0;
  for (std::uint32_t i = 0; i < a; ++i) {
    const auto& list = index.attachments[order[i]];
    candidates.insert(candidates.end(), list.begin(), list.end());
    probed += list.size();
  }
  return probed;
}

}  // namespace

template <Pattern P>
SearchHit<P> rs_search(const AnchorIndex& index, std::span<const P> patterns, const P& query,
                       std::uint32_t a) {
  std::vector<std::uint32_t> candidates;
  const std::uint64_t probed = collect_rs_candidates(index, patterns, query, a, candidates);
  const auto hit = parallel::scan_nearest(patterns, std::span<const std::uint32_t>(candidates), query);
  const std::uint64_t w = width_of(query);
  return {hit.id, hit.similarity, w * index.r() + w * probed};
}

template <Pattern P>
HybridIndex<P> hybrid_build(std::span<const P> patterns, Allocation allocation, Rule rule,
                            std::uint32_t r_per_class, std::uint64_t seed) {
  auto outer = build_index(patterns, std::move(allocation), rule);
  std::vector<AnchorIndex> inner;
  inner.reserve(outer.num_classes());
  for (std::uint32_t c = 0; c < outer.num_classes(); ++c) {
    const auto& members = outer.classes()[c];
    if (r_per_class > members.size()) {
      throw ParameterError("r_per_class=" + std::to_string(r_per_class) + " exceeds the size " +
                           std::to_string(members.size()) + " of class " + std::to_string(c));
    }
    inner.push_back(rs_build(patterns, std::span<const std::uint32_t>(members), r_per_class,
                             derive_seed(seed, c)));
  }
  return HybridIndex<P>{std::move(outer), std::move(inner)};
}

template <Pattern P>
SearchHit<P> hybrid_search(const HybridIndex<P>& index, std::span<const P> patterns,
                           const P& query, std::uint32_t p, std::uint32_t a) {
  const std::uint32_t q = index.outer.num_classes();
  if (p < 1 || p > q) {
    throw ParameterError("probe count p=" + std::to_string(p) + " outside [1, " +
                         std::to_string(q) + "]");
  }
  const auto ranking = rank_classes(index.outer, query);
  const std::uint64_t w = width_of(query);
  std::uint64_t ops = w * w * q;
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t i = 0; i < p; ++i) {
    const AnchorIndex& inner = index.inner[ranking[i].class_id];
    const std::uint64_t probed = collect_rs_candidates(inner, patterns, query, a, candidates);
    ops += w * inner.r() + w * probed;
  }
  const auto hit = parallel::scan_nearest(patterns, std::span<const std::uint32_t>(candidates), query);
  return {hit.id, hit.similarity, ops};
}

#define AMANN_INSTANTIATE(P)                                                                  \
  template NearestHit<P> exhaustive_search(std::span<const P>, const P&);                     \
  template AnchorIndex rs_build(std::span<const P>, std::uint32_t, std::uint64_t);           \
  template AnchorIndex rs_build(std::span<const P>, std::span<const std::uint32_t>,          \
                                std::uint32_t, std::uint64_t);                                \
  template SearchHit<P> rs_search(const AnchorIndex&, std::span<const P>, const P&,          \
                                  std::uint32_t);                                             \
  template std::vector<std::uint32_t> rank_anchors(const AnchorIndex&, std::span<const P>,   \
                                                   const P&);                                 \
  template HybridIndex<P> hybrid_build(std::span<const P>, Allocation, Rule, std::uint32_t,  \
                                       std::uint64_t);                                        \
  template SearchHit<P> hybrid_search(const HybridIndex<P>&, std::span<const P>, const P&,   \
                                      std::uint32_t, std::uint32_t);

AMANN_INSTANTIATE(SparsePattern)
AMANN_INSTANTIATE(DensePattern)
AMANN_INSTANTIATE(RealPattern)

#undef AMANN_INSTANTIATE

}  // namespace amann

#include <stdexcept>

#include "amann/error.hpp"
#include "amann/kernels.hpp"

namespace amann::serial {

template <Pattern P>
std::vector<Value<P>> class_scores(std::span<const MemoryMatrix<P>> memories, const P& query) {
  std::vector<Value<P>> out(memories.size());
  for (std::size_t i = 0; i < memories.size(); ++i) out[i] = score(memories[i], query);
  return out;
}

template <Pattern P>
NearestHit<P> scan_nearest(std::span<const P> patterns, std::span<const std::uint32_t> ids,
                           const P& query) {
  if (ids.empty()) throw ParameterError("nearest-neighbor scan over an empty candidate set");
  NearestHit<P> best{ids[0], dot(query, patterns[ids[0]])};
  for (std::size_t i = 1; i < ids.size(); ++i) {
    const Value<P> s = dot(query, patterns[ids[i]]);
    if (ranks_before(s, ids[i], best.similarity, best.id)) best = {ids[i], s};
  }
  return best;
}

template <Pattern P>
NearestHit<P> scan_all(std::span<const P> patterns, const P& query) {
  if (patterns.empty()) throw ParameterError("nearest-neighbor scan over an empty collection");
  NearestHit<P> best{0, dot(query, patterns[0])};
  for (std::uint32_t id = 1; id < patterns.size(); ++id) {
    const Value<P> s = dot(query, patterns[id]);
    if (s > best.similarity) best = {id, s};
  }
  return best;
}

template <Pattern P>
std::vector<NearestHit<P>> nearest_for_each(std::span<const P> base, std::span<const P> queries) {
  std::vector<NearestHit<P>> out;
  out.reserve(queries.size());
  for (const P& q : queries) out.push_back(scan_all(base, q));
  return out;
}

template <Pattern P>
std::vector<std::uint32_t> nearest_anchor(std::span<const P> patterns,
                                          std::span<const std::uint32_t> members,
                                          std::span<const std::uint32_t> anchor_ids) {
  if (anchor_ids.empty()) throw ParameterError("no anchors");
  std::vector<std::uint32_t> out(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const P& x = patterns[members[i]];
    std::uint32_t best = 0;
    Value<P> best_sim = dot(x, patterns[anchor_ids[0]]);
    for (std::uint32_t a = 1; a < anchor_ids.size(); ++a) {
      const Value<P> s = dot(x, patterns[anchor_ids[a]]);
      if (s > best_sim) {
        best = a;
        best_sim = s;
      }
    }
    out[i] = best;
  }
  return out;
}

#define AMANN_INSTANTIATE(P)                                                                \
  template std::vector<Value<P>> class_scores(std::span<const MemoryMatrix<P>>, const P&);  \
  template NearestHit<P> scan_nearest(std::span<const P>, std::span<const std::uint32_t>,   \
                                      const P&);                                            \
  template NearestHit<P> scan_all(std::span<const P>, const P&);                            \
  template std::vector<NearestHit<P>> nearest_for_each(std::span<const P>,                  \
                                                       std::span<const P>);                 \
  template std::vector<std::uint32_t> nearest_anchor(                                       \
      std::span<const P>, std::span<const std::uint32_t>, std::span<const std::uint32_t>);

AMANN_INSTANTIATE(SparsePattern)
AMANN_INSTANTIATE(DensePattern)
AMANN_INSTANTIATE(RealPattern)

#undef AMANN_INSTANTIATE

}  // namespace amann::serial

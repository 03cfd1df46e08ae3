#pragma once

// Data-parallel inner loops of the search pipeline.
//
// Every kernel exists twice with identical signatures: `serial::` is the
// plain reference loop, `parallel::` is the OpenMP version used by the rest
// of the library. Both return bit-identical results; ties are always broken
// towards the lowest id, so the parallel reductions do not depend on thread
// scheduling.

#include <cstdint>
#include <span>
#include <vector>

#include "amann/memory.hpp"
#include "amann/pattern.hpp"

namespace amann {

template <Pattern P>
struct NearestHit {
  std::uint32_t id = 0;
  Value<P> similarity{};

  friend bool operator==(const NearestHit&, const NearestHit&) = default;
};

/// Ranking order: higher value first, lower id on ties.
template <class V>
constexpr bool ranks_before(V value_a, std::uint32_t id_a, V value_b, std::uint32_t id_b) {
  return value_a > value_b || (value_a == value_b && id_a < id_b);
}

namespace serial {

/// score(memories[i], query) for every i.
template <Pattern P>
std::vector<Value<P>> class_scores(std::span<const MemoryMatrix<P>> memories, const P& query);

/// Most similar pattern among `ids` (non-empty).
template <Pattern P>
NearestHit<P> scan_nearest(std::span<const P> patterns, std::span<const std::uint32_t> ids,
                           const P& query);

/// Most similar pattern in the whole collection (non-empty).
template <Pattern P>
NearestHit<P> scan_all(std::span<const P> patterns, const P& query);

/// scan_all for every query.
template <Pattern P>
std::vector<NearestHit<P>> nearest_for_each(std::span<const P> base, std::span<const P> queries);

/// For each member, the position in `anchor_ids` of its most similar anchor.
template <Pattern P>
std::vector<std::uint32_t> nearest_anchor(std::span<const P> patterns,
                                          std::span<const std::uint32_t> members,
                                          std::span<const std::uint32_t> anchor_ids);

}  // namespace serial

namespace parallel {

template <Pattern P>
std::vector<Value<P>> class_scores(std::span<const MemoryMatrix<P>> memories, const P& query);

template <Pattern P>
NearestHit<P> scan_nearest(std::span<const P> patterns, std::span<const std::uint32_t> ids,
                           const P& query);

template <Pattern P>
NearestHit<P> scan_all(std::span<const P> patterns, const P& query);

template <Pattern P>
std::vector<NearestHit<P>> nearest_for_each(std::span<const P> base, std::span<const P> queries);

template <Pattern P>
std::vector<std::uint32_t> nearest_anchor(std::span<const P> patterns,
                                          std::span<const std::uint32_t> members,
                                          std::span<const std::uint32_t> anchor_ids);

}  // namespace parallel

/// Caps the OpenMP worker count (0 keeps the runtime default).
void set_thread_count(int threads);
int max_thread_count();

}  // namespace amann

#include <omp.h>

#include <string>

#include "amann/error.hpp"
#include "amann/kernels.hpp"

namespace amann {

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int max_thread_count() { return omp_get_max_threads(); }

namespace parallel {

namespace {

// Below this many candidates a scan stays on the calling thread.
constexpr std::size_t kMinParallelScan = 2048;

template <Pattern P>
void check_dim(const P& reference, const P& query) {
  if (reference.dim() != query.dim()) {
    throw ParameterError("query dimension " + std::to_string(query.dim()) +
                         " differs from collection dimension " +
                         std::to_string(reference.dim()));
  }
}

}  // namespace

template <Pattern P>
std::vector<Value<P>> class_scores(std::span<const MemoryMatrix<P>> memories, const P& query) {
  for (const auto& m : memories) {
    if (m.dim() != query.dim()) throw ParameterError("query dimension differs from memory dimension");
  }
  std::vector<Value<P>> out(memories.size());
  const auto count = static_cast<std::int64_t>(memories.size());
#pragma omp parallel for schedule(dynamic) if (count > 1)
  for (std::int64_t i = 0; i < count; ++i) out[i] = score(memories[i], query);
  return out;
}

template <Pattern P>
NearestHit<P> scan_nearest(std::span<const P> patterns, std::span<const std::uint32_t> ids,
                           const P& query) {
  if (ids.empty()) throw ParameterError("nearest-neighbor scan over an empty candidate set");
  check_dim(patterns[ids[0]], query);
  NearestHit<P> best{ids[0], dot(query, patterns[ids[0]])};
  const auto count = static_cast<std::int64_t>(ids.size());
#pragma omp parallel if (ids.size() >= kMinParallelScan)
  {
    NearestHit<P> local = best;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 1; i < count; ++i) {
      const Value<P> s = dot(query, patterns[ids[i]]);
      if (ranks_before(s, ids[i], local.similarity, local.id)) local = {ids[i], s};
    }
#pragma omp critical(amann_scan_nearest)
    if (ranks_before(local.similarity, local.id, best.similarity, best.id)) best = local;
  }
  return best;
}

template <Pattern P>
NearestHit<P> scan_all(std::span<const P> patterns, const P& query) {
  if (patterns.empty()) throw ParameterError("nearest-neighbor scan over an empty collection");
  check_dim(patterns[0], query);
  NearestHit<P> best{0, dot(query, patterns[0])};
  const auto count = static_cast<std::int64_t>(patterns.size());
#pragma omp parallel if (patterns.size() >= kMinParallelScan)
  {
    NearestHit<P> local = best;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 1; i < count; ++i) {
      const Value<P> s = dot(query, patterns[i]);
      if (s > local.similarity) local = {static_cast<std::uint32_t>(i), s};
    }
#pragma omp critical(amann_scan_all)
    if (ranks_before(local.similarity, local.id, best.similarity, best.id)) best = local;
  }
  return best;
}

template <Pattern P>
std::vector<NearestHit<P>> nearest_for_each(std::span<const P> base, std::span<const P> queries) {
  if (base.empty()) throw ParameterError("nearest-neighbor scan over an empty collection");
  for (const P& q : queries) check_dim(base[0], q);
  std::vector<NearestHit<P>> out(queries.size());
  const auto count = static_cast<std::int64_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t qi = 0; qi < count; ++qi) {
    const P& q = queries[qi];
    NearestHit<P> best{0, dot(q, base[0])};
    for (std::uint32_t id = 1; id < base.size(); ++id) {
      const Value<P> s = dot(q, base[id]);
      if (s > best.similarity) best = {id, s};
    }
    out[qi] = best;
  }
  return out;
}

template <Pattern P>
std::vector<std::uint32_t> nearest_anchor(std::span<const P> patterns,
                                          std::span<const std::uint32_t> members,
                                          std::span<const std::uint32_t> anchor_ids) {
  if (anchor_ids.empty()) throw ParameterError("no anchors");
  for (std::uint32_t id : members) check_dim(patterns[anchor_ids[0]], patterns[id]);
  std::vector<std::uint32_t> out(members.size());
  const auto count = static_cast<std::int64_t>(members.size());
#pragma omp parallel for schedule(dynamic, 16) if (count >= 64)
  for (std::int64_t i = 0; i < count; ++i) {
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

}  // namespace parallel
}  // namespace amann

#include "amann/recall.hpp"

#include <cmath>
#include <string>

#include "amann/error.hpp"
#include "amann/kernels.hpp"

namespace amann {

namespace {

void check_queries(std::size_t queries, std::size_t truth) {
  if (queries == 0) throw ParameterError("recall needs a non-empty query set");
  if (truth != queries) {
    throw DataError("ground truth holds " + std::to_string(truth) + " entries for " +
                    std::to_string(queries) + " queries");
  }
}

RecallPoint finish(RecallPoint pt, std::uint64_t hits, double ops, double exhaustive,
                   std::uint64_t queries) {
  pt.queries = queries;
  pt.hits = hits;
  pt.recall = static_cast<double>(hits) / static_cast<double>(queries);
  pt.std_error = std::sqrt(pt.recall * (1.0 - pt.recall) / static_cast<double>(queries));
  pt.mean_op_count = ops / static_cast<double>(queries);
  pt.relative_complexity = ops / exhaustive;
  return pt;
}

}  // namespace

template <Pattern P>
std::vector<std::uint32_t> ground_truth(std::span<const P> base, std::span<const P> queries) {
  const auto hits = parallel::nearest_for_each(base, queries);
  std::vector<std::uint32_t> out(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) out[i] = hits[i].id;
  return out;
}

template <Pattern P>
std::vector<RecallPoint> am_recall_curve(const PartitionedIndex<P>& index,
                                         std::span<const P> queries,
                                         std::span<const std::uint32_t> truth,
                                         std::span<const std::uint32_t> p_values,
                                         const std::string& method) {
  check_queries(queries.size(), truth.size());
  const std::uint32_t q = index.num_classes();
  for (std::uint32_t p : p_values) {
    if (p < 1 || p > q) {
      throw ParameterError("probe count p=" + std::to_string(p) + " outside [1, " +
                           std::to_string(q) + "]");
    }
  }
  for (std::uint32_t id : truth) {
    if (id >= index.size()) throw DataError("ground-truth id " + std::to_string(id) + " out of range");
  }
  const auto class_of = index.class_of();
  const auto nq = static_cast<std::int64_t>(queries.size());
  // Per query: rank of the true neighbor's class and cumulative probed sizes.
  std::vector<std::uint32_t> rank(queries.size());
  std::vector<std::vector<std::uint64_t>> prefix(queries.size());
  std::vector<std::uint64_t> width(queries.size());
  for (const P& x : queries) {
    if (x.dim() != index.dim()) throw ParameterError("query dimension differs from the index");
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < nq; ++i) {
    const auto ranking = rank_classes(index, queries[i]);
    auto& pre = prefix[i];
    pre.assign(q + 1, 0);
    for (std::uint32_t j = 0; j < q; ++j) {
      const std::uint32_t c = ranking[j].class_id;
      pre[j + 1] = pre[j] + index.classes()[c].size();
      if (c == class_of[truth[i]]) rank[i] = j;
    }
    width[i] = cost_width(queries[i]);
  }
  std::vector<RecallPoint> out;
  for (std::uint32_t p : p_values) {
    std::uint64_t hits = 0;
    double ops = 0, exhaustive = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const std::uint64_t w = width[i];
      if (rank[i] < p) ++hits;
      ops += static_cast<double>(w * w * q + w * prefix[i][p]);
      exhaustive += static_cast<double>(exhaustive_cost(w, index.size()));
    }
    RecallPoint pt;
    pt.method = method;
    pt.p = p;
    out.push_back(finish(pt, hits, ops, exhaustive, queries.size()));
  }
  return out;
}

template <Pattern P>
std::vector<RecallPoint> rs_recall_curve(const AnchorIndex& index, std::span<const P> base,
                                         std::span<const P> queries,
                                         std::span<const std::uint32_t> truth,
                                         std::span<const std::uint32_t> a_values) {
  check_queries(queries.size(), truth.size());
  const std::uint32_t r = index.r();
  for (std::uint32_t a : a_values) {
    if (a < 1 || a > r) {
      throw ParameterError("probed anchor count a=" + std::to_string(a) + " outside [1, " +
                           std::to_string(r) + "]");
    }
  }
  std::vector<std::uint32_t> anchor_of(base.size(), r);
  for (std::uint32_t a = 0; a < r; ++a) {
    for (std::uint32_t id : index.attachments[a]) anchor_of[id] = a;
  }
  for (std::uint32_t id : truth) {
    if (id >= base.size() || anchor_of[id] == r) {
      throw DataError("ground-truth id " + std::to_string(id) + " is not indexed");
    }
  }
  for (const P& x : queries) {
    if (x.dim() != base[0].dim()) throw ParameterError("query dimension differs from the collection");
  }
  const auto nq = static_cast<std::int64_t>(queries.size());
  std::vector<std::uint32_t> rank(queries.size());
  std::vector<std::vector<std::uint64_t>> prefix(queries.size());
  std::vector<std::uint64_t> width(queries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < nq; ++i) {
    const auto order = rank_anchors(index, base, queries[i]);
    auto& pre = prefix[i];
    pre.assign(r + 1, 0);
    for (std::uint32_t j = 0; j < r; ++j) {
      pre[j + 1] = pre[j] + index.attachments[order[j]].size();
      if (order[j] == anchor_of[truth[i]]) rank[i] = j;
    }
    width[i] = cost_width(queries[i]);
  }
  std::vector<RecallPoint> out;
  for (std::uint32_t a : a_values) {
    std::uint64_t hits = 0;
    double ops = 0, exhaustive = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const std::uint64_t w = width[i];
      if (rank[i] < a) ++hits;
      ops += static_cast<double>(w * r + w * prefix[i][a]);
      exhaustive += static_cast<double>(exhaustive_cost(w, base.size()));
    }
    RecallPoint pt;
    pt.method = "rs";
    pt.a = a;
    pt.r = r;
    out.push_back(finish(pt, hits, ops, exhaustive, queries.size()));
  }
  return out;
}

template <Pattern P>
std::vector<RecallPoint> hybrid_recall_curve(const HybridIndex<P>& index, std::span<const P> base,
                                             std::span<const P> queries,
                                             std::span<const std::uint32_t> truth,
                                             std::span<const std::uint32_t> p_values,
                                             std::uint32_t a) {
  check_queries(queries.size(), truth.size());
  std::vector<RecallPoint> out;
  for (std::uint32_t p : p_values) {
    std::uint64_t hits = 0;
    double ops = 0, exhaustive = 0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto hit = hybrid_search(index, base, queries[i], p, a);
      if (hit.nn_id == truth[i]) ++hits;
      ops += static_cast<double>(hit.op_count);
      exhaustive += static_cast<double>(exhaustive_cost(cost_width(queries[i]), base.size()));
    }
    RecallPoint pt;
    pt.method = "hybrid";
    pt.p = p;
    pt.a = a;
    pt.r = index.inner.empty() ? 0 : index.inner.front().r();
    out.push_back(finish(pt, hits, ops, exhaustive, queries.size()));
  }
  return out;
}

#define AMANN_INSTANTIATE(P)                                                                      \
  template std::vector<std::uint32_t> ground_truth(std::span<const P>, std::span<const P>);      \
  template std::vector<RecallPoint> am_recall_curve(const PartitionedIndex<P>&,                   \
                                                    std::span<const P>,                           \
                                                    std::span<const std::uint32_t>,               \
                                                    std::span<const std::uint32_t>,               \
                                                    const std::string&);                          \
  template std::vector<RecallPoint> rs_recall_curve(const AnchorIndex&, std::span<const P>,       \
                                                    std::span<const P>,                           \
                                                    std::span<const std::uint32_t>,               \
                                                    std::span<const std::uint32_t>);              \
  template std::vector<RecallPoint> hybrid_recall_curve(                                          \
      const HybridIndex<P>&, std::span<const P>, std::span<const P>,                              \
      std::span<const std::uint32_t>, std::span<const std::uint32_t>, std::uint32_t);

AMANN_INSTANTIATE(SparsePattern)
AMANN_INSTANTIATE(DensePattern)
AMANN_INSTANTIATE(RealPattern)

#undef AMANN_INSTANTIATE

}  // namespace amann

#include "amann/index.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "amann/error.hpp"
#include "amann/rng.hpp"

namespace amann {

void validate_allocation(const Allocation& allocation, std::uint64_t n) {
  if (allocation.empty()) throw DataError("allocation has no classes");
  std::vector<std::uint8_t> seen(n, 0);
  std::uint64_t covered = 0;
  for (std::size_t c = 0; c < allocation.size(); ++c) {
    if (allocation[c].empty()) throw DataError("class " + std::to_string(c) + " is empty");
    for (std::uint32_t id : allocation[c]) {
      if (id >= n) {
        throw DataError("class " + std::to_string(c) + " holds id " + std::to_string(id) +
                        " outside [0, " + std::to_string(n) + ")");
      }
      if (seen[id]) throw DataError("id " + std::to_string(id) + " appears in two classes");
      seen[id] = 1;
      ++covered;
    }
  }
  if (covered != n) {
    throw DataError("classes cover " + std::to_string(covered) + " of " + std::to_string(n) +
                    " ids");
  }
}

Allocation allocate_random(std::uint64_t n, std::uint32_t q, std::uint64_t seed) {
  if (q == 0) throw ParameterError("class count q must be at least 1");
  if (n < q) {
    throw ParameterError("cannot split " + std::to_string(n) + " patterns into " +
                         std::to_string(q) + " non-empty classes");
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  shuffle(std::span<std::uint32_t>(order), rng);
  Allocation classes(q);
  const std::uint64_t base = n / q;
  const std::uint64_t extra = n % q;
  std::size_t pos = 0;
  for (std::uint32_t c = 0; c < q; ++c) {
    const std::uint64_t size = base + (c < extra ? 1 : 0);
    classes[c].assign(order.begin() + pos, order.begin() + pos + size);
    std::sort(classes[c].begin(), classes[c].end());
    pos += size;
  }
  return classes;
}

namespace {

// Is a/size_a strictly greater than b/size_b?
bool normalized_greater(std::int64_t a, std::uint64_t size_a, std::int64_t b,
                        std::uint64_t size_b) {
  return static_cast<__int128>(a) * size_b > static_cast<__int128>(b) * size_a;
}

bool normalized_greater(double a, std::uint64_t size_a, double b, std::uint64_t size_b) {
  return a / static_cast<double>(size_a) > b / static_cast<double>(size_b);
}

}  // namespace

template <Pattern P>
Allocation allocate_greedy(std::span<const P> patterns, std::uint32_t q, Rule rule,
                           std::uint64_t seed, std::optional<std::uint64_t> max_class_size) {
  const std::uint64_t n = patterns.size();
  if (q == 0) throw ParameterError("class count q must be at least 1");
  if (n < q) {
    throw ParameterError("cannot split " + std::to_string(n) + " patterns into " +
                         std::to_string(q) + " non-empty classes");
  }
  if (max_class_size && *max_class_size * q < n) {
    throw ParameterError("max class size " + std::to_string(*max_class_size) +
                         " cannot hold " + std::to_string(n) + " patterns in " +
                         std::to_string(q) + " classes");
  }
  const std::uint32_t dim = patterns[0].dim();
  for (const P& x : patterns) {
    if (x.dim() != dim) throw DataError("patterns do not share one dimension");
  }
  Rng rng(seed);
  const auto seeds = sample_without_replacement(static_cast<std::uint32_t>(n), q, rng);
  Allocation classes(q);
  std::vector<MemoryMatrix<P>> memories;
  memories.reserve(q);
  std::vector<std::uint8_t> is_seed(n, 0);
  for (std::uint32_t c = 0; c < q; ++c) {
    classes[c].push_back(seeds[c]);
    memories.emplace_back(dim, rule);
    memories.back().absorb(patterns[seeds[c]]);
    is_seed[seeds[c]] = 1;
  }
  for (std::uint32_t id = 0; id < n; ++id) {
    if (is_seed[id]) continue;
    const auto scores =
        parallel::class_scores(std::span<const MemoryMatrix<P>>(memories), patterns[id]);
    std::optional<std::uint32_t> best;
    for (std::uint32_t c = 0; c < q; ++c) {
      if (max_class_size && classes[c].size() >= *max_class_size) continue;
      if (!best || normalized_greater(scores[c], classes[c].size(), scores[*best],
                                      classes[*best].size())) {
        best = c;
      }
    }
    classes[*best].push_back(id);
    memories[*best].absorb(patterns[id]);
  }
  for (auto& members : classes) std::sort(members.begin(), members.end());
  return classes;
}

template <Pattern P>
PartitionedIndex<P>::PartitionedIndex(std::uint32_t dim, Rule rule, Allocation classes,
                                      std::vector<MemoryMatrix<P>> memories)
    : dim_(dim), rule_(rule), classes_(std::move(classes)), memories_(std::move(memories)) {
  for (const auto& members : classes_) n_ += members.size();
  validate_allocation(classes_, n_);
  if (memories_.size() != classes_.size()) {
    throw DataError("index has " + std::to_string(classes_.size()) + " classes but " +
                    std::to_string(memories_.size()) + " memories");
  }
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (memories_[c].dim() != dim_ || memories_[c].rule() != rule_) {
      throw DataError("memory " + std::to_string(c) + " has the wrong dimension or rule");
    }
    if (memories_[c].stored_count() != classes_[c].size()) {
      throw DataError("memory " + std::to_string(c) + " stores " +
                      std::to_string(memories_[c].stored_count()) + " patterns, class has " +
                      std::to_string(classes_[c].size()));
    }
  }
}

template <Pattern P>
std::vector<std::uint32_t> PartitionedIndex<P>::class_of() const {
  std::vector<std::uint32_t> out(n_);
  for (std::uint32_t c = 0; c < classes_.size(); ++c) {
    for (std::uint32_t id : classes_[c]) out[id] = c;
  }
  return out;
}

template <Pattern P>
PartitionedIndex<P> build_index(std::span<const P> patterns, Allocation allocation, Rule rule) {
  if (patterns.empty()) throw ParameterError("cannot index an empty collection");
  validate_allocation(allocation, patterns.size());
  const std::uint32_t dim = patterns[0].dim();
  for (const P& x : patterns) {
    if (x.dim() != dim) throw DataError("patterns do not share one dimension");
  }
  for (auto& members : allocation) std::sort(members.begin(), members.end());
  std::vector<MemoryMatrix<P>> memories;
  memories.reserve(allocation.size());
  for (const auto& members : allocation) memories.push_back(build_memory(dim, patterns, members, rule));
  return PartitionedIndex<P>(dim, rule, std::move(allocation), std::move(memories));
}

template <class V>
std::vector<ClassScore<V>> order_scores(std::span<const V> values) {
  std::vector<ClassScore<V>> out(values.size());
  for (std::uint32_t c = 0; c < values.size(); ++c) out[c] = {c, values[c]};
  std::sort(out.begin(), out.end(), [](const ClassScore<V>& a, const ClassScore<V>& b) {
    return ranks_before(a.value, a.class_id, b.value, b.class_id);
  });
  return out;
}

template <Pattern P>
std::vector<ClassScore<Value<P>>> rank_classes(const PartitionedIndex<P>& index, const P& query) {
  const auto values = parallel::class_scores(index.memories(), query);
  return order_scores(std::span<const Value<P>>(values));
}

template <Pattern P>
QueryResult<P> search_top_p(const PartitionedIndex<P>& index, std::span<const P> patterns,
                            const P& query, std::uint32_t p) {
  if (p < 1 || p > index.num_classes()) {
    throw ParameterError("probe count p=" + std::to_string(p) + " outside [1, " +
                         std::to_string(index.num_classes()) + "]");
  }
  if (patterns.size() != index.size()) {
    throw ParameterError("collection size differs from the indexed size");
  }
  QueryResult<P> result;
  result.ranking = rank_classes(index, query);
  std::vector<std::uint32_t> candidates;
  CostModel cm{index.dim(), std::nullopt, index.num_classes(), {}};
  if constexpr (PatternTraits<P>::kVariant == Variant::kSparse) cm.active = query.active_count();
  for (std::uint32_t i = 0; i < p; ++i) {
    const std::uint32_t c = result.ranking[i].class_id;
    result.probed_classes.push_back(c);
    const auto& members = index.classes()[c];
    candidates.insert(candidates.end(), members.begin(), members.end());
    cm.probed_sizes.push_back(members.size());
  }
  const auto hit = parallel::scan_nearest(patterns, std::span<const std::uint32_t>(candidates), query);
  result.nn_id = hit.id;
  result.nn_similarity = hit.similarity;
  result.op_count = cost_model(cm);
  return result;
}

std::uint64_t cost_model(const CostModel& cm) {
  if (cm.dim == 0 || cm.classes == 0) throw ParameterError("cost model needs positive d and q");
  if (cm.probed_sizes.size() > cm.classes) throw ParameterError("cost model has p > q");
  const std::uint64_t w = cm.width();
  std::uint64_t probed = 0;
  for (std::uint64_t s : cm.probed_sizes) probed += s;
  return w * w * cm.classes + w * probed;
}

#define AMANN_INSTANTIATE(P)                                                                 \
  template Allocation allocate_greedy(std::span<const P>, std::uint32_t, Rule,              \
                                      std::uint64_t, std::optional<std::uint64_t>);          \
  template class PartitionedIndex<P>;                                                        \
  template PartitionedIndex<P> build_index(std::span<const P>, Allocation, Rule);           \
  template std::vector<ClassScore<Value<P>>> rank_classes(const PartitionedIndex<P>&,        \
                                                          const P&);                         \
  template QueryResult<P> search_top_p(const PartitionedIndex<P>&, std::span<const P>,       \
                                       const P&, std::uint32_t);

AMANN_INSTANTIATE(SparsePattern)
AMANN_INSTANTIATE(DensePattern)
AMANN_INSTANTIATE(RealPattern)

#undef AMANN_INSTANTIATE

template std::vector<ClassScore<std::int64_t>> order_scores(std::span<const std::int64_t>);
template std::vector<ClassScore<double>> order_scores(std::span<const double>);

}  // namespace amann

#include "amann/memory.hpp"

#include <cmath>
#include <string>

#include "amann/error.hpp"

namespace amann {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::kSum: return "sum";
    case Rule::kMax: return "max";
  }
  return "unknown";
}

Rule parse_rule(std::string_view name) {
  if (name == "sum") return Rule::kSum;
  if (name == "max" || name == "cooccurrence") return Rule::kMax;
  throw ParameterError("unknown memory rule '" + std::string(name) + "'");
}

template <Pattern P>
MemoryMatrix<P>::MemoryMatrix(std::uint32_t dim, Rule rule) : dim_(dim), rule_(rule) {
  if (dim == 0) throw ParameterError("memory dimension must be positive");
  if (rule == Rule::kMax && PatternTraits<P>::kVariant != Variant::kSparse) {
    throw ParameterError(std::string("unsupported rule: max (cooccurrence) memories need sparse "
                                     "binary patterns, got ") +
                         std::string(to_string(PatternTraits<P>::kVariant)));
  }
  cells_.assign(static_cast<std::size_t>(dim) * dim, Cell{});
}

template <Pattern P>
MemoryMatrix<P> MemoryMatrix<P>::from_cells(std::uint32_t dim, Rule rule,
                                            std::vector<Cell> cells,
                                            std::uint64_t stored_count) {
  MemoryMatrix memory(dim, rule);
  if (cells.size() != memory.cells_.size()) {
    throw DataError("memory has " + std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(memory.cells_.size()));
  }
  const auto at = [&](std::uint32_t l, std::uint32_t m) {
    return cells[static_cast<std::size_t>(l) * dim + m];
  };
  for (std::uint32_t l = 0; l < dim; ++l) {
    for (std::uint32_t m = 0; m < dim; ++m) {
      const Cell v = at(l, m);
      if constexpr (std::is_floating_point_v<Cell>) {
        if (!std::isfinite(v)) throw DataError("memory cell is not finite");
      }
      if (v != at(m, l)) {
        throw DataError("memory is not symmetric at (" + std::to_string(l) + ", " +
                        std::to_string(m) + ")");
      }
      if (rule == Rule::kMax && v != 0 && v != 1) {
        throw DataError("max-rule memory cell outside {0, 1}");
      }
      if constexpr (PatternTraits<P>::kVariant == Variant::kSparse) {
        if (v < 0 || v > at(l, l) || at(l, l) > static_cast<Cell>(stored_count)) {
          throw DataError("sparse memory cell inconsistent with stored count");
        }
      }
    }
    if constexpr (PatternTraits<P>::kVariant == Variant::kDense) {
      if (at(l, l) != static_cast<Cell>(stored_count)) {
        throw DataError("dense memory diagonal differs from stored count");
      }
    }
  }
  memory.cells_ = std::move(cells);
  memory.stored_count_ = stored_count;
  return memory;
}

template <>
void MemoryMatrix<SparsePattern>::absorb(const SparsePattern& x) {
  if (x.dim() != dim_) throw ParameterError("pattern dimension differs from memory dimension");
  const auto active = x.active();
  for (std::uint32_t l : active) {
    Cell* row = cells_.data() + static_cast<std::size_t>(l) * dim_;
    if (rule_ == Rule::kSum) {
      for (std::uint32_t m : active) row[m] += 1;
    } else {
      for (std::uint32_t m : active) row[m] = 1;
    }
  }
  ++stored_count_;
}

template <>
void MemoryMatrix<DensePattern>::absorb(const DensePattern& x) {
  if (x.dim() != dim_) throw ParameterError("pattern dimension differs from memory dimension");
  const std::vector<int> signs = x.signs();
  for (std::uint32_t l = 0; l < dim_; ++l) {
    Cell* row = cells_.data() + static_cast<std::size_t>(l) * dim_;
    if (signs[l] > 0) {
      for (std::uint32_t m = 0; m < dim_; ++m) row[m] += signs[m];
    } else {
      for (std::uint32_t m = 0; m < dim_; ++m) row[m] -= signs[m];
    }
  }
  ++stored_count_;
}

template <>
void MemoryMatrix<RealPattern>::absorb(const RealPattern& x) {
  if (x.dim() != dim_) throw ParameterError("pattern dimension differs from memory dimension");
  const auto v = x.values();
  for (std::uint32_t l = 0; l < dim_; ++l) {
    Cell* row = cells_.data() + static_cast<std::size_t>(l) * dim_;
    const double xl = v[l];
    for (std::uint32_t m = 0; m < dim_; ++m) row[m] += xl * v[m];
  }
  ++stored_count_;
}

template <Pattern P>
MemoryMatrix<P> build_memory(std::uint32_t dim, std::span<const P> patterns, Rule rule) {
  MemoryMatrix<P> memory(dim, rule);
  for (const P& x : patterns) memory.absorb(x);
  return memory;
}

template <Pattern P>
MemoryMatrix<P> build_memory(std::uint32_t dim, std::span<const P> patterns,
                             std::span<const std::uint32_t> ids, Rule rule) {
  MemoryMatrix<P> memory(dim, rule);
  for (std::uint32_t id : ids) memory.absorb(patterns[id]);
  return memory;
}

namespace {

void check_query(std::uint32_t memory_dim, std::uint32_t query_dim) {
  if (memory_dim != query_dim) {
    throw ParameterError("query dimension " + std::to_string(query_dim) +
                         " differs from memory dimension " + std::to_string(memory_dim));
  }
}

}  // namespace

std::int64_t score(const MemoryMatrix<SparsePattern>& memory, const SparsePattern& query) {
  check_query(memory.dim(), query.dim());
  const auto cells = memory.cells();
  const auto active = query.active();
  std::int64_t total = 0;
  for (std::uint32_t l : active) {
    const std::int64_t* row = cells.data() + static_cast<std::size_t>(l) * memory.dim();
    for (std::uint32_t m : active) total += row[m];
  }
  return total;
}

std::int64_t score(const MemoryMatrix<DensePattern>& memory, const DensePattern& query) {
  check_query(memory.dim(), query.dim());
  const std::uint32_t d = memory.dim();
  const std::vector<int> signs = query.signs();
  const auto cells = memory.cells();
  std::int64_t total = 0;
  for (std::uint32_t l = 0; l < d; ++l) {
    const std::int64_t* row = cells.data() + static_cast<std::size_t>(l) * d;
    std::int64_t acc = 0;
    for (std::uint32_t m = 0; m < d; ++m) acc += signs[m] > 0 ? row[m] : -row[m];
    total += signs[l] > 0 ? acc : -acc;
  }
  return total;
}

double score(const MemoryMatrix<RealPattern>& memory, const RealPattern& query) {
  check_query(memory.dim(), query.dim());
  const std::uint32_t d = memory.dim();
  const auto x = query.values();
  const auto cells = memory.cells();
  std::vector<double> y(d, 0.0);
  for (std::uint32_t m = 0; m < d; ++m) {
    const double* row = cells.data() + static_cast<std::size_t>(m) * d;
    const double xm = x[m];
    for (std::uint32_t l = 0; l < d; ++l) y[l] += xm * row[l];
  }
  return dot(x, std::span<const double>(y));
}

std::int64_t quadratic_form_full(const MemoryMatrix<SparsePattern>& memory,
                                 const SparsePattern& query) {
  check_query(memory.dim(), query.dim());
  const std::uint32_t d = memory.dim();
  std::vector<std::int64_t> x(d, 0);
  for (std::uint32_t l : query.active()) x[l] = 1;
  std::int64_t total = 0;
  for (std::uint32_t l = 0; l < d; ++l) {
    for (std::uint32_t m = 0; m < d; ++m) total += x[l] * memory.at(l, m) * x[m];
  }
  return total;
}

template <Pattern P>
Value<P> score_oracle(std::span<const P> patterns, const P& query) {
  Value<P> total{};
  for (const P& x : patterns) {
    const Value<P> overlap = dot(query, x);
    total += overlap * overlap;
  }
  return total;
}

template <Pattern P>
Value<P> score_oracle(std::span<const P> patterns, std::span<const std::uint32_t> ids,
                      const P& query) {
  Value<P> total{};
  for (std::uint32_t id : ids) {
    const Value<P> overlap = dot(query, patterns[id]);
    total += overlap * overlap;
  }
  return total;
}

#define AMANN_INSTANTIATE(P)                                                              \
  template class MemoryMatrix<P>;                                                         \
  template MemoryMatrix<P> build_memory(std::uint32_t, std::span<const P>, Rule);         \
  template MemoryMatrix<P> build_memory(std::uint32_t, std::span<const P>,                \
                                        std::span<const std::uint32_t>, Rule);            \
  template Value<P> score_oracle(std::span<const P>, const P&);                           \
  template Value<P> score_oracle(std::span<const P>, std::span<const std::uint32_t>,      \
                                 const P&);

AMANN_INSTANTIATE(SparsePattern)
AMANN_INSTANTIATE(DensePattern)
AMANN_INSTANTIATE(RealPattern)

#undef AMANN_INSTANTIATE

}  // namespace amann

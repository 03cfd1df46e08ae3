#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "amann/pattern.hpp"

namespace amann {

/// How stored outer products are combined: summed, or OR-ed (cooccurrence).
enum class Rule : std::uint8_t { kSum = 0, kMax = 1 };

std::string_view to_string(Rule rule);
Rule parse_rule(std::string_view name);

/// d x d associative memory W accumulating outer products x x^T.
///
/// Cells are stored as a full row-major square (both triangles) so every
/// quadratic form is a straight scan. Cells are int64 for sparse and dense
/// patterns, which makes scores exact, and double for real patterns.
template <Pattern P>
class MemoryMatrix {
 public:
  using Cell = Value<P>;

  /// The max rule is only defined for sparse binary patterns.
  MemoryMatrix(std::uint32_t dim, Rule rule);

  /// Rebuilds a memory from serialized cells, checking every invariant.
  static MemoryMatrix from_cells(std::uint32_t dim, Rule rule, std::vector<Cell> cells,
                                 std::uint64_t stored_count);

  void absorb(const P& x);

  std::uint32_t dim() const { return dim_; }
  Rule rule() const { return rule_; }
  std::uint64_t stored_count() const { return stored_count_; }
  Cell at(std::uint32_t l, std::uint32_t m) const {
    return cells_[static_cast<std::size_t>(l) * dim_ + m];
  }
  std::span<const Cell> cells() const { return cells_; }

  friend bool operator==(const MemoryMatrix&, const MemoryMatrix&) = default;

 private:
  std::uint32_t dim_;
  Rule rule_;
  std::uint64_t stored_count_ = 0;
  std::vector<Cell> cells_;
};

template <>
void MemoryMatrix<SparsePattern>::absorb(const SparsePattern& x);
template <>
void MemoryMatrix<DensePattern>::absorb(const DensePattern& x);
template <>
void MemoryMatrix<RealPattern>::absorb(const RealPattern& x);

template <Pattern P>
MemoryMatrix<P> build_memory(std::uint32_t dim, std::span<const P> patterns, Rule rule);

/// Memory over the subset `ids` of `patterns`, absorbed in the given order.
template <Pattern P>
MemoryMatrix<P> build_memory(std::uint32_t dim, std::span<const P> patterns,
                             std::span<const std::uint32_t> ids, Rule rule);

/// Quadratic form x^T W x.
///
/// Sparse queries visit only the active x active block of W (cost c~^2).
/// Real queries accumulate y = W x row by row in increasing index order and
/// finish with the fixed-order dot of x and y.
std::int64_t score(const MemoryMatrix<SparsePattern>& memory, const SparsePattern& query);
std::int64_t score(const MemoryMatrix<DensePattern>& memory, const DensePattern& query);
double score(const MemoryMatrix<RealPattern>& memory, const RealPattern& query);

/// x^T W x over all d^2 cells with the query expanded to a 0/1 vector.
/// Reference for the sparse fast path.
std::int64_t quadratic_form_full(const MemoryMatrix<SparsePattern>& memory,
                                 const SparsePattern& query);

/// Sum over stored patterns of dot(query, x)^2, computed without a matrix.
/// Equals the sum-rule score.
template <Pattern P>
Value<P> score_oracle(std::span<const P> patterns, const P& query);

template <Pattern P>
Value<P> score_oracle(std::span<const P> patterns, std::span<const std::uint32_t> ids,
                      const P& query);

}  // namespace amann

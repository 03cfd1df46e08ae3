#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace amann {

enum class Variant : std::uint8_t { kSparse = 0, kDense = 1, kReal = 2 };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view name);

/// Binary {0,1}^d vector stored as its sorted support.
class SparsePattern {
 public:
  SparsePattern() = default;
  /// Validates that `active` is strictly increasing and below `dim`.
  SparsePattern(std::uint32_t dim, std::vector<std::uint32_t> active);

  std::uint32_t dim() const { return dim_; }
  std::span<const std::uint32_t> active() const { return active_; }
  std::size_t active_count() const { return active_.size(); }

  friend bool operator==(const SparsePattern&, const SparsePattern&) = default;

 private:
  std::uint32_t dim_ = 0;
  std::vector<std::uint32_t> active_;
};

/// {-1,+1}^d vector, one sign bit per coordinate (bit set means -1).
/// Bits past `dim` in the last word are always zero.
class DensePattern {
 public:
  DensePattern() = default;
  DensePattern(std::uint32_t dim, std::vector<std::uint64_t> words);
  /// Every entry must be exactly -1 or +1.
  static DensePattern from_signs(std::span<const int> signs);

  std::uint32_t dim() const { return dim_; }
  std::span<const std::uint64_t> words() const { return words_; }
  int sign(std::uint32_t l) const { return (words_[l >> 6] >> (l & 63)) & 1 ? -1 : 1; }
  void flip(std::uint32_t l) { words_[l >> 6] ^= std::uint64_t{1} << (l & 63); }
  std::vector<int> signs() const;

  static std::size_t word_count(std::uint32_t dim) { return (dim + 63) / 64; }

  friend bool operator==(const DensePattern&, const DensePattern&) = default;

 private:
  std::uint32_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Real vector with finite entries.
class RealPattern {
 public:
  RealPattern() = default;
  explicit RealPattern(std::vector<double> values);

  std::uint32_t dim() const { return static_cast<std::uint32_t>(values_.size()); }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const RealPattern&, const RealPattern&) = default;

 private:
  std::vector<double> values_;
};

/// Per-variant types: similarity/score scalar and memory cell scalar.
template <class P>
struct PatternTraits;

template <>
struct PatternTraits<SparsePattern> {
  using Value = std::int64_t;
  static constexpr Variant kVariant = Variant::kSparse;
};

template <>
struct PatternTraits<DensePattern> {
  using Value = std::int64_t;
  static constexpr Variant kVariant = Variant::kDense;
};

template <>
struct PatternTraits<RealPattern> {
  using Value = double;
  static constexpr Variant kVariant = Variant::kReal;
};

template <class P>
using Value = typename PatternTraits<P>::Value;

template <class P>
concept Pattern = requires { typename PatternTraits<P>::Value; };

std::int64_t dot(const SparsePattern& x, const SparsePattern& y);
std::int64_t dot(const DensePattern& x, const DensePattern& y);
double dot(const RealPattern& x, const RealPattern& y);

/// Real dot product with a fixed summation order: eight interleaved partial
/// sums over consecutive coordinates, folded pairwise at the end.
double dot(std::span<const double> x, std::span<const double> y);

/// Per-coordinate width used by the cost model: active count for sparse
/// vectors, dimension otherwise.
inline std::uint64_t cost_width(const SparsePattern& x) { return x.active_count(); }
inline std::uint64_t cost_width(const DensePattern& x) { return x.dim(); }
inline std::uint64_t cost_width(const RealPattern& x) { return x.dim(); }

}  // namespace amann

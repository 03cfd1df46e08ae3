#pragma once

#include <cstdint>
#include <vector>

#include "amann/pattern.hpp"
#include "amann/rng.hpp"

namespace amann {

struct GeneratorConfig {
  std::uint32_t dim = 0;
  /// Expected number of ones per sparse pattern (c); ignored for dense.
  double ones_mean = 0;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};

/// Draws i.i.d. Bernoulli(c/d) supports.
///
/// The support size is drawn from Binomial(d, c/d) by table inversion, then
/// the positions are a uniform subset of that size (Floyd's algorithm). This
/// has the same law as d independent coordinate draws but costs O(c) per
/// pattern. The table is built from IEEE arithmetic only, so it is the same
/// on every platform.
class SparseSampler {
 public:
  SparseSampler(std::uint32_t dim, double ones_mean);

  std::uint32_t dim() const { return dim_; }

  /// Writes a sorted support into `active` (cleared first).
  void draw(Rng& rng, std::vector<std::uint32_t>& active);
  SparsePattern draw(Rng& rng);
  /// Same draws as draw(), support left in draw order.
  void draw_unsorted(Rng& rng, std::vector<std::uint32_t>& active);

 private:
  std::uint32_t draw_count(Rng& rng) const;

  std::uint32_t dim_;
  std::vector<double> cdf_;
  std::vector<std::uint8_t> taken_;
};

/// Fills `words` (resized) with a uniform {-1,+1}^dim pattern.
void draw_dense_words(std::uint32_t dim, Rng& rng, std::vector<std::uint64_t>& words);

std::vector<SparsePattern> gen_sparse_patterns(const GeneratorConfig& cfg);
std::vector<DensePattern> gen_dense_patterns(const GeneratorConfig& cfg);

/// Number of flipped coordinates for overlap alpha: round((1-alpha)d/2), ties to even.
std::uint32_t corruption_flips(std::uint32_t dim, double alpha);
/// Number of kept ones for overlap alpha: round(alpha c), ties to even.
std::uint32_t corruption_kept(std::size_t active_count, double alpha);

/// Flips exactly corruption_flips(d, alpha) uniformly chosen coordinates.
/// Consumes no randomness when alpha == 1.
DensePattern corrupt_dense(const DensePattern& x, double alpha, Rng& rng);
DensePattern corrupt_dense(const DensePattern& x, double alpha, std::uint64_t seed);

/// Keeps round(alpha c) uniformly chosen ones and moves the others to
/// uniformly chosen previously inactive coordinates. Consumes no randomness
/// when every one is kept.
SparsePattern corrupt_sparse(const SparsePattern& x, double alpha, Rng& rng);
SparsePattern corrupt_sparse(const SparsePattern& x, double alpha, std::uint64_t seed);

}  // namespace amann

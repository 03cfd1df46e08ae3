#include "amann/pattern.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "amann/error.hpp"

namespace amann {

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kSparse: return "sparse";
    case Variant::kDense: return "dense";
    case Variant::kReal: return "real";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "sparse") return Variant::kSparse;
  if (name == "dense") return Variant::kDense;
  if (name == "real") return Variant::kReal;
  throw ParameterError("unknown pattern variant '" + std::string(name) + "'");
}

SparsePattern::SparsePattern(std::uint32_t dim, std::vector<std::uint32_t> active)
    : dim_(dim), active_(std::move(active)) {
  if (dim_ == 0) throw ParameterError("sparse pattern dimension must be positive");
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i] >= dim_) {
      throw ParameterError("active index " + std::to_string(active_[i]) +
                           " out of range for dimension " + std::to_string(dim_));
    }
    if (i > 0 && active_[i] <= active_[i - 1]) {
      throw ParameterError("active indices must be strictly increasing");
    }
  }
}

DensePattern::DensePattern(std::uint32_t dim, std::vector<std::uint64_t> words)
    : dim_(dim), words_(std::move(words)) {
  if (dim_ == 0) throw ParameterError("dense pattern dimension must be positive");
  if (words_.size() != word_count(dim_)) {
    throw ParameterError("dense pattern needs " + std::to_string(word_count(dim_)) +
                         " words, got " + std::to_string(words_.size()));
  }
  if (dim_ % 64 != 0 && (words_.back() >> (dim_ % 64)) != 0) {
    throw ParameterError("dense pattern has bits set past its dimension");
  }
}

DensePattern DensePattern::from_signs(std::span<const int> signs) {
  if (signs.empty()) throw ParameterError("dense pattern dimension must be positive");
  const auto dim = static_cast<std::uint32_t>(signs.size());
  std::vector<std::uint64_t> words(word_count(dim), 0);
  for (std::uint32_t l = 0; l < dim; ++l) {
    if (signs[l] == -1) {
      words[l >> 6] |= std::uint64_t{1} << (l & 63);
    } else if (signs[l] != 1) {
      throw ParameterError("dense entry " + std::to_string(l) + " is " +
                           std::to_string(signs[l]) + ", expected -1 or +1");
    }
  }
  return DensePattern(dim, std::move(words));
}

std::vector<int> DensePattern::signs() const {
  std::vector<int> out(dim_);
  for (std::uint32_t l = 0; l < dim_; ++l) out[l] = sign(l);
  return out;
}

RealPattern::RealPattern(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ParameterError("real pattern dimension must be positive");
  for (std::size_t l = 0; l < values_.size(); ++l) {
    if (!std::isfinite(values_[l])) {
      throw ParameterError("real pattern entry " + std::to_string(l) + " is not finite");
    }
  }
}

namespace {

void check_dims(std::uint32_t a, std::uint32_t b) {
  if (a != b) {
    throw ParameterError("dimension mismatch: " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

}  // namespace

std::int64_t dot(const SparsePattern& x, const SparsePattern& y) {
  check_dims(x.dim(), y.dim());
  auto a = x.active();
  auto b = y.active();
  std::int64_t shared = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return shared;
}

std::int64_t dot(const DensePattern& x, const DensePattern& y) {
  check_dims(x.dim(), y.dim());
  auto a = x.words();
  auto b = y.words();
  std::int64_t differing = 0;
  for (std::size_t w = 0; w < a.size(); ++w) differing += std::popcount(a[w] ^ b[w]);
  return static_cast<std::int64_t>(x.dim()) - 2 * differing;
}

double dot(std::span<const double> x, std::span<const double> y) {
  constexpr std::size_t kLanes = 8;
  double acc[kLanes] = {};
  const std::size_t n = x.size();
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) acc[j] += x[i + j] * y[i + j];
  }
  for (std::size_t i = body; i < n; ++i) acc[i - body] += x[i] * y[i];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

double dot(const RealPattern& x, const RealPattern& y) {
  check_dims(x.dim(), y.dim());
  return dot(x.values(), y.values());
}

}  // namespace amann

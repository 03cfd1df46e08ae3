#include "amann/generate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "amann/error.hpp"

namespace amann {

SparseSampler::SparseSampler(std::uint32_t dim, double ones_mean) : dim_(dim) {
  if (dim == 0) throw ParameterError("dimension must be positive");
  if (!(ones_mean > 0) || ones_mean > dim) {
    throw ParameterError("sparse generation needs 0 < c <= d (c=" +
                         std::to_string(ones_mean) + ", d=" + std::to_string(dim) + ")");
  }
  const double p = ones_mean / dim;
  std::vector<double> pmf(dim + 1, 0.0);
  if (p == 1.0) {
    pmf[dim] = 1.0;
  } else {
    // Binomial pmf by ratio recurrence out from the mode, then normalized.
    const auto mode = std::min<std::uint32_t>(
        dim, static_cast<std::uint32_t>(std::floor((dim + 1.0) * p)));
    const double odds = p / (1.0 - p);
    pmf[mode] = 1.0;
    for (std::uint32_t i = mode; i < dim; ++i) {
      pmf[i + 1] = pmf[i] * (static_cast<double>(dim - i) / (i + 1)) * odds;
    }
    for (std::uint32_t i = mode; i > 0; --i) {
      pmf[i - 1] = pmf[i] * (static_cast<double>(i) / (dim - i + 1)) / odds;
    }
  }
  double total = 0;
  for (double v : pmf) total += v;
  cdf_.resize(dim + 1);
  double running = 0;
  for (std::uint32_t i = 0; i <= dim; ++i) {
    running += pmf[i];
    cdf_[i] = running / total;
  }
  cdf_.back() = 1.0;
  taken_.assign(dim, 0);
}

std::uint32_t SparseSampler::draw_count(Rng& rng) const {
  const double u = rng.uniform();
  return static_cast<std::uint32_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) -
                                    cdf_.begin());
}

void SparseSampler::draw(Rng& rng, std::vector<std::uint32_t>& active) {
  draw_unsorted(rng, active);
  std::sort(active.begin(), active.end());
}

void SparseSampler::draw_unsorted(Rng& rng, std::vector<std::uint32_t>& active) {
  active.clear();
  const std::uint32_t count = draw_count(rng);
  for (std::uint32_t j = dim_ - count; j < dim_; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.below(j + 1));
    const std::uint32_t pick = taken_[t] ? j : t;
    taken_[pick] = 1;
    active.push_back(pick);
  }
  for (std::uint32_t idx : active) taken_[idx] = 0;
}

SparsePattern SparseSampler::draw(Rng& rng) {
  std::vector<std::uint32_t> active;
  draw(rng, active);
  return SparsePattern(dim_, std::move(active));
}

void draw_dense_words(std::uint32_t dim, Rng& rng, std::vector<std::uint64_t>& words) {
  words.resize(DensePattern::word_count(dim));
  for (auto& w : words) w = rng.next();
  if (dim % 64 != 0) words.back() &= (std::uint64_t{1} << (dim % 64)) - 1;
}

std::vector<SparsePattern> gen_sparse_patterns(const GeneratorConfig& cfg) {
  if (cfg.count == 0) throw ParameterError("pattern count must be at least 1");
  SparseSampler sampler(cfg.dim, cfg.ones_mean);
  Rng rng(cfg.seed);
  std::vector<SparsePattern> out;
  out.reserve(cfg.count);
  for (std::uint64_t i = 0; i < cfg.count; ++i) out.push_back(sampler.draw(rng));
  return out;
}

std::vector<DensePattern> gen_dense_patterns(const GeneratorConfig& cfg) {
  if (cfg.dim == 0) throw ParameterError("dimension must be positive");
  if (cfg.count == 0) throw ParameterError("pattern count must be at least 1");
  Rng rng(cfg.seed);
  std::vector<DensePattern> out;
  out.reserve(cfg.count);
  std::vector<std::uint64_t> words;
  for (std::uint64_t i = 0; i < cfg.count; ++i) {
    draw_dense_words(cfg.dim, rng, words);
    out.emplace_back(cfg.dim, words);
  }
  return out;
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("overlap alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

}  // namespace

std::uint32_t corruption_flips(std::uint32_t dim, double alpha) {
  check_alpha(alpha);
  return static_cast<std::uint32_t>(std::nearbyint((1.0 - alpha) * dim / 2.0));
}

std::uint32_t corruption_kept(std::size_t active_count, double alpha) {
  check_alpha(alpha);
  return static_cast<std::uint32_t>(std::nearbyint(alpha * static_cast<double>(active_count)));
}

DensePattern corrupt_dense(const DensePattern& x, double alpha, Rng& rng) {
  const std::uint32_t flips = corruption_flips(x.dim(), alpha);
  DensePattern out = x;
  for (std::uint32_t l : sample_without_replacement(x.dim(), flips, rng)) out.flip(l);
  return out;
}

DensePattern corrupt_dense(const DensePattern& x, double alpha, std::uint64_t seed) {
  Rng rng(seed);
  return corrupt_dense(x, alpha, rng);
}

SparsePattern corrupt_sparse(const SparsePattern& x, double alpha, Rng& rng) {
  const auto active = x.active();
  const auto ones = static_cast<std::uint32_t>(active.size());
  const std::uint32_t kept = corruption_kept(ones, alpha);
  if (kept == ones) return x;
  const std::uint32_t moved = ones - kept;
  const std::uint32_t inactive_count = x.dim() - ones;
  if (inactive_count < moved) {
    throw ParameterError("cannot relocate " + std::to_string(moved) + " ones: only " +
                         std::to_string(inactive_count) + " inactive coordinates");
  }
  std::vector<std::uint32_t> inactive;
  inactive.reserve(inactive_count);
  for (std::uint32_t l = 0, i = 0; l < x.dim(); ++l) {
    if (i < ones && active[i] == l) {
      ++i;
    } else {
      inactive.push_back(l);
    }
  }
  std::vector<std::uint32_t> result;
  result.reserve(ones);
  for (std::uint32_t pos : sample_without_replacement(ones, kept, rng)) {
    result.push_back(active[pos]);
  }
  for (std::uint32_t pos : sample_without_replacement(inactive_count, moved, rng)) {
    result.push_back(inactive[pos]);
  }
  std::sort(result.begin(), result.end());
  return SparsePattern(x.dim(), std::move(result));
}

SparsePattern corrupt_sparse(const SparsePattern& x, double alpha, std::uint64_t seed) {
  Rng rng(seed);
  return corrupt_sparse(x, alpha, rng);
}

}  // namespace amann

#include "amann/montecarlo.hpp"

#include <bit>
#include <exception>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "amann/error.hpp"
#include "amann/generate.hpp"
#include "amann/rng.hpp"

namespace amann {

void validate_trial_point(const TrialPoint& point) {
  if (point.variant == Variant::kReal) {
    throw ParameterError("synthetic experiments support sparse and dense patterns only");
  }
  if (point.dim == 0) throw ParameterError("dimension must be positive");
  if (point.k == 0) throw ParameterError("class size k must be at least 1");
  if (point.q == 0) throw ParameterError("class count q must be at least 1");
  if (point.k > std::numeric_limits<std::uint64_t>::max() / point.q) {
    throw ParameterError("k * q overflows");
  }
  if (!(point.alpha > 0.0 && point.alpha <= 1.0)) {
    throw ParameterError("overlap alpha must lie in (0, 1], got " + std::to_string(point.alpha));
  }
  if (point.variant == Variant::kSparse) {
    if (!(point.ones_mean > 0) || point.ones_mean > point.dim) {
      throw ParameterError("sparse generation needs 0 < c <= d");
    }
  } else if (point.rule == Rule::kMax) {
    throw ParameterError("unsupported rule: max needs sparse patterns");
  }
}

namespace {

// Runs body(t) for t in [0, trials) on all threads and counts true results.
// The first exception thrown by any trial is rethrown after the loop. When
// `flags` is given, flags[t] receives the outcome of trial t.
template <class MakeState, class Body>
ErrorTally count_parallel(std::uint64_t trials, MakeState make_state, Body body,
                          std::uint8_t* flags = nullptr) {
  std::uint64_t errors = 0;
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel reduction(+ : errors)
  {
    auto state = make_state();
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t t = 0; t < count; ++t) {
      try {
        const bool lost = body(state, static_cast<std::uint64_t>(t));
        if (lost) ++errors;
        if (flags) flags[t] = lost;
      } catch (...) {
#pragma omp critical(amann_trial_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return {trials, errors};
}

SparsePattern make_sparse_query(const SparsePattern& host, double alpha, Rng& rng) {
  return alpha < 1.0 ? corrupt_sparse(host, alpha, rng) : host;
}

DensePattern make_dense_query(const DensePattern& host, double alpha, Rng& rng) {
  return alpha < 1.0 ? corrupt_dense(host, alpha, rng) : host;
}

// Streaming state for sparse trials: the query's coordinates are mapped to
// local positions 0..m-1 and only those are tracked.
struct SparseStream {
  explicit SparseStream(const TrialPoint& point)
      : sampler(point.dim, point.ones_mean), where(point.dim, -1), scores(point.q) {}

  SparseSampler sampler;
  std::vector<std::uint32_t> buffer;
  std::vector<std::uint32_t> local;
  std::vector<std::int32_t> where;
  std::vector<std::uint8_t> cover;
  std::vector<std::int64_t> scores;
};

class SparseAccumulator {
 public:
  SparseAccumulator(SparseStream& s, Rule rule, std::size_t m) : s_(s), rule_(rule), m_(m) {
    if (rule_ == Rule::kMax) s_.cover.assign(m * m, 0);
  }

  void absorb(std::span<const std::uint32_t> active) {
    s_.local.clear();
    for (std::uint32_t idx : active) {
      if (s_.where[idx] >= 0) s_.local.push_back(static_cast<std::uint32_t>(s_.where[idx]));
    }
    const auto t = static_cast<std::int64_t>(s_.local.size());
    if (rule_ == Rule::kSum) {
      value_ += t * t;
      return;
    }
    for (std::uint32_t a : s_.local) {
      for (std::uint32_t b : s_.local) {
        std::uint8_t& cell = s_.cover[a * m_ + b];
        if (!cell) {
          cell = 1;
          ++value_;
        }
      }
    }
  }

  std::int64_t value() const { return value_; }

 private:
  SparseStream& s_;
  Rule rule_;
  std::size_t m_;
  std::int64_t value_ = 0;
};

bool sparse_stream_trial(const TrialPoint& point, SparseStream& s, std::uint64_t seed) {
  Rng rng(seed);
  const auto host = static_cast<std::uint32_t>(rng.below(point.q));
  const SparsePattern host_pattern = s.sampler.draw(rng);
  const SparsePattern query = make_sparse_query(host_pattern, point.alpha, rng);
  const auto qa = query.active();
  for (std::uint32_t i = 0; i < qa.size(); ++i) s.where[qa[i]] = static_cast<std::int32_t>(i);
  for (std::uint32_t c = 0; c < point.q; ++c) {
    SparseAccumulator acc(s, point.rule, qa.size());
    std::uint64_t draws = point.k;
    if (c == host) {
      acc.absorb(host_pattern.active());
      --draws;
    }
    for (std::uint64_t j = 0; j < draws; ++j) {
      s.sampler.draw_unsorted(rng, s.buffer);
      acc.absorb(s.buffer);
    }
    s.scores[c] = acc.value();
  }
  for (std::uint32_t idx : qa) s.where[idx] = -1;
  return host_loses(std::span<const std::int64_t>(s.scores), host);
}

struct DenseStream {
  explicit DenseStream(const TrialPoint& point) : scores(point.q) {}

  std::vector<std::uint64_t> buffer;
  std::vector<std::int64_t> scores;
};

std::int64_t dense_dot_words(std::uint32_t dim, std::span<const std::uint64_t> a,
                             std::span<const std::uint64_t> b) {
  std::int64_t differ = 0;
  for (std::size_t w = 0; w < a.size(); ++w) differ += std::popcount(a[w] ^ b[w]);
  return static_cast<std::int64_t>(dim) - 2 * differ;
}

bool dense_stream_trial(const TrialPoint& point, DenseStream& s, std::uint64_t seed) {
  Rng rng(seed);
  const auto host = static_cast<std::uint32_t>(rng.below(point.q));
  draw_dense_words(point.dim, rng, s.buffer);
  const DensePattern host_pattern(point.dim, s.buffer);
  const DensePattern query = make_dense_query(host_pattern, point.alpha, rng);
  const auto qw = query.words();
  for (std::uint32_t c = 0; c < point.q; ++c) {
    std::int64_t acc = 0;
    std::uint64_t draws = point.k;
    if (c == host) {
      const std::int64_t t = dense_dot_words(point.dim, qw, host_pattern.words());
      acc += t * t;
      --draws;
    }
    for (std::uint64_t j = 0; j < draws; ++j) {
      draw_dense_words(point.dim, rng, s.buffer);
      const std::int64_t t = dense_dot_words(point.dim, qw, s.buffer);
      acc += t * t;
    }
    s.scores[c] = acc;
  }
  return host_loses(std::span<const std::int64_t>(s.scores), host);
}

bool sparse_materialized_trial(const TrialPoint& point, SparseSampler& sampler,
                               std::uint64_t seed) {
  Rng rng(seed);
  const auto host = static_cast<std::uint32_t>(rng.below(point.q));
  const SparsePattern host_pattern = sampler.draw(rng);
  const SparsePattern query = make_sparse_query(host_pattern, point.alpha, rng);
  std::vector<std::int64_t> scores(point.q);
  for (std::uint32_t c = 0; c < point.q; ++c) {
    std::vector<SparsePattern> members;
    if (c == host) members.push_back(host_pattern);
    while (members.size() < point.k) members.push_back(sampler.draw(rng));
    const auto memory = build_memory(point.dim, std::span<const SparsePattern>(members), point.rule);
    scores[c] = score(memory, query);
  }
  return host_loses(std::span<const std::int64_t>(scores), host);
}

bool dense_materialized_trial(const TrialPoint& point, std::uint64_t seed) {
  Rng rng(seed);
  const auto host = static_cast<std::uint32_t>(rng.below(point.q));
  std::vector<std::uint64_t> words;
  draw_dense_words(point.dim, rng, words);
  const DensePattern host_pattern(point.dim, words);
  const DensePattern query = make_dense_query(host_pattern, point.alpha, rng);
  std::vector<std::int64_t> scores(point.q);
  for (std::uint32_t c = 0; c < point.q; ++c) {
    std::vector<DensePattern> members;
    if (c == host) members.push_back(host_pattern);
    while (members.size() < point.k) {
      draw_dense_words(point.dim, rng, words);
      members.emplace_back(point.dim, words);
    }
    const auto memory = build_memory(point.dim, std::span<const DensePattern>(members), point.rule);
    scores[c] = score(memory, query);
  }
  return host_loses(std::span<const std::int64_t>(scores), host);
}

}  // namespace

namespace serial {

ErrorTally error_trials(const TrialPoint& point, std::uint64_t trials, std::uint64_t seed) {
  validate_trial_point(point);
  ErrorTally tally{trials, 0};
  if (point.variant == Variant::kSparse) {
    SparseSampler sampler(point.dim, point.ones_mean);
    for (std::uint64_t t = 0; t < trials; ++t) {
      tally.errors += sparse_materialized_trial(point, sampler, derive_seed(seed, t));
    }
  } else {
    for (std::uint64_t t = 0; t < trials; ++t) {
      tally.errors += dense_materialized_trial(point, derive_seed(seed, t));
    }
  }
  return tally;
}

}  // namespace serial

namespace parallel {

namespace {

ErrorTally stream_trials(const TrialPoint& point, std::uint64_t trials, std::uint64_t seed,
                         std::uint8_t* flags) {
  validate_trial_point(point);
  if (point.variant == Variant::kSparse) {
    return count_parallel(
        trials, [&] { return SparseStream(point); },
        [&](SparseStream& s, std::uint64_t t) {
          return sparse_stream_trial(point, s, derive_seed(seed, t));
        },
        flags);
  }
  return count_parallel(
      trials, [&] { return DenseStream(point); },
      [&](DenseStream& s, std::uint64_t t) {
        return dense_stream_trial(point, s, derive_seed(seed, t));
      },
      flags);
}

}  // namespace

ErrorTally error_trials(const TrialPoint& point, std::uint64_t trials, std::uint64_t seed) {
  return stream_trials(point, trials, seed, nullptr);
}

std::vector<std::uint8_t> trial_outcomes(const TrialPoint& point, std::uint64_t trials,
                                         std::uint64_t seed) {
  std::vector<std::uint8_t> flags(trials, 0);
  stream_trials(point, trials, seed, flags.data());
  return flags;
}

}  // namespace parallel

namespace {

template <Pattern P>
ErrorTally reused_trials(const TrialPoint& point, std::span<const P> database,
                         std::uint64_t trials, std::uint64_t seed) {
  std::vector<MemoryMatrix<P>> memories;
  memories.reserve(point.q);
  for (std::uint32_t c = 0; c < point.q; ++c) {
    memories.push_back(
        build_memory(point.dim, database.subspan(c * point.k, point.k), point.rule));
  }
  return count_parallel(
      trials, [] { return 0; },
      [&](int&, std::uint64_t t) {
        Rng rng(derive_seed(seed, t));
        const auto host = static_cast<std::uint32_t>(rng.below(point.q));
        const std::uint64_t member = rng.below(point.k);
        const P& source = database[host * point.k + member];
        P query;
        if constexpr (std::is_same_v<P, SparsePattern>) {
          query = make_sparse_query(source, point.alpha, rng);
        } else {
          query = make_dense_query(source, point.alpha, rng);
        }
        std::vector<Value<P>> scores(point.q);
        for (std::uint32_t c = 0; c < point.q; ++c) scores[c] = score(memories[c], query);
        return host_loses(std::span<const Value<P>>(scores), host);
      });
}

}  // namespace

ErrorTally error_trials_reused(const TrialPoint& point, std::uint64_t trials,
                               std::uint64_t seed) {
  validate_trial_point(point);
  GeneratorConfig cfg{point.dim, point.ones_mean, point.k * point.q,
                      derive_seed(seed, std::numeric_limits<std::uint64_t>::max())};
  if (point.variant == Variant::kSparse) {
    const auto db = gen_sparse_patterns(cfg);
    return reused_trials(point, std::span<const SparsePattern>(db), trials, seed);
  }
  const auto db = gen_dense_patterns(cfg);
  return reused_trials(point, std::span<const DensePattern>(db), trials, seed);
}

}  // namespace amann

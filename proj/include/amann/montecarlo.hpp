#pragma once

// Monte-Carlo estimate of the class-identification error rate on synthetic
// data.
//
// One trial: pick the host class uniformly, draw the host pattern, derive
// the query from it (corrupted when alpha < 1), then draw the remaining
// patterns class by class: k per class, k - 1 besides the host pattern in
// the host class. The trial is an error when some other class scores
// higher than the host class, or equal with a lower class id.
//
// Patterns are i.i.d., so drawing them class by class has the same law as
// drawing n patterns and splitting them by a uniform random partition.
//
// Trial t uses Rng(derive_seed(seed, t)) and consumes draws in the order
// above, so counts do not depend on how trials are scheduled.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "amann/memory.hpp"
#include "amann/pattern.hpp"

namespace amann {

struct TrialPoint {
  Variant variant = Variant::kSparse;
  std::uint32_t dim = 0;
  /// c, sparse only.
  double ones_mean = 0;
  std::uint64_t k = 0;
  std::uint32_t q = 0;
  /// Query overlap with its source pattern; 1 queries with the pattern itself.
  double alpha = 1.0;
  Rule rule = Rule::kSum;
};

/// Throws ParameterError unless the point describes a runnable experiment.
void validate_trial_point(const TrialPoint& point);

struct ErrorTally {
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;

  double rate() const { return trials ? static_cast<double>(errors) / trials : 0.0; }
  /// Binomial standard error sqrt(y (1 - y) / trials).
  double standard_error() const {
    const double y = rate();
    return trials ? std::sqrt(y * (1.0 - y) / trials) : 0.0;
  }

  friend bool operator==(const ErrorTally&, const ErrorTally&) = default;
};

/// True when the host class loses: another class scores strictly higher, or
/// ties with a lower id.
template <class V>
constexpr bool host_loses(std::span<const V> scores, std::uint32_t host) {
  for (std::uint32_t c = 0; c < scores.size(); ++c) {
    if (c == host) continue;
    if (scores[c] > scores[host] || (scores[c] == scores[host] && c < host)) return true;
  }
  return false;
}

namespace serial {

/// Reference route: materializes every pattern and every class memory, then
/// scores with score(). Slow; used to check the streaming route.
ErrorTally error_trials(const TrialPoint& point, std::uint64_t trials, std::uint64_t seed);

}  // namespace serial

namespace parallel {

/// Streaming route, OpenMP-parallel over trials. Nothing but the query's
/// projection of each memory is kept: sum-rule scores accumulate
/// dot(query, x)^2 per pattern, max-rule scores track which pairs of query
/// coordinates some stored pattern covers. Counts equal serial::error_trials.
ErrorTally error_trials(const TrialPoint& point, std::uint64_t trials, std::uint64_t seed);

/// Per-trial outcomes of error_trials: element t is 1 when trial t errs.
std::vector<std::uint8_t> trial_outcomes(const TrialPoint& point, std::uint64_t trials,
                                         std::uint64_t seed);

}  // namespace parallel

/// Faster, non-independent variant: one database of n = kq patterns
/// (drawn from derive_seed(seed, 2^64 - 1), classes in consecutive blocks)
/// is built once; trial t draws the host class, a member of it, and the
/// corruption from derive_seed(seed, t).
ErrorTally error_trials_reused(const TrialPoint& point, std::uint64_t trials,
                               std::uint64_t seed);

}  // namespace amann

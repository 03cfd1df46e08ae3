#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "amann/error.hpp"
#include "amann/generate.hpp"
#include "amann/memory.hpp"
#include "amann/kernels.hpp"
#include "amann/montecarlo.hpp"

using namespace amann;

TEST_CASE("host_loses tie rule") {
  const std::vector<std::int64_t> s{3, 5, 5, 1};
  CHECK(host_loses(std::span<const std::int64_t>(s), 0));
  CHECK_FALSE(host_loses(std::span<const std::int64_t>(s), 1));
  CHECK(host_loses(std::span<const std::int64_t>(s), 2));
  const std::vector<std::int64_t> one{7};
  CHECK_FALSE(host_loses(std::span<const std::int64_t>(one), 0));
}

TEST_CASE("validate_trial_point") {
  CHECK_NOTHROW(validate_trial_point({Variant::kSparse, 64, 4, 10, 3}));
  CHECK_THROWS_AS(validate_trial_point({Variant::kReal, 64, 4, 10, 3}), ParameterError);
  CHECK_THROWS_AS(validate_trial_point({Variant::kSparse, 64, 0, 10, 3}), ParameterError);
  CHECK_THROWS_AS(validate_trial_point({Variant::kSparse, 64, 65, 10, 3}), ParameterError);
  CHECK_THROWS_AS(validate_trial_point({Variant::kDense, 64, 0, 0, 3}), ParameterError);
  CHECK_THROWS_AS(validate_trial_point({Variant::kDense, 64, 0, 10, 0}), ParameterError);
  CHECK_THROWS_AS(validate_trial_point({Variant::kDense, 64, 0, 10, 3, 0.0}), ParameterError);
  CHECK_THROWS_AS(validate_trial_point({Variant::kDense, 64, 0, 10, 3, 1.0, Rule::kMax}),
                  ParameterError);
  CHECK_THROWS_AS(validate_trial_point({Variant::kDense, 64, 0, 1ull << 40, 1u << 30}), ParameterError);
}

TEST_CASE("ErrorTally rate and standard error") {
  const ErrorTally t{400, 100};
  CHECK(t.rate() == 0.25);
  CHECK(t.standard_error() == doctest::Approx(std::sqrt(0.25 * 0.75 / 400)).epsilon(1e-15));
  CHECK(ErrorTally{}.rate() == 0.0);
}

TEST_CASE("one class never errs") {
  CHECK(parallel::error_trials({Variant::kSparse, 32, 3, 50, 1}, 200, 1).errors == 0);
  CHECK(parallel::error_trials({Variant::kDense, 16, 0, 50, 1}, 200, 1).errors == 0);
  CHECK(serial::error_trials({Variant::kDense, 16, 0, 5, 1}, 20, 1).errors == 0);
}

TEST_CASE("streaming and materialized routes give identical counts") {
  const std::vector<TrialPoint> points{
      {Variant::kSparse, 32, 4, 30, 5},
      {Variant::kSparse, 32, 4, 30, 5, 0.5},
      {Variant::kSparse, 24, 3, 20, 4, 1.0, Rule::kMax},
      {Variant::kSparse, 24, 3, 20, 4, 0.7, Rule::kMax},
      {Variant::kDense, 16, 0, 20, 5},
      {Variant::kDense, 16, 0, 20, 5, 0.8},
      {Variant::kDense, 70, 0, 60, 3, 0.6},
  };
  for (const auto& pt : points) {
    const auto a = serial::error_trials(pt, 60, 11);
    const auto b = parallel::error_trials(pt, 60, 11);
    CHECK(a == b);
    CHECK(a.trials == 60);
    const auto flags = parallel::trial_outcomes(pt, 60, 11);
    CHECK(std::count(flags.begin(), flags.end(), 1) == static_cast<long>(a.errors));
  }
}

TEST_CASE("counts do not depend on the thread count") {
  const TrialPoint pt{Variant::kSparse, 64, 6, 100, 8};
  set_thread_count(1);
  const auto one = parallel::error_trials(pt, 300, 5);
  set_thread_count(3);
  const auto three = parallel::error_trials(pt, 300, 5);
  set_thread_count(0);
  CHECK(one == three);
}

TEST_CASE("corruption that changes nothing leaves counts unchanged") {
  // Dense d=64, alpha=0.99: round(0.32) = 0 flips. Sparse c~ <= 16,
  // alpha=0.97: every one is kept. Both consume no extra draws.
  const TrialPoint dense{Variant::kDense, 64, 0, 80, 6};
  TrialPoint dense_c = dense;
  dense_c.alpha = 0.99;
  CHECK(parallel::error_trials(dense, 200, 3) == parallel::error_trials(dense_c, 200, 3));
  const TrialPoint sparse{Variant::kSparse, 64, 6, 80, 6};
  TrialPoint sparse_c = sparse;
  sparse_c.alpha = 0.97;
  CHECK(parallel::error_trials(sparse, 200, 3) == parallel::error_trials(sparse_c, 200, 3));
}

TEST_CASE("error rate rises when the classes get larger") {
  const auto small = parallel::error_trials({Variant::kSparse, 64, 6, 16, 10}, 2000, 9);
  const auto large = parallel::error_trials({Variant::kSparse, 64, 6, 512, 10}, 2000, 9);
  CHECK(large.rate() - small.rate() >
        3 * std::hypot(small.standard_error(), large.standard_error()));
}

TEST_CASE("reused-database trials are deterministic and bounded") {
  const TrialPoint pt{Variant::kDense, 32, 0, 40, 4};
  const auto a = error_trials_reused(pt, 300, 2);
  CHECK(a == error_trials_reused(pt, 300, 2));
  CHECK(a.errors <= a.trials);
  CHECK(error_trials_reused({Variant::kSparse, 32, 4, 40, 1}, 100, 2).errors == 0);
}

TEST_CASE("trials rebuilt by hand in the documented draw order give the same count") {
  const TrialPoint pt{Variant::kDense, 12, 0, 3, 3};
  const std::uint64_t seed = 99;
  const std::uint64_t trials = 200;
  const auto flags = parallel::trial_outcomes(pt, trials, seed);
  REQUIRE(flags.size() == trials);
  std::uint64_t errors = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    const auto host = static_cast<std::uint32_t>(rng.below(pt.q));
    std::vector<std::uint64_t> words;
    draw_dense_words(pt.dim, rng, words);
    const DensePattern hp(pt.dim, words);
    std::vector<std::int64_t> scores;
    for (std::uint32_t c = 0; c < pt.q; ++c) {
      std::vector<DensePattern> members;
      if (c == host) members.push_back(hp);
      while (members.size() < pt.k) {
        draw_dense_words(pt.dim, rng, words);
        members.emplace_back(pt.dim, words);
      }
      scores.push_back(score_oracle(std::span<const DensePattern>(members), hp));
    }
    const bool lost = host_loses(std::span<const std::int64_t>(scores), host);
    CHECK(flags[t] == lost);
    errors += lost;
  }
  CHECK(parallel::error_trials(pt, trials, seed).errors == errors);
  CHECK(errors > 0);
}

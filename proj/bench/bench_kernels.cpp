// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <numeric>

#include "amann/generate.hpp"
#include "amann/index.hpp"
#include "amann/kernels.hpp"
#include "amann/montecarlo.hpp"

namespace {

using namespace amann;

struct DenseFixture {
  std::vector<DensePattern> base = gen_dense_patterns({128, 0, 20000, 1});
  std::vector<DensePattern> queries = gen_dense_patterns({128, 0, 64, 2});
  PartitionedIndex<DensePattern> index =
      build_index(std::span<const DensePattern>(base), allocate_random(20000, 64, 3), Rule::kSum);
};

struct SparseFixture {
  std::vector<SparsePattern> base = gen_sparse_patterns({1024, 10.0, 20000, 1});
  std::vector<SparsePattern> queries = gen_sparse_patterns({1024, 10.0, 64, 2});
};

const DenseFixture& dense() {
  static const DenseFixture f;
  return f;
}

const SparseFixture& sparse() {
  static const SparseFixture f;
  return f;
}

template <bool Parallel>
void BM_ClassScoresDense(benchmark::State& state) {
  const auto& f = dense();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& x = f.queries[i++ % f.queries.size()];
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(parallel::class_scores(f.index.memories(), x));
    } else {
      benchmark::DoNotOptimize(serial::class_scores(f.index.memories(), x));
    }
  }
}

template <bool Parallel, class Fixture>
void scan_all_bench(benchmark::State& state, const Fixture& f) {
  using P = typename decltype(f.base)::value_type;
  const std::span<const P> all(f.base);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& x = f.queries[i++ % f.queries.size()];
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(parallel::scan_all(all, x));
    } else {
      benchmark::DoNotOptimize(serial::scan_all(all, x));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.base.size()));
}

template <bool Parallel>
void BM_ScanAllDense(benchmark::State& state) {
  scan_all_bench<Parallel>(state, dense());
}

template <bool Parallel>
void BM_ScanAllSparse(benchmark::State& state) {
  scan_all_bench<Parallel>(state, sparse());
}

template <bool Parallel>
void BM_NearestForEachDense(benchmark::State& state) {
  const auto& f = dense();
  const std::span<const DensePattern> base(f.base), qs(f.queries);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(parallel::nearest_for_each(base, qs));
    } else {
      benchmark::DoNotOptimize(serial::nearest_for_each(base, qs));
    }
  }
}

template <bool Parallel>
void BM_NearestAnchorDense(benchmark::State& state) {
  const auto& f = dense();
  const std::span<const DensePattern> base(f.base);
  std::vector<std::uint32_t> members(f.base.size());
  std::iota(members.begin(), members.end(), 0u);
  std::vector<std::uint32_t> anchors(256);
  for (std::uint32_t a = 0; a < anchors.size(); ++a) anchors[a] = a * 73;
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(parallel::nearest_anchor(base, members, anchors));
    } else {
      benchmark::DoNotOptimize(serial::nearest_anchor(base, members, anchors));
    }
  }
}

template <bool Parallel>
void BM_ErrorTrials(benchmark::State& state) {
  const TrialPoint point{Variant::kSparse, 128, 8, 256, 10};
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(parallel::error_trials(point, 64, 1));
    } else {
      benchmark::DoNotOptimize(serial::error_trials(point, 64, 1));
    }
  }
  state.SetItemsProcessed(state.iterations() * 64);
}

}  // namespace

BENCHMARK(BM_ClassScoresDense<false>)->Name("class_scores/dense/serial");
BENCHMARK(BM_ClassScoresDense<true>)->Name("class_scores/dense/parallel");
BENCHMARK(BM_ScanAllDense<false>)->Name("scan_all/dense/serial");
BENCHMARK(BM_ScanAllDense<true>)->Name("scan_all/dense/parallel");
BENCHMARK(BM_ScanAllSparse<false>)->Name("scan_all/sparse/serial");
BENCHMARK(BM_ScanAllSparse<true>)->Name("scan_all/sparse/parallel");
BENCHMARK(BM_NearestForEachDense<false>)->Name("nearest_for_each/dense/serial");
BENCHMARK(BM_NearestForEachDense<true>)->Name("nearest_for_each/dense/parallel");
BENCHMARK(BM_NearestAnchorDense<false>)->Name("nearest_anchor/dense/serial");
BENCHMARK(BM_NearestAnchorDense<true>)->Name("nearest_anchor/dense/parallel");
BENCHMARK(BM_ErrorTrials<false>)->Name("error_trials/sparse/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErrorTrials<true>)->Name("error_trials/sparse/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "amann/memory.hpp"
#include "amann/montecarlo.hpp"
#include "amann/pattern.hpp"

namespace amann {

enum class SweepKind {
  kK,       // every (q, k) pair, x = k
  kQ,       // every (k, q) pair, x = q
  kFixedN,  // q = n / k for each k, x = k
  kD,       // k = floor(d^a) or floor(d^a / 10) for each (a, d), x = d
};

std::string_view to_string(SweepKind kind);
SweepKind parse_sweep(std::string_view name);

struct ExperimentConfig {
  SweepKind sweep = SweepKind::kK;
  Variant variant = Variant::kSparse;
  std::uint32_t dim = 0;
  /// c for sparse data. For the d sweep, 0 selects c = ceil(log2 d).
  double ones_mean = 0;
  std::vector<std::uint64_t> k_values;
  std::vector<std::uint32_t> q_values;
  /// Fixed-n sweep only.
  std::uint64_t n = 0;
  /// d sweep only.
  std::vector<std::uint32_t> d_values;
  std::vector<double> exponents;
  bool k_over_ten = false;

  double alpha = 1.0;
  Rule rule = Rule::kSum;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  bool reuse_database = false;
};

struct GridPoint {
  double x = 0;
  /// Exponent a of the d sweep, 0 elsewhere.
  double exponent = 0;
  TrialPoint point;
};

struct CurvePoint {
  GridPoint grid;
  double y = 0;
  double std_error = 0;
  std::uint64_t op_count = 0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
};

/// ceil(log2 d), at least 1.
std::uint32_t log2_ones(std::uint32_t dim);

/// floor(d^a), or floor(d^a / 10); values within 1e-9 relative of an
/// integer are taken as that integer. At least 1.
std::uint64_t scaled_class_size(std::uint32_t dim, double exponent, bool over_ten);

/// Expands and validates the grid of a configuration, in output order.
std::vector<GridPoint> sweep_points(const ExperimentConfig& cfg);

/// Filtered-search cost with one probed class of size k:
/// w^2 q + w k, w = d (dense) or round(c) (sparse).
std::uint64_t synthetic_op_count(const TrialPoint& point);

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Error rate for every grid point. Grid point i runs its trials from
/// derive_seed(cfg.seed, i).
std::vector<CurvePoint> run_error_rate(const ExperimentConfig& cfg, const Progress& progress = {});

}  // namespace amann

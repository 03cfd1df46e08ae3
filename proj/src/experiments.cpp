#include "amann/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "amann/error.hpp"
#include "amann/rng.hpp"

namespace amann {

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::kK: return "k";
    case SweepKind::kQ: return "q";
    case SweepKind::kFixedN: return "fixed-n";
    case SweepKind::kD: return "d";
  }
  return "?";
}

SweepKind parse_sweep(std::string_view name) {
  if (name == "k") return SweepKind::kK;
  if (name == "q") return SweepKind::kQ;
  if (name == "fixed-n" || name == "fixed_n") return SweepKind::kFixedN;
  if (name == "d") return SweepKind::kD;
  throw ParameterError("unknown sweep '" + std::string(name) + "'");
}

std::uint32_t log2_ones(std::uint32_t dim) {
  if (dim == 0) throw ParameterError("dimension must be positive");
  return std::max<std::uint32_t>(1, std::bit_width(dim - 1));
}

std::uint64_t scaled_class_size(std::uint32_t dim, double exponent, bool over_ten) {
  if (dim == 0 || !(exponent > 0)) throw ParameterError("d sweep needs d > 0 and a > 0");
  double v = std::pow(static_cast<double>(dim), exponent);
  if (over_ten) v /= 10.0;
  const double r = std::nearbyint(v);
  const double k = std::fabs(v - r) <= 1e-9 * v ? r : std::floor(v);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
}

std::uint64_t synthetic_op_count(const TrialPoint& point) {
  const std::uint64_t w = point.variant == Variant::kSparse
                              ? static_cast<std::uint64_t>(std::llround(point.ones_mean))
                              : point.dim;
  return w * w * point.q + w * point.k;
}

std::vector<GridPoint> sweep_points(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw ParameterError("trials must be at least 1");
  TrialPoint base{cfg.variant, cfg.dim, cfg.ones_mean, 0, 0, cfg.alpha, cfg.rule};
  std::vector<GridPoint> out;
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
  };
  switch (cfg.sweep) {
    case SweepKind::kK:
      need(!cfg.k_values.empty() && !cfg.q_values.empty(), "k sweep needs k and q values");
      for (std::uint32_t q : cfg.q_values) {
        for (std::uint64_t k : cfg.k_values) {
          TrialPoint p = base;
          p.k = k;
          p.q = q;
          out.push_back({static_cast<double>(k), 0, p});
        }
      }
      break;
    case SweepKind::kQ:
      need(!cfg.k_values.empty() && !cfg.q_values.empty(), "q sweep needs k and q values");
      for (std::uint64_t k : cfg.k_values) {
        for (std::uint32_t q : cfg.q_values) {
          TrialPoint p = base;
          p.k = k;
          p.q = q;
          out.push_back({static_cast<double>(q), 0, p});
        }
      }
      break;
    case SweepKind::kFixedN:
      need(cfg.n > 0 && !cfg.k_values.empty(), "fixed-n sweep needs n and k values");
      for (std::uint64_t k : cfg.k_values) {
        if (k == 0 || cfg.n % k != 0) {
          throw ParameterError("k=" + std::to_string(k) + " does not divide n=" +
                               std::to_string(cfg.n));
        }
        TrialPoint p = base;
        p.k = k;
        p.q = static_cast<std::uint32_t>(cfg.n / k);
        out.push_back({static_cast<double>(k), 0, p});
      }
      break;
    case SweepKind::kD: {
      need(!cfg.d_values.empty() && !cfg.exponents.empty(), "d sweep needs d values and exponents");
      const std::uint32_t q = cfg.q_values.empty() ? 2 : cfg.q_values.front();
      for (double a : cfg.exponents) {
        for (std::uint32_t d : cfg.d_values) {
          TrialPoint p = base;
          p.dim = d;
          p.q = q;
          p.k = scaled_class_size(d, a, cfg.k_over_ten);
          if (cfg.variant == Variant::kSparse && !(cfg.ones_mean > 0)) p.ones_mean = log2_ones(d);
          out.push_back({static_cast<double>(d), a, p});
        }
      }
      break;
    }
  }
  for (const auto& g : out) validate_trial_point(g.point);
  return out;
}

std::vector<CurvePoint> run_error_rate(const ExperimentConfig& cfg, const Progress& progress) {
  const auto grid = sweep_points(cfg);
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::uint64_t seed = derive_seed(cfg.seed, i);
    const ErrorTally tally = cfg.reuse_database
                                 ? error_trials_reused(grid[i].point, cfg.trials, seed)
                                 : parallel::error_trials(grid[i].point, cfg.trials, seed);
    out.push_back({grid[i], tally.rate(), tally.standard_error(),
                   synthetic_op_count(grid[i].point), tally.trials, tally.errors});
    if (progress) progress(i + 1, grid.size());
  }
  return out;
}

}  // namespace amann

#pragma once

#include <ostream>
#include <string_view>

namespace amann {

enum class Regime { kSparseExact, kSparseCorrupted, kDenseExact, kDenseCorrupted };

std::string_view to_string(Regime regime);
/// Accepts "sparse-exact", "sparse-corrupted", "dense-exact", "dense-corrupted"
/// (underscores also accepted).
Regime parse_regime(std::string_view name);

/// Dense bounds have two forms; which one applies depends on how k grows
/// relative to d, so the caller picks.
enum class DenseBranch {
  kA,  // q exp(-alpha^4 d^2 / (8 k)), for d^4 << k^3
  kB,  // q exp(-alpha^4 d^2 / k^(5/4)), for k <= C d^(4/3)
};

struct BoundInput {
  Regime regime = Regime::kSparseExact;
  double d = 0;
  double k = 0;
  double q = 0;
  /// Used by the corrupted regimes only.
  double alpha = 1.0;
  DenseBranch branch = DenseBranch::kA;
};

/// Closed-form error bound:
///   sparse:  q exp(-alpha^4 d^2 / (32 k))
///   dense A: q exp(-alpha^4 d^2 / (8 k))
///   dense B: q exp(-alpha^4 d^2 / k^(5/4))
/// with alpha = 1 for the exact regimes. Throws ParameterError for
/// nonpositive d, k, q or alpha outside (0, 1].
double theoretical_bound(const BoundInput& input);

struct RegimeReport {
  double d = 0, k = 0, q = 0, alpha = 1;
  double k_over_d = 0;
  double k_over_d2 = 0;
  double k3_over_d4 = 0;
  double k_over_d43 = 0;
  double sparse_exact = 0;
  double sparse_corrupted = 0;
  double dense_exact_a = 0;
  double dense_exact_b = 0;
  double dense_corrupted_a = 0;
  double dense_corrupted_b = 0;
};

/// Ratios that the asymptotic conditions are stated in, and every bound.
/// Informational only: finite sizes cannot decide an asymptotic condition.
RegimeReport regime_check(double d, double k, double q, double alpha = 1.0);

void write_report(std::ostream& out, const RegimeReport& report);

}  // namespace amann

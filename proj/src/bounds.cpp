#include "amann/bounds.hpp"

#include <cmath>
#include <iomanip>
#include <string>

#include "amann/error.hpp"

namespace amann {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kSparseExact: return "sparse-exact";
    case Regime::kSparseCorrupted: return "sparse-corrupted";
    case Regime::kDenseExact: return "dense-exact";
    case Regime::kDenseCorrupted: return "dense-corrupted";
  }
  return "?";
}

Regime parse_regime(std::string_view name) {
  std::string s(name);
  for (char& ch : s) {
    if (ch == '_') ch = '-';
  }
  if (s == "sparse-exact") return Regime::kSparseExact;
  if (s == "sparse-corrupted") return Regime::kSparseCorrupted;
  if (s == "dense-exact") return Regime::kDenseExact;
  if (s == "dense-corrupted") return Regime::kDenseCorrupted;
  throw ParameterError("unknown regime '" + std::string(name) + "'");
}

double theoretical_bound(const BoundInput& in) {
  if (!(in.d > 0) || !(in.k > 0) || !(in.q > 0)) {
    throw ParameterError("bound inputs d, k, q must be positive");
  }
  double a4 = 1.0;
  if (in.regime == Regime::kSparseCorrupted || in.regime == Regime::kDenseCorrupted) {
    if (!(in.alpha > 0 && in.alpha <= 1)) throw ParameterError("alpha must lie in (0, 1]");
    a4 = in.alpha * in.alpha * in.alpha * in.alpha;
  }
  const double d2 = a4 * in.d * in.d;
  switch (in.regime) {
    case Regime::kSparseExact:
    case Regime::kSparseCorrupted:
      return in.q * std::exp(-d2 / (32.0 * in.k));
    case Regime::kDenseExact:
    case Regime::kDenseCorrupted:
      if (in.branch == DenseBranch::kA) return in.q * std::exp(-d2 / (8.0 * in.k));
      return in.q * std::exp(-d2 / std::pow(in.k, 1.25));
  }
  return 0;
}

RegimeReport regime_check(double d, double k, double q, double alpha) {
  RegimeReport r;
  r.d = d;
  r.k = k;
  r.q = q;
  r.alpha = alpha;
  auto bound = [&](Regime regime, DenseBranch branch) {
    return theoretical_bound({regime, d, k, q, alpha, branch});
  };
  r.sparse_exact = bound(Regime::kSparseExact, DenseBranch::kA);
  r.sparse_corrupted = bound(Regime::kSparseCorrupted, DenseBranch::kA);
  r.dense_exact_a = bound(Regime::kDenseExact, DenseBranch::kA);
  r.dense_exact_b = bound(Regime::kDenseExact, DenseBranch::kB);
  r.dense_corrupted_a = bound(Regime::kDenseCorrupted, DenseBranch::kA);
  r.dense_corrupted_b = bound(Regime::kDenseCorrupted, DenseBranch::kB);
  r.k_over_d = k / d;
  r.k_over_d2 = k / (d * d);
  r.k3_over_d4 = (k * k * k) / (d * d * d * d);
  r.k_over_d43 = k / std::pow(d, 4.0 / 3.0);
  return r;
}

void write_report(std::ostream& out, const RegimeReport& r) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(12);
  out << "d " << r.d << "\nk " << r.k << "\nq " << r.q << "\nalpha " << r.alpha << '\n';
  out << "k/d " << r.k_over_d << '\n';
  out << "k/d^2 " << r.k_over_d2 << '\n';
  out << "k^3/d^4 " << r.k3_over_d4 << '\n';
  out << "k/d^(4/3) " << r.k_over_d43 << '\n';
  out << "sparse-exact " << r.sparse_exact << '\n';
  out << "sparse-corrupted " << r.sparse_corrupted << '\n';
  out << "dense-exact-A " << r.dense_exact_a << '\n';
  out << "dense-exact-B " << r.dense_exact_b << '\n';
  out << "dense-corrupted-A " << r.dense_corrupted_a << '\n';
  out << "dense-corrupted-B " << r.dense_corrupted_b << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace amann

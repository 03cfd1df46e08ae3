#pragma once
// Helpers shared by the unit tests: random instances from an independent
// generator (std::mt19937 plus std distributions, not amann::Rng) and naive
// reference computations on expanded vectors.

#include <cstdint>
#include <random>
#include <vector>

#include "amann/pattern.hpp"

namespace amann::testing {

using Engine = std::mt19937;

inline SparsePattern random_sparse(Engine& eng, std::uint32_t dim, double p) {
  std::bernoulli_distribution on(p);
  std::vector<std::uint32_t> active;
  for (std::uint32_t l = 0; l < dim; ++l) {
    if (on(eng)) active.push_back(l);
  }
  return SparsePattern(dim, std::move(active));
}

inline DensePattern random_dense(Engine& eng, std::uint32_t dim) {
  std::bernoulli_distribution on(0.5);
  std::vector<int> signs(dim);
  for (auto& s : signs) s = on(eng) ? 1 : -1;
  return DensePattern::from_signs(signs);
}

inline RealPattern random_real(Engine& eng, std::uint32_t dim) {
  std::normal_distribution<double> g;
  std::vector<double> v(dim);
  for (auto& x : v) x = g(eng);
  return RealPattern(std::move(v));
}

inline std::vector<int> expand(const SparsePattern& x) {
  std::vector<int> v(x.dim(), 0);
  for (auto l : x.active()) v[l] = 1;
  return v;
}

inline std::vector<int> expand(const DensePattern& x) { return x.signs(); }

inline std::vector<double> expand(const RealPattern& x) {
  return {x.values().begin(), x.values().end()};
}

template <class P>
auto naive_dot(const P& x, const P& y) {
  const auto a = expand(x);
  const auto b = expand(y);
  using T = typename decltype(a)::value_type;
  std::conditional_t<std::is_same_v<T, double>, double, std::int64_t> s = 0;
  for (std::size_t l = 0; l < a.size(); ++l) s += a[l] * b[l];
  return s;
}

/// sum over mu, l, m of x_l x_m x^mu_l x^mu_m, four nested loops.
template <class P>
std::int64_t naive_score(const std::vector<P>& patterns, const P& query) {
  const auto x = expand(query);
  std::int64_t s = 0;
  for (const auto& p : patterns) {
    const auto y = expand(p);
    for (std::size_t l = 0; l < x.size(); ++l) {
      for (std::size_t m = 0; m < x.size(); ++m) s += std::int64_t{x[l]} * x[m] * y[l] * y[m];
    }
  }
  return s;
}

/// Exhaustive argmax of naive_dot, lowest id on ties.
template <class P>
std::uint32_t naive_nearest(const std::vector<P>& base, const P& query) {
  std::uint32_t best = 0;
  auto best_value = naive_dot(base[0], query);
  for (std::uint32_t i = 1; i < base.size(); ++i) {
    const auto v = naive_dot(base[i], query);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

}  // namespace amann::testing

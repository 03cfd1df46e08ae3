#include "amann/rng.hpp"

#include <numeric>

#include "amann/error.hpp"

namespace amann {

std::vector<std::uint32_t> sample_without_replacement(std::uint32_t population,
                                                      std::uint32_t count,
                                                      Rng& rng) {
  if (count > population) {
    throw ParameterError("cannot sample " + std::to_string(count) + " of " +
                         std::to_string(population) + " without replacement");
  }
  std::vector<std::uint32_t> pool(population);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::uint32_t>(rng.below(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace amann

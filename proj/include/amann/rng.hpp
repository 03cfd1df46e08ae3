#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace amann {

/// Seeded 64-bit generator used for every random draw in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not (their algorithms are
/// implementation defined), so integer and real draws are derived here from
/// raw engine output. Equal seeds give equal streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  /// Lemire's multiply-and-reject method: exact, division only on rejection.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Mixes a master seed and a stream index into an independent seed
/// (SplitMix64 finalizer applied twice).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ stream);
}

/// Fisher-Yates shuffle driven by Rng.
template <class T>
void shuffle(std::span<T> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(values[i - 1], values[j]);
  }
}

/// `count` distinct values from [0, population), in draw order.
/// Partial Fisher-Yates over an index array; exactly `count` draws.
std::vector<std::uint32_t> sample_without_replacement(std::uint32_t population,
                                                      std::uint32_t count,
                                                      Rng& rng);

}  // namespace amann

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qarch::rng {

// splitmix64 finalizer. Seed derivation goes through this so that results
// depend only on (base_seed, index), never on scheduling or platform.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 1));
}

// Canonical double in [0, 1) from the top 53 bits of the engine output.
// std::uniform_real_distribution is implementation-defined; this is not.
inline double canonical(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) by rejection sampling.
inline std::uint64_t below(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = gen();
  while (x >= limit) x = gen();
  return x % bound;
}

// Fisher-Yates with the rejection sampler above, so shuffles are
// reproducible across standard library implementations.
template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& gen) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[below(gen, i)]);
  }
}

}  // namespace qarch::rng

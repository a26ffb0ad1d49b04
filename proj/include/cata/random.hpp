#ifndef CATA_RANDOM_HPP
#define CATA_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace cata {

using Engine = std::mt19937_64;

/// Stream tags keep the permutation, bootstrap and restart streams of one
/// root seed disjoint.
enum class Stream : std::uint32_t
{
  permutation = 1,
  bootstrap = 2,
  pca_restart = 3,
};

/// Engine for work item `index` of `stream` under `root`. Depends only on
/// its arguments, never on which worker asks.
inline Engine derive_engine(std::uint64_t root, Stream stream, std::uint64_t index)
{
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Engine(seq);
}

/// Uniform integer in [0, bound) by rejection, identical on every platform.
inline std::size_t uniform_below(Engine& rng, std::size_t bound)
{
  const std::uint64_t n = bound;
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n + 1) % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return static_cast<std::size_t>(x % n);
}

/// Fisher-Yates shuffle driven by uniform_below.
template <class T>
void shuffle(std::span<T> items, Engine& rng)
{
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_below(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

} // namespace cata

#endif // CATA_RANDOM_HPP

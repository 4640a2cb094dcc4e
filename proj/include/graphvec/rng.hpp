#ifndef GRAPHVEC_RNG_HPP_
#define GRAPHVEC_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace graphvec {

/// One splitmix64 step. Sub-seeds are derived as splitmix64(seed + stream).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(seed + splitmix64(stream));
}

/// Stream identifiers for derive_seed.
enum class SeedStream : std::uint64_t {
  kInit = 1,
  kShuffle = 2,
  kSampler = 3,  // + worker index
  kInfer = 1u << 20,
  kSplit = 1u << 21,
  kKMeans = 1u << 22,
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream, std::uint64_t offset = 0) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(stream) + offset);
}

/// mt19937_64 with distribution code written out here, so sequences are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n), n > 0, without modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphvec

#endif  // GRAPHVEC_RNG_HPP_

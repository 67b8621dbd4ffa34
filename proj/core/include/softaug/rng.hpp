#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace softaug {

// Deterministic pseudo-random generator with a fixed algorithm (SplitMix64).
// The same seed yields the same draw sequence on every platform; bounded
// draws use Lemire's multiply-shift rejection so results never depend on
// the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent stream for the triple (seed, a, b). Augmentation keys its
  // per-example streams as (seed, example index, copy index).
  static Rng keyed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return Rng(mix(seed ^ mix(a ^ mix(b ^ 0x9E3779B97F4A7C15ull))));
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), 53 random bits.
  double next_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // True with probability p. p<=0 never fires, p>=1 always fires.
  bool next_bernoulli(double p) { return next_real() < p; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_real(); }

  // Uniform in [0,n). Consumes at least one draw even for n=1.
  std::size_t next_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::next_index: n must be positive");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod n
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::size_t>(m >> 64);
  }

  // Fisher-Yates, highest index first.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from [0,n) in random draw order. k is clamped to n.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
    if (k > n) k = n;
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + next_index(n - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace softaug

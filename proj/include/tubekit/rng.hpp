// tubekit - point tube pretext targets for point cloud videos
// Counter-based random streams.

#ifndef TUBEKIT_RNG_HPP
#define TUBEKIT_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace tubekit {

/**
 * @brief Counter-based generator built on the SplitMix64 finalizer.
 *
 * Output i of a stream with key k is mix(k + (i + 1) * golden), so a value
 * depends only on (key, counter). Streams for independent work items are
 * derived from a root seed with derive_key(), which makes results
 * independent of the order in which items are processed. The sequence is
 * fully specified here (no std:: distributions), so outputs are identical
 * across standard libraries and platforms.
 */
class CounterRng {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Key for the stream addressed by `path` under `seed`.
  static constexpr std::uint64_t derive_key(std::uint64_t seed,
                                            std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t k = mix(seed + kGolden);
    for (std::uint64_t p : path) k = mix(k ^ mix(p + kGolden));
    return k;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  // Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift with
  // rejection, so the result is unbiased.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept {
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream tags used by the pipeline. Fixed values: changing one changes
// every derived sample.
namespace stream {
inline constexpr std::uint64_t kKeyPointFps = 1;
inline constexpr std::uint64_t kBallQuery = 2;
inline constexpr std::uint64_t kMask = 3;
inline constexpr std::uint64_t kMlpInit = 4;
inline constexpr std::uint64_t kSynthetic = 5;
}  // namespace stream

}  // namespace tubekit

#endif  // TUBEKIT_RNG_HPP

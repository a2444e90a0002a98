#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ccsat {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seedable generator with portable draws: the same seed yields the same
/// sequence on every standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n). n must be positive.
  std::size_t below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform01() < p; }
  bool coin() { return (next() >> 63) != 0; }

private:
  std::mt19937_64 engine_;
};

/// Independent stream for one try, derived from (seed, try index) only, so a
/// try replays identically no matter which worker runs it.
inline Rng try_stream(std::uint64_t seed, std::uint64_t try_index) {
  return Rng(splitmix64(seed ^ splitmix64(try_index + 0x632be59bd9b4e019ULL)));
}

} // namespace ccsat

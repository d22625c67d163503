#ifndef AOINET_RNG_HPP
#define AOINET_RNG_HPP

#include <cstdint>
#include <random>

namespace aoinet {

// splitmix64 finalizer; used to derive independent child seeds from a base
// seed without correlating nearby streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// mt19937_64 with a fixed bits-to-double mapping. std::uniform_real_distribution
// is implementation-defined, so all draws go through these methods to keep
// results reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace aoinet

#endif  // AOINET_RNG_HPP

#ifndef BP_RNG_HPP
#define BP_RNG_HPP

#include <cmath>
#include <cstdint>

#include "constants.hpp"

namespace bp {

// Counter-based generator: every variate is a pure function of
// (seed, stream, index, slot), so event generation can be partitioned
// arbitrarily without changing the output.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t raw(std::uint64_t stream, std::uint64_t index,
                    std::uint64_t slot) const {
    std::uint64_t x = mix(seed_ ^ (stream * 0x9e3779b97f4a7c15ULL));
    x = mix(x ^ (index * 0xbf58476d1ce4e5b9ULL));
    return mix(x ^ (slot * 0x94d049bb133111ebULL));
  }

  // uniform in (0, 1]
  double uniform(std::uint64_t stream, std::uint64_t index,
                 std::uint64_t slot) const {
    return (static_cast<double>(raw(stream, index, slot) >> 11) + 1.0) *
           0x1.0p-53;
  }

  bool bernoulli(double p, std::uint64_t stream, std::uint64_t index,
                 std::uint64_t slot) const {
    return uniform(stream, index, slot) <= p;
  }

  // Box-Muller; consumes slots slot and slot+1.
  double gaussian(std::uint64_t stream, std::uint64_t index,
                  std::uint64_t slot) const {
    const double u1 = uniform(stream, index, slot);
    const double u2 = uniform(stream, index, slot + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Poisson count; inversion for small mean, normal approximation above.
  // Consumes slots slot and slot+1.
  std::uint64_t poisson(double mean, std::uint64_t stream, std::uint64_t index,
                        std::uint64_t slot) const {
    if (mean <= 0.0) return 0;
    if (mean < 60.0) {
      double u = uniform(stream, index, slot);
      double p = std::exp(-mean);
      double cum = p;
      std::uint64_t k = 0;
      while (u > cum && k < 1000) {
        ++k;
        p *= mean / static_cast<double>(k);
        cum += p;
      }
      return k;
    }
    const double z = gaussian(stream, index, slot);
    const double k = std::round(mean + std::sqrt(mean) * z);
    return k > 0.0 ? static_cast<std::uint64_t>(k) : 0;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  std::uint64_t seed_;
};

}  // namespace bp

#endif

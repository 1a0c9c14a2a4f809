#ifndef BP_SOURCE_SIM_HPP
#define BP_SOURCE_SIM_HPP

#include <cstdint>
#include <stdexcept>

#include "tagstream.hpp"
#include "temporal_mode.hpp"

namespace bp {

// Logical channel ids used by all simulators and the analysis presets.
namespace channels {
inline constexpr std::uint8_t kIdlerA = 0;
inline constexpr std::uint8_t kSignalA = 1;
inline constexpr std::uint8_t kIdlerB = 2;
inline constexpr std::uint8_t kSignalB = 3;
inline constexpr std::uint8_t kSplitT = 4;  // BS output 1 / transmitted arm
inline constexpr std::uint8_t kSplitR = 5;  // BS output 2 / reflected arm
}  // namespace channels

struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SourceConfig {
  double pair_rate = 1e5;            // generated pairs/s, pre-loss
  TemporalMode mode{0.15e-9, 1.0e-9};
  double signal_transmission = 1.0;  // optics x fiber x detector
  double idler_transmission = 1.0;
  double signal_noise_rate = 0.0;    // uncorrelated counts/s
  double idler_noise_rate = 0.0;
  double jitter_fwhm = 0.0;          // s, Gaussian, per detector
  double dead_time = 0.0;            // s, 0 = off
  double duration = 1.0;             // s
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument / ResourceLimitError
};

// Pair creation times are homogeneous Poisson; the idler is tagged at the
// creation time and the signal at creation + delay with delay ~ |psi|^2.
// Noise, thinning, jitter and dead time are applied per channel. Fully
// deterministic in (config, seed) for any generation partitioning.
TagStream simulate_pairs(const SourceConfig& config,
                         std::uint8_t idler_channel = channels::kIdlerA,
                         std::uint8_t signal_channel = channels::kSignalA);

// Two sources interfering on a balanced beam splitter. Signals from the two
// sources are matched by nearest emission time; a matched pair lands on
// opposite outputs with probability (1 - chi^2 |overlap(dt)|^2)/2 and bunches
// otherwise. chi in [0,1] scales the modal indistinguishability (1 = pure
// temporal-mode overlap, 0 = fully distinguishable). Unmatched and noise
// signals route independently. Channels: idler A/B = 0/2, outputs = 4/5.
TagStream simulate_hom_experiment(const SourceConfig& config_a,
                                  const SourceConfig& config_b,
                                  double indistinguishability,
                                  std::uint64_t beamsplitter_seed);

// Signals split 50/50 onto channels 4/5 ahead of the detectors; idler on 0.
TagStream simulate_heralded_autocorr(const SourceConfig& config,
                                     std::uint64_t splitter_seed);

}  // namespace bp

#endif

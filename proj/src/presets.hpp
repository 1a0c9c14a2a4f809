#ifndef BP_PRESETS_HPP
#define BP_PRESETS_HPP

#include <string>

#include "source_sim.hpp"

namespace bp {

// Named source parameter sets.
//
// "paper-2023": 90% detector efficiency, 55 ps jitter. The transmissions and
// noise rates encode a documented end-to-end loss/noise budget calibrated so
// that the analysis chain lands on heralding efficiency ~24%, peak
// normalized cross-correlation ~200 at a detected pair rate of ~200 kcps,
// and conditioned autocorrelation ~0.011 at ~37 kcps.
//
// "paper-2021": same source with 68% detector efficiency and 350 ps jitter.
//
// "ideal": unit transmission, no noise, no jitter; handy for fixtures.
//
// Throws std::invalid_argument for an unknown name.
SourceConfig preset(const std::string& name);

bool preset_exists(const std::string& name);

}  // namespace bp

#endif

#ifndef BP_CONSTANTS_HPP
#define BP_CONSTANTS_HPP

namespace bp {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// FWHM -> Gaussian sigma, 2*sqrt(2*ln 2)
inline constexpr double kFwhmToSigma = 1.0 / 2.3548200450309493;

inline constexpr double kPicosecond = 1e-12;

}  // namespace bp

#endif

#ifndef BP_PHASEMATCH_HPP
#define BP_PHASEMATCH_HPP

#include <vector>

namespace bp {

// Counter-propagating ladder FWM geometry. Angular frequencies are derived
// from the two transition wavelengths; the pump detuning carries its sign.
struct OpticalGeometry {
  double lambda_sp = 780e-9;      // m, lower transition (signal/pump leg)
  double lambda_pd = 776e-9;      // m, upper transition (idler/control leg)
  double cell_length = 25e-3;     // m
  double pump_detuning = 0.0;     // rad/s, signed
  double signal_angle = 0.0;      // rad, >= 0

  double omega_sp() const;  // rad/s
  double omega_pd() const;  // rad/s
  void validate() const;    // throws std::invalid_argument on bad fields
};

struct PhaseMatchResult {
  double delta_k = 0.0;        // rad/m
  double factor = 0.0;         // sinc^2(delta_k L/2), in [0,1]
  double optimal_angle = 0.0;  // rad, set by angle searches
};

struct ScanRow {
  double theta;      // rad
  double detuning;   // rad/s
  double factor;
};

// Wavevector mismatch projected on the optical axis. The idler angle is tied
// to the signal angle by transverse momentum conservation,
// theta_i = theta_s * omega_sp/omega_pd.
double delta_k_exact(const OpticalGeometry& geom);

// Quadratic small-angle expansion of delta_k_exact.
double delta_k_small_angle(const OpticalGeometry& geom);

// |sinc(delta_k L/2)|^2 with the removable singularity handled.
double phase_match_factor(double delta_k, double cell_length);

double idler_angle(double signal_angle, const OpticalGeometry& geom);

// argmax over theta_s >= 0 of the phase-matching factor at the geometry's
// detuning. For negative detuning this is the root of delta_k (factor 1);
// for zero or positive detuning the best angle is 0.
PhaseMatchResult optimal_signal_angle(const OpticalGeometry& geom);

// Evaluates the factor over the cartesian grid, detunings outer, angles
// inner. Throws std::invalid_argument on an empty grid.
std::vector<ScanRow> scan_phase_matching(const std::vector<double>& thetas,
                                         const std::vector<double>& detunings,
                                         const OpticalGeometry& geom);

}  // namespace bp

#endif

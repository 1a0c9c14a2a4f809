#ifndef BP_TEMPORAL_MODE_HPP
#define BP_TEMPORAL_MODE_HPP

#include <cstdint>
#include <vector>

namespace bp {

// Cascade bi-photon temporal amplitude
//   psi(tau) = N (exp(-tau/decay) - exp(-tau/rise)),  tau >= 0,
// normalized so that the intensity integrates to 1.
class TemporalMode {
 public:
  TemporalMode(double rise_time, double decay_time);

  double rise_time() const { return rise_; }
  double decay_time() const { return decay_; }
  double norm() const { return norm_; }  // N

  double amplitude(double tau) const;    // psi(tau)
  double intensity(double tau) const;    // |psi(tau)|^2

  // int_0^w |psi|^2 dtau, closed form; the CDF of the delay density.
  double energy_fraction(double window) const;

  double mean_delay() const;  // int tau |psi|^2 dtau

 private:
  double rise_;
  double decay_;
  double norm_;
};

// |int psi_a*(t) psi_b(t - dt) dt|, closed form. Symmetric under
// (a,b,dt) -> (b,a,-dt); equals 1 iff the modes coincide and dt = 0.
double mode_overlap(const TemporalMode& a, const TemporalMode& b, double dt);

// Two pure photons on a balanced beam splitter: P(coincidence) =
// (1 - |overlap|^2) / 2, in [0, 1/2].
double hom_coincidence_probability(const TemporalMode& a, const TemporalMode& b,
                                   double dt);

// Inverse-CDF sampler for the delay density |psi|^2 on a precomputed grid
// spanning [0, 12*decay] with linear interpolation between nodes.
class DelaySampler {
 public:
  explicit DelaySampler(const TemporalMode& mode, std::size_t grid_points = 10000);

  // Maps a uniform u in [0,1) to a delay in seconds.
  double invert(double u) const;

 private:
  std::vector<double> tau_;  // grid nodes
  std::vector<double> cdf_;  // normalized to cdf_.back() == 1
};

}  // namespace bp

#endif

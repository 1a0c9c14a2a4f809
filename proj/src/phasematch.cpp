#include "phasematch.hpp"

#include <cmath>
#include <stdexcept>

#include "constants.hpp"

namespace bp {

double OpticalGeometry::omega_sp() const { return kTwoPi * kSpeedOfLight / lambda_sp; }
double OpticalGeometry::omega_pd() const { return kTwoPi * kSpeedOfLight / lambda_pd; }

void OpticalGeometry::validate() const {
  if (!(lambda_pd > 0.0) || !(lambda_sp > lambda_pd))
    throw std::invalid_argument("geometry: require lambda_sp > lambda_pd > 0");
  if (!(cell_length > 0.0))
    throw std::invalid_argument("geometry: cell_length must be positive");
  if (!(signal_angle >= 0.0) || !(signal_angle < kPi / 2))
    throw std::invalid_argument("geometry: signal_angle must be in [0, pi/2)");
}

double delta_k_exact(const OpticalGeometry& geom) {
  geom.validate();
  const double w_sp = geom.omega_sp();
  const double w_pd = geom.omega_pd();
  const double dp = geom.pump_detuning;
  const double th = geom.signal_angle;
  const double axial = w_sp * std::cos(th) - w_pd * std::cos(th * w_sp / w_pd);
  return ((w_sp + dp) - (w_pd - dp) - axial) / kSpeedOfLight;
}

double delta_k_small_angle(const OpticalGeometry& geom) {
  geom.validate();
  const double w_sp = geom.omega_sp();
  const double w_pd = geom.omega_pd();
  const double th = geom.signal_angle;
  return (2.0 * geom.pump_detuning +
          0.5 * th * th * w_sp * (1.0 - w_sp / w_pd)) / kSpeedOfLight;
}

double phase_match_factor(double delta_k, double cell_length) {
  if (!(cell_length > 0.0))
    throw std::invalid_argument("phase_match_factor: cell_length must be positive");
  const double x = 0.5 * delta_k * cell_length;
  double s;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    s = 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);  // sin(x)/x series
  } else {
    s = std::sin(x) / x;
  }
  return s * s;
}

double idler_angle(double signal_angle, const OpticalGeometry& geom) {
  geom.validate();
  return signal_angle * geom.omega_sp() / geom.omega_pd();
}

PhaseMatchResult optimal_signal_angle(const OpticalGeometry& geom) {
  OpticalGeometry g = geom;
  g.signal_angle = 0.0;
  g.validate();
  PhaseMatchResult res;
  if (g.pump_detuning >= 0.0) {
    // Both terms of delta_k are nonnegative; |delta_k| is smallest on axis.
    res.optimal_angle = 0.0;
    res.delta_k = delta_k_exact(g);
    res.factor = phase_match_factor(res.delta_k, g.cell_length);
    return res;
  }
  // delta_k(0) < 0 and delta_k grows monotonically with theta on [0, 0.2];
  // bisect for the root.
  double lo = 0.0;
  double hi = 0.2;
  auto dk_at = [&g](double th) {
    g.signal_angle = th;
    return delta_k_exact(g);
  };
  if (dk_at(hi) < 0.0)
    throw std::invalid_argument("optimal_signal_angle: no root below 0.2 rad");
  const double tol = 1e-12;
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (dk_at(mid) < 0.0 ? lo : hi) = mid;
  }
  res.optimal_angle = 0.5 * (lo + hi);
  res.delta_k = dk_at(res.optimal_angle);
  res.factor = phase_match_factor(res.delta_k, g.cell_length);
  return res;
}

std::vector<ScanRow> scan_phase_matching(const std::vector<double>& thetas,
                                         const std::vector<double>& detunings,
                                         const OpticalGeometry& geom) {
  if (thetas.empty() || detunings.empty())
    throw std::invalid_argument("scan_phase_matching: empty grid");
  std::vector<ScanRow> rows;
  rows.reserve(thetas.size() * detunings.size());
  OpticalGeometry g = geom;
  for (double dp : detunings) {
    for (double th : thetas) {
      g.pump_detuning = dp;
      g.signal_angle = th;
      const double dk = delta_k_exact(g);
      rows.push_back({th, dp, phase_match_factor(dk, g.cell_length)});
    }
  }
  return rows;
}

}  // namespace bp

#include "temporal_mode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bp {

namespace {

// int_0^w |psi|^2 dtau / N^2, with w = infinity for w < 0
double intensity_integral(double rise, double decay, double w) {
  const double s = 1.0 / decay + 1.0 / rise;
  if (w < 0.0)
    return 0.5 * decay - 2.0 / s + 0.5 * rise;
  return 0.5 * decay * (1.0 - std::exp(-2.0 * w / decay)) -
         (2.0 / s) * (1.0 - std::exp(-s * w)) +
         0.5 * rise * (1.0 - std::exp(-2.0 * w / rise));
}

}  // namespace

TemporalMode::TemporalMode(double rise_time, double decay_time)
    : rise_(rise_time), decay_(decay_time) {
  if (!(rise_time > 0.0) || !(decay_time > rise_time))
    throw std::invalid_argument("TemporalMode: require 0 < rise_time < decay_time");
  norm_ = 1.0 / std::sqrt(intensity_integral(rise_, decay_, -1.0));
}

double TemporalMode::amplitude(double tau) const {
  if (tau < 0.0) return 0.0;
  return norm_ * (std::exp(-tau / decay_) - std::exp(-tau / rise_));
}

double TemporalMode::intensity(double tau) const {
  const double a = amplitude(tau);
  return a * a;
}

double TemporalMode::energy_fraction(double window) const {
  if (window < 0.0)
    throw std::invalid_argument("energy_fraction: window must be >= 0");
  return norm_ * norm_ * intensity_integral(rise_, decay_, window);
}

double TemporalMode::mean_delay() const {
  const double s = 1.0 / decay_ + 1.0 / rise_;
  return norm_ * norm_ *
         (0.25 * decay_ * decay_ - 2.0 / (s * s) + 0.25 * rise_ * rise_);
}

double mode_overlap(const TemporalMode& a, const TemporalMode& b, double dt) {
  if (dt < 0.0) return mode_overlap(b, a, -dt);
  // psi_a(t) psi_b(t-dt) integrated over t >= dt; each cross term
  // exp(-t/alpha) exp(-(t-dt)/beta) contributes exp(-dt/alpha)/(1/alpha+1/beta).
  const double terms_a[2][2] = {{1.0, a.decay_time()}, {-1.0, a.rise_time()}};
  const double terms_b[2][2] = {{1.0, b.decay_time()}, {-1.0, b.rise_time()}};
  double sum = 0.0;
  for (const auto& ta : terms_a) {
    const double ea = std::exp(-dt / ta[1]);
    for (const auto& tb : terms_b)
      sum += ta[0] * tb[0] * ea / (1.0 / ta[1] + 1.0 / tb[1]);
  }
  return std::abs(a.norm() * b.norm() * sum);
}

double hom_coincidence_probability(const TemporalMode& a, const TemporalMode& b,
                                   double dt) {
  const double o = mode_overlap(a, b, dt);
  return 0.5 * (1.0 - o * o);
}

DelaySampler::DelaySampler(const TemporalMode& mode, std::size_t grid_points) {
  if (grid_points < 2)
    throw std::invalid_argument("DelaySampler: need at least 2 grid points");
  const double span = 12.0 * mode.decay_time();
  tau_.resize(grid_points);
  cdf_.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    tau_[i] = span * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    cdf_[i] = mode.energy_fraction(tau_[i]);
  }
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
}

double DelaySampler::invert(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return tau_.front();
  if (it == cdf_.end()) return tau_.back();
  const std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
  const std::size_t lo = hi - 1;
  const double dc = cdf_[hi] - cdf_[lo];
  const double f = dc > 0.0 ? (u - cdf_[lo]) / dc : 0.0;
  return tau_[lo] + f * (tau_[hi] - tau_[lo]);
}

}  // namespace bp

#ifndef BP_CORRELATE_HPP
#define BP_CORRELATE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tagstream.hpp"

namespace bp {

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorrelationHistogram {
  std::uint64_t bin_width_ps = 100;
  std::int64_t tau_min_ps = 0;       // left edge of bin 0
  std::vector<std::uint64_t> counts;
  double duration = 0.0;             // s
  std::uint64_t n_signal = 0;
  std::uint64_t n_idler = 0;

  std::size_t bins() const { return counts.size(); }
  std::int64_t bin_center_ps(std::size_t i) const {
    return tau_min_ps + static_cast<std::int64_t>(i * bin_width_ps) +
           static_cast<std::int64_t>(bin_width_ps) / 2;
  }
  // g2(tau_bin) = counts * T / (N_s * N_i * bin_width)
  double g2(std::size_t i) const;
};

struct HeraldWindow {
  std::int64_t offset_ps = 0;
  std::uint64_t width_ps = 3500;  // 3.5 ns default
};

struct HeraldStats {
  double eta_h = 0.0;          // accidental-corrected, clamped to [0,1]
  double eta_h_raw = 0.0;      // matched / idlers
  double accidental = 0.0;     // expected accidental matches per idler
  double pair_rate = 0.0;      // detected coincidences/s, accidental-corrected
  std::uint64_t n_idler = 0;
  std::uint64_t n_signal = 0;
  std::uint64_t matched = 0;   // idlers with >= 1 in-window signal
  bool window_warning = false; // negative corrected estimate before clamping
};

struct ConditionedG2 {
  double g2c = 0.0;  // N_itr * N_i / (N_it * N_ir)
  std::uint64_t n_idler = 0;
  std::uint64_t n_it = 0;
  std::uint64_t n_ir = 0;
  std::uint64_t n_itr = 0;
};

struct HomProfile {
  std::uint64_t bin_width_ps = 0;
  std::vector<std::int64_t> bin_center_ps;  // herald time difference
  std::vector<std::uint64_t> counts;        // cross-output coincidences
  double dip = 0.0;        // counts in the zero-delay bin
  double baseline = 0.0;   // mean counts in the far wings
  double visibility = 0.0; // 1 - dip/baseline
};

// Cross-correlation histogram over tau = t_signal - t_idler in
// [tau_min, tau_min + bins*bin_width), sliding-window O(N k). The result is
// bit-identical for any worker count. duration <= 0 derives T from the
// stream's time span. Throws AnalysisError when a channel has no tags.
CorrelationHistogram g2_cross(const TagStream& stream, std::uint8_t idler_ch,
                              std::uint8_t signal_ch, std::uint64_t bin_width_ps,
                              std::int64_t tau_min_ps, std::int64_t tau_max_ps,
                              double duration = 0.0, unsigned threads = 1);

// Raw bin maximum; ties resolved toward smaller tau.
struct G2Peak {
  std::int64_t tau_ps = 0;
  double g2 = 0.0;
  std::uint64_t counts = 0;
};
G2Peak g2_peak(const CorrelationHistogram& hist);

// Fraction of idler detections heralding >= 1 in-window signal, minus the
// accidental expectation R_signal * window.
HeraldStats heralding_efficiency(const TagStream& stream, std::uint8_t idler_ch,
                                 std::uint8_t signal_ch, const HeraldWindow& window,
                                 double duration = 0.0);

// Auto-correlation of the split signal conditioned on an idler detection.
ConditionedG2 heralded_g2c(const TagStream& stream, std::uint8_t idler_ch,
                           std::uint8_t t_ch, std::uint8_t r_ch,
                           const HeraldWindow& window);

// Cross-output coincidences binned by the herald time difference
// t_idlerB - t_idlerA. Bins are centered on multiples of delay_bin_ps up to
// +-delay_range_ps; the baseline averages bins with |center| >=
// baseline_min_ps. Throws AnalysisError when the baseline is empty or zero.
HomProfile hom_profile(const TagStream& stream, std::uint8_t idler_a,
                       std::uint8_t idler_b, std::uint8_t out1, std::uint8_t out2,
                       const HeraldWindow& window, std::uint64_t delay_bin_ps,
                       std::uint64_t delay_range_ps, std::uint64_t baseline_min_ps);

}  // namespace bp

#endif

#include "correlate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace bp {

namespace {

double stream_span_seconds(const TagStream& stream) {
  if (stream.empty()) return 0.0;
  const std::uint64_t first = stream.tags().front().time_ps;
  const std::uint64_t last = stream.tags().back().time_ps;
  return static_cast<double>(last - first + 1) * 1e-12;
}

bool has_tag_in(const std::vector<std::uint64_t>& sorted, std::int64_t lo,
                std::int64_t hi) {
  if (hi <= lo) return false;
  const std::uint64_t ulo = lo > 0 ? static_cast<std::uint64_t>(lo) : 0;
  const std::uint64_t uhi = hi > 0 ? static_cast<std::uint64_t>(hi) : 0;
  auto it = std::lower_bound(sorted.begin(), sorted.end(), ulo);
  return it != sorted.end() && *it < uhi;
}

}  // namespace

double CorrelationHistogram::g2(std::size_t i) const {
  const double denom = static_cast<double>(n_signal) * static_cast<double>(n_idler) *
                       static_cast<double>(bin_width_ps) * 1e-12;
  return static_cast<double>(counts[i]) * duration / denom;
}

CorrelationHistogram g2_cross(const TagStream& stream, std::uint8_t idler_ch,
                              std::uint8_t signal_ch, std::uint64_t bin_width_ps,
                              std::int64_t tau_min_ps, std::int64_t tau_max_ps,
                              double duration, unsigned threads) {
  if (bin_width_ps == 0 || tau_max_ps <= tau_min_ps)
    throw std::invalid_argument("g2_cross: bad binning");
  const std::vector<std::uint64_t> idler = stream.channel_times(idler_ch);
  const std::vector<std::uint64_t> signal = stream.channel_times(signal_ch);
  if (idler.empty() || signal.empty())
    throw AnalysisError("g2_cross: zero singles on a channel, normalization undefined");

  const std::size_t n_bins =
      static_cast<std::size_t>((tau_max_ps - tau_min_ps + static_cast<std::int64_t>(bin_width_ps) - 1) /
                               static_cast<std::int64_t>(bin_width_ps));
  const std::int64_t span = static_cast<std::int64_t>(n_bins * bin_width_ps);

  if (threads == 0) threads = 1;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(idler.size()));
  std::vector<std::vector<std::uint64_t>> partial(threads,
                                                  std::vector<std::uint64_t>(n_bins, 0));

  auto worker = [&](unsigned w) {
    std::vector<std::uint64_t>& hist = partial[w];
    const std::size_t begin = idler.size() * w / threads;
    const std::size_t end = idler.size() * (w + 1) / threads;
    std::size_t s = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const std::int64_t t = static_cast<std::int64_t>(idler[i]);
      const std::int64_t lo = t + tau_min_ps;
      // first signal with time >= lo; monotone in i, but re-seek after jumps
      if (s >= signal.size() || static_cast<std::int64_t>(signal[s]) < lo)
        s = static_cast<std::size_t>(
            std::lower_bound(signal.begin() + static_cast<std::ptrdiff_t>(s),
                             signal.end(), lo > 0 ? static_cast<std::uint64_t>(lo) : 0) -
            signal.begin());
      else
        while (s > 0 && static_cast<std::int64_t>(signal[s - 1]) >= lo) --s;
      for (std::size_t k = s; k < signal.size(); ++k) {
        const std::int64_t tau = static_cast<std::int64_t>(signal[k]) - t;
        if (tau >= tau_min_ps + span) break;
        if (tau < tau_min_ps) continue;
        ++hist[static_cast<std::size_t>((tau - tau_min_ps) /
                                        static_cast<std::int64_t>(bin_width_ps))];
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  CorrelationHistogram hist;
  hist.bin_width_ps = bin_width_ps;
  hist.tau_min_ps = tau_min_ps;
  hist.counts.assign(n_bins, 0);
  for (const auto& p : partial)
    for (std::size_t b = 0; b < n_bins; ++b) hist.counts[b] += p[b];
  hist.duration = duration > 0.0 ? duration : stream_span_seconds(stream);
  hist.n_idler = idler.size();
  hist.n_signal = signal.size();
  return hist;
}

G2Peak g2_peak(const CorrelationHistogram& hist) {
  if (hist.counts.empty()) throw AnalysisError("g2_peak: empty histogram");
  std::size_t best = 0;
  for (std::size_t i = 1; i < hist.counts.size(); ++i)
    if (hist.counts[i] > hist.counts[best]) best = i;
  return {hist.bin_center_ps(best), hist.g2(best), hist.counts[best]};
}

HeraldStats heralding_efficiency(const TagStream& stream, std::uint8_t idler_ch,
                                 std::uint8_t signal_ch, const HeraldWindow& window,
                                 double duration) {
  if (window.width_ps == 0)
    throw std::invalid_argument("heralding_efficiency: window width must be positive");
  const std::vector<std::uint64_t> idler = stream.channel_times(idler_ch);
  const std::vector<std::uint64_t> signal = stream.channel_times(signal_ch);
  if (idler.empty())
    throw AnalysisError("heralding_efficiency: no idler detections");

  HeraldStats stats;
  stats.n_idler = idler.size();
  stats.n_signal = signal.size();
  for (std::uint64_t t : idler) {
    const std::int64_t lo = static_cast<std::int64_t>(t) + window.offset_ps;
    stats.matched += has_tag_in(signal, lo, lo + static_cast<std::int64_t>(window.width_ps));
  }
  const double span = duration > 0.0 ? duration : stream_span_seconds(stream);
  const double signal_rate = span > 0.0 ? static_cast<double>(signal.size()) / span : 0.0;
  stats.accidental = signal_rate * static_cast<double>(window.width_ps) * 1e-12;
  stats.eta_h_raw =
      static_cast<double>(stats.matched) / static_cast<double>(stats.n_idler);
  const double corrected = stats.eta_h_raw - stats.accidental;
  stats.window_warning = corrected < 0.0;
  stats.eta_h = std::clamp(corrected, 0.0, 1.0);
  stats.pair_rate =
      span > 0.0 ? std::max(0.0, corrected * static_cast<double>(stats.n_idler) / span)
                 : 0.0;
  return stats;
}

ConditionedG2 heralded_g2c(const TagStream& stream, std::uint8_t idler_ch,
                           std::uint8_t t_ch, std::uint8_t r_ch,
                           const HeraldWindow& window) {
  if (window.width_ps == 0)
    throw std::invalid_argument("heralded_g2c: window width must be positive");
  const std::vector<std::uint64_t> idler = stream.channel_times(idler_ch);
  const std::vector<std::uint64_t> arm_t = stream.channel_times(t_ch);
  const std::vector<std::uint64_t> arm_r = stream.channel_times(r_ch);
  if (idler.empty()) throw AnalysisError("heralded_g2c: no idler detections");

  ConditionedG2 res;
  res.n_idler = idler.size();
  for (std::uint64_t t : idler) {
    const std::int64_t lo = static_cast<std::int64_t>(t) + window.offset_ps;
    const std::int64_t hi = lo + static_cast<std::int64_t>(window.width_ps);
    const bool in_t = has_tag_in(arm_t, lo, hi);
    const bool in_r = has_tag_in(arm_r, lo, hi);
    res.n_it += in_t;
    res.n_ir += in_r;
    res.n_itr += in_t && in_r;
  }
  if (res.n_it == 0 || res.n_ir == 0) {
    res.g2c = 0.0;
    return res;
  }
  res.g2c = static_cast<double>(res.n_itr) * static_cast<double>(res.n_idler) /
            (static_cast<double>(res.n_it) * static_cast<double>(res.n_ir));
  return res;
}

HomProfile hom_profile(const TagStream& stream, std::uint8_t idler_a,
                       std::uint8_t idler_b, std::uint8_t out1, std::uint8_t out2,
                       const HeraldWindow& window, std::uint64_t delay_bin_ps,
                       std::uint64_t delay_range_ps, std::uint64_t baseline_min_ps) {
  if (delay_bin_ps == 0 || delay_range_ps < delay_bin_ps)
    throw std::invalid_argument("hom_profile: bad delay binning");
  if (baseline_min_ps >= delay_range_ps)
    throw std::invalid_argument("hom_profile: baseline region outside delay range");
  const std::vector<std::uint64_t> ia = stream.channel_times(idler_a);
  const std::vector<std::uint64_t> ib = stream.channel_times(idler_b);
  const std::vector<std::uint64_t> o1 = stream.channel_times(out1);
  const std::vector<std::uint64_t> o2 = stream.channel_times(out2);
  if (ia.empty() || ib.empty())
    throw AnalysisError("hom_profile: missing herald detections");

  const std::int64_t bw = static_cast<std::int64_t>(delay_bin_ps);
  const std::int64_t n_side = static_cast<std::int64_t>(delay_range_ps / delay_bin_ps);
  const std::size_t n_bins = static_cast<std::size_t>(2 * n_side + 1);

  HomProfile prof;
  prof.bin_width_ps = delay_bin_ps;
  prof.bin_center_ps.resize(n_bins);
  prof.counts.assign(n_bins, 0);
  for (std::size_t i = 0; i < n_bins; ++i)
    prof.bin_center_ps[i] = (static_cast<std::int64_t>(i) - n_side) * bw;

  const std::int64_t w = static_cast<std::int64_t>(window.width_ps);
  const std::int64_t reach = n_side * bw + bw / 2;
  std::size_t j_lo = 0;
  for (std::uint64_t ta_u : ia) {
    const std::int64_t ta = static_cast<std::int64_t>(ta_u);
    while (j_lo < ib.size() && static_cast<std::int64_t>(ib[j_lo]) < ta - reach) ++j_lo;
    for (std::size_t j = j_lo; j < ib.size(); ++j) {
      const std::int64_t tb = static_cast<std::int64_t>(ib[j]);
      const std::int64_t dt = tb - ta;
      if (dt > reach) break;
      const std::int64_t bin = n_side + (2 * (dt >= 0 ? dt : -dt) + bw) / (2 * bw) *
                                            (dt >= 0 ? 1 : -1);
      if (bin < 0 || bin >= static_cast<std::int64_t>(n_bins)) continue;
      const std::int64_t a_lo = ta + window.offset_ps;
      const std::int64_t b_lo = tb + window.offset_ps;
      const bool hit1 = has_tag_in(o1, a_lo, a_lo + w) || has_tag_in(o1, b_lo, b_lo + w);
      if (!hit1) continue;
      const bool hit2 = has_tag_in(o2, a_lo, a_lo + w) || has_tag_in(o2, b_lo, b_lo + w);
      if (hit2) ++prof.counts[static_cast<std::size_t>(bin)];
    }
  }

  prof.dip = static_cast<double>(prof.counts[static_cast<std::size_t>(n_side)]);
  double base_sum = 0.0;
  std::size_t base_n = 0;
  for (std::size_t i = 0; i < n_bins; ++i) {
    const std::int64_t c = prof.bin_center_ps[i];
    if (static_cast<std::uint64_t>(c >= 0 ? c : -c) >= baseline_min_ps) {
      base_sum += static_cast<double>(prof.counts[i]);
      ++base_n;
    }
  }
  if (base_n == 0 || base_sum == 0.0)
    throw AnalysisError("hom_profile: empty baseline, visibility undefined");
  prof.baseline = base_sum / static_cast<double>(base_n);
  prof.visibility = 1.0 - prof.dip / prof.baseline;
  return prof;
}

}  // namespace bp
